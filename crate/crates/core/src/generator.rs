//! Seeded random synthetic connectives and mutations that break one
//! condition each.
//!
//! The PRNG is ChaCha8 seeded with `seed_from_u64`; the seed → spec mapping is
//! stable output and pinned by golden tests.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::calculus::{ConnectiveSpec, Formula, Item, Provenance, RuleScheme, Sequent, Side};
use crate::classify::{classify, matrix_to_rules, Polarity, SchemeMatrix};
use crate::dsl::MAX_ARITY;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenBounds {
    pub max_arity: usize,
    pub max_branches: usize,
    pub max_group: usize,
}

impl Default for GenBounds {
    fn default() -> Self {
        Self { max_arity: 4, max_branches: 3, max_group: 3 }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("generator bound {0} must be at least 1")]
    ZeroBound(&'static str),
    #[error("max arity {0} exceeds the cap of {MAX_ARITY}")]
    ArityCap(usize),
}

impl GenBounds {
    pub fn validate(&self) -> Result<(), GenError> {
        if self.max_arity == 0 {
            return Err(GenError::ZeroBound("max_arity"));
        }
        if self.max_branches == 0 {
            return Err(GenError::ZeroBound("max_branches"));
        }
        if self.max_group == 0 {
            return Err(GenError::ZeroBound("max_group"));
        }
        if self.max_arity > MAX_ARITY {
            return Err(GenError::ArityCap(self.max_arity));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MutationKind {
    ContextChange,
    MultiFormation,
    SideMismatch,
    DropRule,
}

impl MutationKind {
    pub const ALL: [MutationKind; 4] =
        [MutationKind::ContextChange, MutationKind::MultiFormation, MutationKind::SideMismatch, MutationKind::DropRule];

    pub fn as_str(self) -> &'static str {
        match self {
            MutationKind::ContextChange => "context_change",
            MutationKind::MultiFormation => "multi_formation",
            MutationKind::SideMismatch => "side_mismatch",
            MutationKind::DropRule => "drop_rule",
        }
    }

    fn suffix(self) -> &'static str {
        match self {
            MutationKind::ContextChange => "cc",
            MutationKind::MultiFormation => "mf",
            MutationKind::SideMismatch => "sm",
            MutationKind::DropRule => "dr",
        }
    }
}

impl fmt::Display for MutationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum MutationError {
    #[error("{kind} is inapplicable: {reason}")]
    Inapplicable { kind: MutationKind, reason: String },
    #[error("{0} is not a synthetic connective")]
    NotSynthetic(String),
}

const ARG_NAMES: [&str; MAX_ARITY] = ["A", "B", "C", "D", "E", "F"];

/// Samples polarity, branch sizes, arity and branch contents, then builds the
/// canonical rules. Every argument occurs in some branch.
pub fn random_connective(seed: u64, bounds: GenBounds) -> ConnectiveSpec {
    debug_assert!(bounds.validate().is_ok());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let polarity = if rng.gen_bool(0.5) { Polarity::Positive } else { Polarity::Negative };
    let m = rng.gen_range(1..=bounds.max_branches);
    let sizes: Vec<usize> = (0..m).map(|_| rng.gen_range(1..=bounds.max_group)).collect();
    let slots: usize = sizes.iter().sum();
    let n = rng.gen_range(1..=bounds.max_arity.min(slots));

    let mut fill: Vec<usize> = (1..=n).collect();
    fill.extend((n..slots).map(|_| rng.gen_range(1..=n)));
    fill.shuffle(&mut rng);
    let mut branches = Vec::new();
    let mut rest = fill.as_slice();
    for k in sizes {
        let (b, tail) = rest.split_at(k);
        let mut b = b.to_vec();
        b.sort_unstable();
        branches.push(b);
        rest = tail;
    }
    branches.sort();
    branches.dedup();

    let args: Vec<String> = ARG_NAMES[..n].iter().map(|s| s.to_string()).collect();
    let name = format!("Gen{seed}");
    let matrix = SchemeMatrix { polarity, args: args.clone(), branches };
    ConnectiveSpec::new(name.clone(), args, matrix_to_rules(&name, &matrix), Provenance::Generated(seed))
}

/// Applies one targeted mutation to a synthetic connective. The result is
/// renamed `{name}_{tag}`.
pub fn mutate(spec: &ConnectiveSpec, kind: MutationKind, seed: u64) -> Result<ConnectiveSpec, MutationError> {
    let class = classify(spec);
    let matrix = class.matrix.ok_or_else(|| MutationError::NotSynthetic(spec.name.clone()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let side = matrix.polarity.formation_side();
    let inapplicable = |reason: &str| MutationError::Inapplicable { kind, reason: reason.to_string() };
    let formation_idx = spec.rules.iter().position(|r| r.side == side).expect("synthetic spec has a formation rule");
    let opposite: Vec<usize> = (0..spec.rules.len()).filter(|&i| spec.rules[i].side != side).collect();
    let mut rules = spec.rules.clone();

    match kind {
        MutationKind::ContextChange => {
            let f = &mut rules[formation_idx];
            let fresh = Item::ctx(fresh_context(spec, "H"));
            if f.premises.len() >= 2 && rng.gen_bool(0.5) {
                // one premise keeps a context the conclusion lacks
                let j = rng.gen_range(0..f.premises.len());
                let p = &f.premises[j];
                let active = p.side(side).to_vec();
                f.premises[j] = orient(side, active, vec![fresh]);
            } else {
                let c = &f.conclusion;
                let mut other = c.side(side.opposite()).to_vec();
                other.push(fresh);
                f.conclusion = orient(side, c.side(side).to_vec(), other);
            }
        }
        MutationKind::MultiFormation => {
            let i = rng.gen_range(0..matrix.branches.len());
            let branch = &matrix.branches[i];
            let candidates = altered_branches(branch, matrix.args.len())
                .into_iter()
                .filter(|b| !matrix.branches.contains(b))
                .collect::<Vec<_>>();
            let altered = match candidates.choose(&mut rng) {
                Some(b) => b.clone(),
                // every one-step change is taken: keep repeating the first argument
                None => {
                    let mut b = branch.clone();
                    while matrix.branches.contains(&b) {
                        b.push(1);
                        b.sort_unstable();
                    }
                    b
                }
            };
            let f = &spec.rules[formation_idx];
            let mut dup = f.clone();
            let ctx = f.conclusion.side(side.opposite()).to_vec();
            dup.premises = matrix
                .branches
                .iter()
                .enumerate()
                .map(|(k, b)| {
                    let b = if k == i { &altered } else { b };
                    orient(side, b.iter().map(|&a| meta(spec, a)).collect(), ctx.clone())
                })
                .collect();
            dup.name = format!("{}-dup", f.name);
            rules.insert(formation_idx + 1, dup);
        }
        MutationKind::SideMismatch => {
            let n = matrix.args.len();
            if n < 2 {
                return Err(inapplicable("a unary connective has no other argument to swap in"));
            }
            let opp = side.opposite();
            let mut options = Vec::new();
            for &ri in &opposite {
                let r = &spec.rules[ri];
                let branch = branch_of(r, opp);
                for (j, p) in r.premises.iter().enumerate() {
                    let Some(Formula::Meta(old)) = p.formulas(opp).next() else { continue };
                    for a in 1..=n {
                        if a == old.index {
                            continue;
                        }
                        let mut b = branch.clone();
                        let pos = b.iter().position(|&x| x == old.index).expect("premise meta in branch");
                        b[pos] = a;
                        b.sort_unstable();
                        if !matrix.branches.contains(&b) {
                            options.push((ri, j, a));
                        }
                    }
                }
            }
            let &(ri, j, a) = options.choose(&mut rng).ok_or_else(|| inapplicable("every swap yields an existing branch"))?;
            let p = &rules[ri].premises[j];
            let ctx = p.side(side).to_vec();
            rules[ri].premises[j] = orient(opp, vec![meta(spec, a)], ctx);
        }
        MutationKind::DropRule => {
            if opposite.len() < 2 {
                return Err(inapplicable("dropping the only explicit rule would empty a side"));
            }
            let k = *opposite.choose(&mut rng).expect("nonempty");
            rules.remove(k);
        }
    }
    let name = format!("{}_{}", spec.name, kind.suffix());
    let renamed = ConnectiveSpec::new(spec.name.clone(), spec.args.clone(), rules, spec.provenance.clone());
    Ok(renamed.renamed(&name, ""))
}

fn meta(spec: &ConnectiveSpec, index: usize) -> Item {
    Item::Formula(spec.meta(index))
}

/// Sequent with `active` on `side` and `other` opposite.
fn orient(side: Side, active: Vec<Item>, other: Vec<Item>) -> Sequent {
    match side {
        Side::Left => Sequent::new(active, other),
        Side::Right => Sequent::new(other, active),
    }
}

fn fresh_context(spec: &ConnectiveSpec, base: &str) -> String {
    let mut name = base.to_string();
    while spec.args.contains(&name) || spec.rules.iter().any(|r| r.all_contexts().iter().any(|c| c.name() == name)) {
        name.push('\'');
    }
    name
}

fn branch_of(rule: &RuleScheme, side: Side) -> Vec<usize> {
    let mut b: Vec<usize> = rule
        .premises
        .iter()
        .flat_map(|p| p.formulas(side))
        .filter_map(|f| match f {
            Formula::Meta(m) => Some(m.index),
            _ => None,
        })
        .collect();
    b.sort_unstable();
    b
}

/// Single-step variants of a branch: one element replaced, one added, or one
/// removed.
fn altered_branches(b: &[usize], n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for pos in 0..b.len() {
        for a in 1..=n {
            if a != b[pos] {
                let mut v = b.to_vec();
                v[pos] = a;
                out.push(v);
            }
        }
        if b.len() > 1 {
            let mut v = b.to_vec();
            v.remove(pos);
            out.push(v);
        }
    }
    for a in 1..=n {
        let mut v = b.to_vec();
        v.push(a);
        out.push(v);
    }
    for v in &mut out {
        v.sort_unstable();
    }
    out.sort();
    out.dedup();
    out
}

/// Per-spec seeds drawn in order from a generator seeded with `base`.
pub fn spec_seeds(base: u64, count: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(base);
    (0..count).map(|_| rng.gen()).collect()
}
