use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::formula::{Formula, MetaVar};
use super::sequent::{ContextVar, Item, Sequent, Side};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleScheme {
    pub name: String,
    /// Side of the conclusion carrying the principal formula.
    pub side: Side,
    pub premises: Vec<Sequent>,
    pub conclusion: Sequent,
}

impl RuleScheme {
    pub fn new(name: impl Into<String>, side: Side, premises: Vec<Sequent>, conclusion: Sequent) -> Self {
        Self { name: name.into(), side, premises, conclusion }
    }

    /// Context variables occurring in the premises (`Cxt_Prem`).
    pub fn premise_contexts(&self) -> BTreeSet<ContextVar> {
        self.premises.iter().flat_map(|p| p.all_contexts()).collect()
    }

    /// Context variables occurring in the conclusion (`Cxt_Concl`).
    pub fn conclusion_contexts(&self) -> BTreeSet<ContextVar> {
        self.conclusion.all_contexts()
    }

    pub fn metas(&self) -> BTreeSet<MetaVar> {
        let mut out = Vec::new();
        for seq in self.premises.iter().chain(std::iter::once(&self.conclusion)) {
            for side in [Side::Left, Side::Right] {
                seq.formulas(side).for_each(|f| f.collect_metas(&mut out));
            }
        }
        out.into_iter().collect()
    }

    pub fn all_contexts(&self) -> BTreeSet<ContextVar> {
        let mut out = self.premise_contexts();
        out.extend(self.conclusion_contexts());
        out
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

impl fmt::Display for RuleScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} \"{}\": [", self.side, self.name)?;
        for (i, p) in self.premises.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "] => {}", self.conclusion)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Builtin,
    Parsed,
    Generated(u64),
}

/// An n-ary connective together with its left and right rules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectiveSpec {
    pub name: String,
    /// Display names of `A_1..A_n`; the arity is `args.len()`.
    pub args: Vec<String>,
    /// All rules in declaration order.
    pub rules: Vec<RuleScheme>,
    pub provenance: Provenance,
}

impl ConnectiveSpec {
    pub fn new(name: impl Into<String>, args: Vec<String>, rules: Vec<RuleScheme>, provenance: Provenance) -> Self {
        Self { name: name.into(), args, rules, provenance }
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn meta(&self, index: usize) -> Formula {
        Formula::meta(index, self.args[index - 1].clone())
    }

    /// `C(A_1, …, A_n)`.
    pub fn principal(&self) -> Formula {
        Formula::compound(self.name.clone(), (1..=self.arity()).map(|i| self.meta(i)).collect())
    }

    /// `C(t_1, …, t_n)` for concrete arguments.
    pub fn instance(&self, args: &[Formula]) -> Formula {
        Formula::compound(self.name.clone(), args.to_vec())
    }

    pub fn rules_on(&self, side: Side) -> impl Iterator<Item = &RuleScheme> {
        self.rules.iter().filter(move |r| r.side == side)
    }

    pub fn left_rules(&self) -> impl Iterator<Item = &RuleScheme> {
        self.rules_on(Side::Left)
    }

    pub fn right_rules(&self) -> impl Iterator<Item = &RuleScheme> {
        self.rules_on(Side::Right)
    }

    pub fn rule(&self, name: &str) -> Option<&RuleScheme> {
        self.rules.iter().find(|r| r.name == name)
    }

    /// Lacks rules on one side, so it is not a connective in the strict sense.
    pub fn is_degenerate(&self) -> bool {
        self.left_rules().next().is_none() || self.right_rules().next().is_none()
    }

    /// Argument positions that occur in no premise.
    pub fn unused_args(&self) -> Vec<usize> {
        let mut used = BTreeSet::new();
        for r in &self.rules {
            for p in &r.premises {
                for side in [Side::Left, Side::Right] {
                    for f in p.formulas(side) {
                        let mut v = Vec::new();
                        f.collect_metas(&mut v);
                        used.extend(v.into_iter().map(|m| m.index));
                    }
                }
            }
        }
        (1..=self.arity()).filter(|i| !used.contains(i)).collect()
    }

    /// Copy of the connective under a new name; rule names get `suffix`.
    pub fn renamed(&self, name: &str, suffix: &str) -> ConnectiveSpec {
        let old = self.name.clone();
        let rename = |f: &Formula| rename_connective(f, &old, name);
        let rules = self
            .rules
            .iter()
            .map(|r| RuleScheme {
                name: format!("{}{suffix}", r.name),
                side: r.side,
                premises: r.premises.iter().map(|p| p.map_formulas(rename)).collect(),
                conclusion: r.conclusion.map_formulas(rename),
            })
            .collect();
        ConnectiveSpec::new(name, self.args.clone(), rules, self.provenance.clone())
    }
}

fn rename_connective(f: &Formula, from: &str, to: &str) -> Formula {
    match f {
        Formula::Compound { connective, args } => Formula::Compound {
            connective: if connective == from { to.to_string() } else { connective.clone() },
            args: args.iter().map(|a| rename_connective(a, from, to)).collect(),
        },
        other => other.clone(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    /// Something other than the principal formula on its side of the conclusion.
    PrincipalSideContext,
    /// A premise side carrying active formulas also carries a context.
    ActiveSideContext,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub rule: String,
    pub kind: ViolationKind,
    pub detail: String,
}

/// Visibility: active and principal formulas stand alone on their side.
pub fn validate_visibility(rule: &RuleScheme) -> Vec<Violation> {
    let mut out = Vec::new();
    let principal_side = rule.conclusion.side(rule.side);
    let principal_count = principal_side
        .iter()
        .filter(|i| matches!(i, Item::Formula(Formula::Compound { .. })))
        .count();
    if principal_count != 1 || principal_side.len() != 1 {
        out.push(Violation {
            rule: rule.name.clone(),
            kind: ViolationKind::PrincipalSideContext,
            detail: format!("conclusion {} side is not the principal formula alone", rule.side),
        });
    }
    for (i, p) in rule.premises.iter().enumerate() {
        for side in [Side::Left, Side::Right] {
            let has_meta = p.formulas(side).next().is_some();
            let has_ctx = p.contexts(side).next().is_some();
            if has_meta && has_ctx {
                out.push(Violation {
                    rule: rule.name.clone(),
                    kind: ViolationKind::ActiveSideContext,
                    detail: format!("premise {} mixes formulas and contexts on the {side}", i + 1),
                });
            }
        }
    }
    out
}

fn canon_formula(f: &Formula) -> String {
    match f {
        Formula::Atom(a) => format!("'{a}"),
        Formula::Meta(m) => format!("A{}", m.index),
        Formula::Compound { connective, args } => {
            let inner: Vec<String> = args.iter().map(canon_formula).collect();
            format!("{connective}({})", inner.join(","))
        }
    }
}

fn canon_sequent(seq: &Sequent, names: &BTreeMap<ContextVar, usize>) -> String {
    let side = |items: &[Item]| {
        let mut v: Vec<String> = items
            .iter()
            .map(|i| match i {
                Item::Formula(f) => canon_formula(f),
                Item::Context(c) => format!("#{}", names[c]),
            })
            .collect();
        v.sort();
        v.join(",")
    };
    format!("{}|-{}", side(seq.antecedent()), side(seq.succedent()))
}

/// Key identifying a rule up to renaming of context variables, reordering of
/// premises and repeated premises. Meta-variables are compared by position.
pub fn canonical_key(rule: &RuleScheme) -> String {
    let mut premises: Vec<&Sequent> = Vec::new();
    for p in &rule.premises {
        if !premises.contains(&p) {
            premises.push(p);
        }
    }
    let mut best: Option<String> = None;
    if premises.len() <= 7 {
        permute(&mut premises, 0, &mut |order| {
            let mut seqs: Vec<&Sequent> = order.to_vec();
            seqs.push(&rule.conclusion);
            name_contexts(&seqs, 0, Side::Left, &mut BTreeMap::new(), &mut |names| {
                let key = render_key(rule.side, order, &rule.conclusion, names);
                if best.as_ref().is_none_or(|b| key < *b) {
                    best = Some(key);
                }
            });
        });
    } else {
        let mut names = BTreeMap::new();
        for c in rule.all_contexts() {
            let n = names.len();
            names.insert(c, n);
        }
        best = Some(render_key(rule.side, &premises, &rule.conclusion, &names));
    }
    best.expect("at least one ordering")
}

fn render_key(side: Side, premises: &[&Sequent], conclusion: &Sequent, names: &BTreeMap<ContextVar, usize>) -> String {
    let mut prem: Vec<String> = premises.iter().map(|p| canon_sequent(p, names)).collect();
    // premise order does not matter once contexts are named
    prem.sort();
    format!("{side}:[{}]=>{}", prem.join(";"), canon_sequent(conclusion, names))
}

fn permute<'a>(v: &mut Vec<&'a Sequent>, k: usize, f: &mut dyn FnMut(&[&'a Sequent])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, f);
        v.swap(k, i);
    }
}

/// Assigns context numbers by first occurrence, trying every order among
/// contexts that first appear together on one side.
fn name_contexts(
    seqs: &[&Sequent],
    idx: usize,
    side: Side,
    names: &mut BTreeMap<ContextVar, usize>,
    f: &mut dyn FnMut(&BTreeMap<ContextVar, usize>),
) {
    if idx == seqs.len() {
        f(names);
        return;
    }
    let (next_idx, next_side) = match side {
        Side::Left => (idx, Side::Right),
        Side::Right => (idx + 1, Side::Left),
    };
    let mut fresh: Vec<ContextVar> = Vec::new();
    for c in seqs[idx].contexts(side) {
        if !names.contains_key(c) && !fresh.contains(c) {
            fresh.push(c.clone());
        }
    }
    if fresh.is_empty() {
        name_contexts(seqs, next_idx, next_side, names, f);
        return;
    }
    let mut refs: Vec<&ContextVar> = fresh.iter().collect();
    let mut orders: Vec<Vec<ContextVar>> = Vec::new();
    permute_ctx(&mut refs, 0, &mut |o| orders.push(o.iter().map(|c| (*c).clone()).collect()));
    for order in orders {
        for c in &order {
            let n = names.len();
            names.insert(c.clone(), n);
        }
        name_contexts(seqs, next_idx, next_side, names, f);
        for c in &order {
            names.remove(c);
        }
    }
}

fn permute_ctx<'a>(v: &mut Vec<&'a ContextVar>, k: usize, f: &mut dyn FnMut(&[&'a ContextVar])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute_ctx(v, k + 1, f);
        v.swap(k, i);
    }
}

/// Rule sets compared as sets of canonical keys.
pub fn same_rules<'a>(a: impl IntoIterator<Item = &'a RuleScheme>, b: impl IntoIterator<Item = &'a RuleScheme>) -> bool {
    let ka: BTreeSet<String> = a.into_iter().map(canonical_key).collect();
    let kb: BTreeSet<String> = b.into_iter().map(canonical_key).collect();
    ka == kb
}
