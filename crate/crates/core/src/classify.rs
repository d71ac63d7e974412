//! Synthetic connectives: a single formation rule whose premises list
//! branches of arguments, with one split-context explicit rule per branch on
//! the other side.
//!
//! Scheme II (positive) has its formation rule on the left, like tensor and
//! plus; scheme I (negative) has it on the right, like with and par.

use std::fmt;

use serde::Serialize;

use crate::calculus::{same_rules, ConnectiveSpec, ContextVar, Formula, Item, RuleScheme, Sequent, Side};
use crate::reflection::{detect_context_change, fresh_names};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Scheme {
    I,
    II,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::I => "I",
            Scheme::II => "II",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn scheme(self) -> Scheme {
        match self {
            Polarity::Positive => Scheme::II,
            Polarity::Negative => Scheme::I,
        }
    }

    pub fn formation_side(self) -> Side {
        match self {
            Polarity::Positive => Side::Left,
            Polarity::Negative => Side::Right,
        }
    }
}

/// Branches are sorted multisets of 1-based argument positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SchemeMatrix {
    pub polarity: Polarity,
    pub args: Vec<String>,
    pub branches: Vec<Vec<usize>>,
}

impl SchemeMatrix {
    pub fn branch_names(&self) -> Vec<Vec<String>> {
        self.branches.iter().map(|b| b.iter().map(|&i| self.args[i - 1].clone()).collect()).collect()
    }

    /// Tensor, par, with and plus shapes: one branch holding every argument
    /// once, or one singleton branch per argument.
    pub fn is_single_mall_connective(&self) -> bool {
        let n = self.args.len();
        let all: Vec<usize> = (1..=n).collect();
        let singletons: Vec<Vec<usize>> = (1..=n).map(|i| vec![i]).collect();
        self.branches == [all] || self.branches == singletons
    }
}

impl fmt::Display for SchemeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.branch_names().iter().map(|b| format!("{{{}}}", b.join(", "))).collect();
        write!(f, "{} [{}]", self.polarity.scheme(), parts.join(" | "))
    }
}

/// Ordered by how far normalization got before failing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureReason {
    MultiFormation,
    ContextChange,
    PremiseShape,
    SideMismatch,
}

impl FailureReason {
    pub fn as_str(self) -> &'static str {
        match self {
            FailureReason::MultiFormation => "multi_formation",
            FailureReason::ContextChange => "context_change",
            FailureReason::PremiseShape => "premise_shape",
            FailureReason::SideMismatch => "side_mismatch",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub synthetic: bool,
    pub scheme: Option<Scheme>,
    pub matrix: Option<SchemeMatrix>,
    pub failure: Option<FailureReason>,
    pub detail: Option<String>,
    /// Unused argument positions and collapsed duplicate branches.
    pub warnings: Vec<String>,
}

type Failure = (FailureReason, String);

fn sole_context(items: &[Item]) -> Option<&ContextVar> {
    match items {
        [Item::Context(c)] => Some(c),
        _ => None,
    }
}

fn meta_indices(items: &[Item]) -> Option<Vec<usize>> {
    let mut out = Vec::new();
    for i in items {
        match i {
            Item::Formula(Formula::Meta(m)) => out.push(m.index),
            _ => return None,
        }
    }
    out.sort_unstable();
    Some(out)
}

fn is_principal_alone(items: &[Item], spec: &ConnectiveSpec) -> bool {
    matches!(items, [Item::Formula(f)] if *f == spec.principal())
}

/// Reads the scheme matrix of the given polarity off the connective's rules.
pub fn normalize_to_scheme(spec: &ConnectiveSpec, polarity: Polarity) -> Result<SchemeMatrix, Failure> {
    let side = polarity.formation_side();
    let opp = side.opposite();
    let formation: Vec<&RuleScheme> = spec.rules_on(side).collect();
    let f = match formation.as_slice() {
        [] => return Err((FailureReason::SideMismatch, format!("no {side} rules"))),
        [f] => *f,
        many => return Err((FailureReason::MultiFormation, format!("{} {side} rules", many.len()))),
    };
    if detect_context_change(f) {
        return Err((FailureReason::ContextChange, format!("{}: premise and conclusion contexts differ", f.name)));
    }
    let shape = |msg: &str| (FailureReason::PremiseShape, format!("{}: {msg}", f.name));
    if !is_principal_alone(f.conclusion.side(side), spec) {
        return Err(shape("principal formula is not alone"));
    }
    let Some(ctx) = sole_context(f.conclusion.side(opp)) else {
        return Err(shape("conclusion needs exactly one context beside the principal formula"));
    };
    let mut branches = Vec::new();
    for p in &f.premises {
        if sole_context(p.side(opp)) != Some(ctx) {
            return Err(shape("premise does not keep the conclusion context"));
        }
        match meta_indices(p.side(side)) {
            Some(b) if !b.is_empty() => branches.push(b),
            _ => return Err(shape("premise is not a branch of arguments")),
        }
    }
    branches.sort();
    branches.dedup();
    let matrix = SchemeMatrix { polarity, args: spec.args.clone(), branches };

    for rule in spec.rules_on(opp) {
        let branch = split_branch(rule, spec, side)
            .ok_or_else(|| (FailureReason::PremiseShape, format!("{}: not in split-context form", rule.name)))?;
        if !matrix.branches.contains(&branch) {
            return Err((FailureReason::SideMismatch, format!("{}: no formation branch matches", rule.name)));
        }
    }
    let expected = matrix_to_rules(&spec.name, &matrix);
    if !same_rules(&expected, spec.rules.iter()) {
        return Err((FailureReason::SideMismatch, format!("{opp} rules do not cover every branch")));
    }
    Ok(matrix)
}

/// Branch of a rule `a1 ⊢ X1; …; ak ⊢ Xk ⇒ X1, …, Xk ⊢ C` (mirrored for the
/// right side), with distinct contexts `Xi`.
fn split_branch(rule: &RuleScheme, spec: &ConnectiveSpec, formation_side: Side) -> Option<Vec<usize>> {
    let rule_side = formation_side.opposite();
    if !is_principal_alone(rule.conclusion.side(rule_side), spec) {
        return None;
    }
    let mut branch = Vec::new();
    let mut contexts = Vec::new();
    for p in &rule.premises {
        let m = meta_indices(p.side(rule_side))?;
        if m.len() != 1 {
            return None;
        }
        let c = sole_context(p.side(formation_side))?;
        if contexts.contains(c) {
            return None;
        }
        branch.extend(m);
        contexts.push(c.clone());
    }
    let mut concl: Vec<Item> = rule.conclusion.side(formation_side).to_vec();
    let mut want: Vec<Item> = contexts.into_iter().map(Item::Context).collect();
    concl.sort();
    want.sort();
    if branch.is_empty() || concl != want {
        return None;
    }
    branch.sort_unstable();
    Some(branch)
}

/// Canonical rules of a matrix: the formation rule, then one split-context
/// rule per branch.
pub fn matrix_to_rules(name: &str, matrix: &SchemeMatrix) -> Vec<RuleScheme> {
    let side = matrix.polarity.formation_side();
    let opp = side.opposite();
    let meta = |i: usize| Item::Formula(Formula::meta(i, matrix.args[i - 1].clone()));
    let principal = Item::Formula(Formula::compound(
        name,
        (1..=matrix.args.len()).map(|i| Formula::meta(i, matrix.args[i - 1].clone())).collect(),
    ));
    let taken = || matrix.args.iter().cloned().chain([name.to_string()]).collect();
    let (ctx_base, split_base) = match side {
        Side::Left => ("D", "G"),
        Side::Right => ("G", "D"),
    };
    let ctx = Item::ctx(fresh_names(ctx_base, 1, &mut taken()).remove(0));
    let lower = name.to_lowercase();
    let oriented = |formation_items: Vec<Item>, other: Vec<Item>| match side {
        Side::Left => Sequent::new(formation_items, other),
        Side::Right => Sequent::new(other, formation_items),
    };

    let premises = matrix.branches.iter().map(|b| oriented(b.iter().map(|&i| meta(i)).collect(), vec![ctx.clone()])).collect();
    let mut rules = vec![RuleScheme::new(
        format!("{lower}-{}", side_letter(side)),
        side,
        premises,
        oriented(vec![principal.clone()], vec![ctx]),
    )];
    for (k, b) in matrix.branches.iter().enumerate() {
        let names = fresh_names(split_base, b.len(), &mut taken());
        let premises = b
            .iter()
            .zip(&names)
            .map(|(&i, c)| oriented(vec![Item::ctx(c.clone())], vec![meta(i)]))
            .collect();
        let conclusion = oriented(names.iter().map(|c| Item::ctx(c.clone())).collect(), vec![principal.clone()]);
        rules.push(RuleScheme::new(format!("{lower}-{}{}", side_letter(opp), k + 1), opp, premises, conclusion));
    }
    rules
}

fn side_letter(side: Side) -> &'static str {
    match side {
        Side::Left => "L",
        Side::Right => "R",
    }
}

pub fn classify(spec: &ConnectiveSpec) -> Classification {
    let mut worst: Option<Failure> = None;
    for polarity in [Polarity::Positive, Polarity::Negative] {
        match normalize_to_scheme(spec, polarity) {
            Ok(matrix) => {
                let warnings = matrix_warnings(spec, &matrix);
                return Classification {
                    synthetic: true,
                    scheme: Some(polarity.scheme()),
                    matrix: Some(matrix),
                    failure: None,
                    detail: None,
                    warnings,
                };
            }
            Err(e) => {
                if worst.as_ref().is_none_or(|w| e.0 > w.0) {
                    worst = Some(e);
                }
            }
        }
    }
    let (reason, detail) = worst.expect("two attempts made");
    Classification {
        synthetic: false,
        scheme: None,
        matrix: None,
        failure: Some(reason),
        detail: Some(detail),
        warnings: Vec::new(),
    }
}

fn matrix_warnings(spec: &ConnectiveSpec, matrix: &SchemeMatrix) -> Vec<String> {
    let mut out = Vec::new();
    for (i, arg) in matrix.args.iter().enumerate() {
        if !matrix.branches.iter().any(|b| b.contains(&(i + 1))) {
            out.push(format!("degenerate: argument {arg} occurs in no branch"));
        }
    }
    let premises: usize = spec.rules_on(matrix.polarity.formation_side()).map(|r| r.premises.len()).sum();
    if premises > matrix.branches.len() {
        out.push(format!("{} duplicate branch(es) collapsed", premises - matrix.branches.len()));
    }
    out
}
