//! Deducibility of identicals: derive `C(p̄) ⊢ C(p̄)` from the connective's own
//! rules and the reflexivity axiom only.
//!
//! The verdict comes from the two-phase search: one rule of one side applied
//! backward to the identity goal, then on every resulting premise at most one
//! rule of the other side, after which every leaf must be an axiom. A premise
//! that is already an axiom may close without a second-phase rule. Cut is never
//! used. A depth-bounded general search is available for diagnostics.

use std::fmt;

use thiserror::Error;

use crate::calculus::{
    apply_rule, close_unbound, ground_principal, match_conclusion, ConnectiveSpec, Derivation, Item, RuleScheme,
    Sequent, Side, Substitution,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum DoiMode {
    TwoPhase,
    Bounded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    TwoPhase,
    Bounded(usize),
}

impl fmt::Display for SearchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchMode::TwoPhase => f.write_str("two-phase"),
            SearchMode::Bounded(d) => write!(f, "bounded({d})"),
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum DoiError {
    #[error("bounded search needs a depth (--max-depth)")]
    DepthRequired,
    #[error("connective {0} has arity 0")]
    ZeroArity(String),
}

/// One failed first-phase application.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Attempt {
    /// `left-first` or `right-first`.
    pub order: String,
    /// `None` when no first-phase rule matched the goal at all.
    pub first_rule: Option<String>,
    pub substitution: Substitution,
    /// First premise that could not be closed.
    pub open_premise: Option<Sequent>,
    /// Second-phase rules tried on it, with the non-axiom leaves each left.
    pub tried: Vec<(String, Vec<Sequent>)>,
}

impl fmt::Display for Attempt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(rule) = &self.first_rule else {
            return write!(f, "{}: no rule applies to the goal", self.order);
        };
        write!(f, "{}: {rule} {}", self.order, self.substitution)?;
        if let Some(p) = &self.open_premise {
            write!(f, " leaves {p} open")?;
            if self.tried.is_empty() {
                f.write_str(" (no rule applies)")?;
            }
            for (r, leaves) in &self.tried {
                let l: Vec<String> = leaves.iter().map(|s| s.to_string()).collect();
                write!(f, "; {r} gives leaves [{}]", l.join(", "))?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoiResult {
    pub holds: bool,
    pub mode: SearchMode,
    pub certificate: Option<Derivation>,
    pub failure: Vec<Attempt>,
}

/// `C(p_1, …, p_n) ⊢ C(p_1, …, p_n)` with distinct fresh atoms.
pub fn goal_sequent(spec: &ConnectiveSpec) -> Sequent {
    let (c, _) = ground_principal(spec);
    Sequent::new(vec![Item::Formula(c.clone())], vec![Item::Formula(c)])
}

pub fn check_doi(spec: &ConnectiveSpec, mode: DoiMode, depth: Option<usize>) -> Result<DoiResult, DoiError> {
    if spec.arity() == 0 {
        return Err(DoiError::ZeroArity(spec.name.clone()));
    }
    let goal = goal_sequent(spec);
    match mode {
        DoiMode::TwoPhase => {
            let left: Vec<&RuleScheme> = spec.left_rules().collect();
            let right: Vec<&RuleScheme> = spec.right_rules().collect();
            let mut failure = Vec::new();
            for (order, first, second) in [("left-first", &left, &right), ("right-first", &right, &left)] {
                match two_phase(&goal, first, second, order) {
                    Ok(d) => {
                        return Ok(DoiResult {
                            holds: true,
                            mode: SearchMode::TwoPhase,
                            certificate: Some(d),
                            failure: Vec::new(),
                        })
                    }
                    Err(mut a) => failure.append(&mut a),
                }
            }
            Ok(DoiResult { holds: false, mode: SearchMode::TwoPhase, certificate: None, failure })
        }
        DoiMode::Bounded => {
            let depth = depth.ok_or(DoiError::DepthRequired)?;
            let rules: Vec<&RuleScheme> = spec.rules.iter().collect();
            let found = prove(&goal, depth, true, &rules);
            let failure = if found.is_none() {
                vec![Attempt {
                    order: format!("bounded({depth})"),
                    first_rule: None,
                    substitution: Substitution::new(),
                    open_premise: Some(goal.clone()),
                    tried: Vec::new(),
                }]
            } else {
                Vec::new()
            };
            Ok(DoiResult { holds: found.is_some(), mode: SearchMode::Bounded(depth), certificate: found, failure })
        }
    }
}

/// Backward instances of `rule` on `goal`, premise-only contexts emptied.
fn instances(rule: &RuleScheme, goal: &Sequent) -> Vec<(Substitution, Vec<Sequent>)> {
    match_conclusion(rule, goal)
        .into_iter()
        .filter_map(|s| {
            let s = close_unbound(rule, s);
            apply_rule(rule, &s).ok().map(|p| (s, p))
        })
        .collect()
}

/// Layered search: one rule from `first` on the goal, then at most one rule
/// from `second` per premise, all leaves axioms. First success in rule and
/// substitution order wins.
pub fn two_phase(
    goal: &Sequent,
    first: &[&RuleScheme],
    second: &[&RuleScheme],
    order: &str,
) -> Result<Derivation, Vec<Attempt>> {
    let mut attempts = Vec::new();
    for rule in first {
        for (sub, premises) in instances(rule, goal) {
            let mut children = Vec::new();
            let mut open = None;
            for p in &premises {
                match close_premise(p, second) {
                    Ok(d) => children.push(d),
                    Err(tried) => {
                        open = Some((p.clone(), tried));
                        break;
                    }
                }
            }
            match open {
                None => return Ok(Derivation::rule(goal.clone(), &rule.name, sub, children)),
                Some((p, tried)) => attempts.push(Attempt {
                    order: order.to_string(),
                    first_rule: Some(rule.name.clone()),
                    substitution: sub,
                    open_premise: Some(p),
                    tried,
                }),
            }
        }
    }
    if attempts.is_empty() {
        attempts.push(Attempt {
            order: order.to_string(),
            first_rule: None,
            substitution: Substitution::new(),
            open_premise: None,
            tried: Vec::new(),
        });
    }
    Err(attempts)
}

type Tried = Vec<(String, Vec<Sequent>)>;

fn close_premise(p: &Sequent, second: &[&RuleScheme]) -> Result<Derivation, Tried> {
    if p.is_axiom() {
        return Ok(Derivation::axiom(p.clone()));
    }
    let mut tried = Vec::new();
    for rule in second {
        for (sub, premises) in instances(rule, p) {
            let open: Vec<Sequent> = premises.iter().filter(|q| !q.is_axiom()).cloned().collect();
            if open.is_empty() {
                let leaves = premises.into_iter().map(Derivation::axiom).collect();
                return Ok(Derivation::rule(p.clone(), &rule.name, sub, leaves));
            }
            tried.push((rule.name.clone(), open));
        }
    }
    Err(tried)
}

/// Depth-bounded backward search. The root may not close by the axiom, so
/// any derivation found applies at least one rule of the connective.
fn prove(goal: &Sequent, depth: usize, root: bool, rules: &[&RuleScheme]) -> Option<Derivation> {
    if !root && goal.is_axiom() {
        return Some(Derivation::axiom(goal.clone()));
    }
    if depth == 0 {
        return None;
    }
    for rule in rules {
        'inst: for (sub, premises) in instances(rule, goal) {
            let mut children = Vec::new();
            for p in &premises {
                match prove(p, depth - 1, false, rules) {
                    Some(d) => children.push(d),
                    None => continue 'inst,
                }
            }
            return Some(Derivation::rule(goal.clone(), &rule.name, sub, children));
        }
    }
    None
}

/// Which phase-one side produced a certificate.
pub fn certificate_order(spec: &ConnectiveSpec, d: &Derivation) -> Option<Side> {
    let name = d.rules_used().first().map(|s| s.to_string())?;
    spec.rule(&name).map(|r| r.side)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::replay;
    use crate::dsl::builtin_corpus;

    fn corpus(name: &str) -> ConnectiveSpec {
        builtin_corpus().into_iter().find(|e| e.spec.name == name).unwrap().spec
    }

    #[test]
    fn goals_use_fresh_atoms() {
        assert_eq!(goal_sequent(&corpus("Tensor")).to_string(), "Tensor(p, q) |- Tensor(p, q)");
        assert_eq!(goal_sequent(&corpus("Fig3")).to_string(), "Fig3(p, q, r) |- Fig3(p, q, r)");
        assert_eq!(goal_sequent(&corpus("With")).to_string(), "With(p, q) |- With(p, q)");
    }

    #[test]
    fn tensor_certificate_shape() {
        let spec = corpus("Tensor");
        let r = check_doi(&spec, DoiMode::TwoPhase, None).unwrap();
        assert!(r.holds);
        let d = r.certificate.unwrap();
        assert_eq!(d.rules_used(), vec!["tensor-L", "tensor-R"]);
        let mid = d.children()[0];
        assert_eq!(mid.conclusion.to_string(), "p, q |- Tensor(p, q)");
        let leaves: Vec<String> = mid.children().iter().map(|c| c.conclusion.to_string()).collect();
        assert_eq!(leaves, vec!["p |- p", "q |- q"]);
        replay(&d, &spec).unwrap();
    }

    #[test]
    fn tonk_fails_both_orders_with_q_entails_p() {
        let r = check_doi(&corpus("Tonk"), DoiMode::TwoPhase, None).unwrap();
        assert!(!r.holds);
        let orders: Vec<&str> = r.failure.iter().map(|a| a.order.as_str()).collect();
        assert_eq!(orders, vec!["left-first", "right-first"]);
        for a in &r.failure {
            let leaves: Vec<String> = a.tried.iter().flat_map(|(_, l)| l.iter().map(|s| s.to_string())).collect();
            assert_eq!(leaves, vec!["q |- p"], "{a}");
        }
    }

    #[test]
    fn with_closes_formation_premises_by_reflection_rules() {
        let spec = corpus("With");
        let d = check_doi(&spec, DoiMode::TwoPhase, None).unwrap().certificate.unwrap();
        assert_eq!(d.rules_used(), vec!["with-R", "with-L1", "with-L2"]);
        replay(&d, &spec).unwrap();
    }

    #[test]
    fn bounded_requires_depth_and_agrees() {
        let spec = corpus("Tensor");
        assert_eq!(check_doi(&spec, DoiMode::Bounded, None), Err(DoiError::DepthRequired));
        let r = check_doi(&spec, DoiMode::Bounded, Some(4)).unwrap();
        assert!(r.holds);
        replay(r.certificate.as_ref().unwrap(), &spec).unwrap();
        assert!(!check_doi(&corpus("Tonk"), DoiMode::Bounded, Some(4)).unwrap().holds);
    }

    #[test]
    fn search_is_deterministic() {
        let spec = corpus("Fig3");
        let a = check_doi(&spec, DoiMode::TwoPhase, None).unwrap();
        let b = check_doi(&spec, DoiMode::TwoPhase, None).unwrap();
        assert_eq!(a, b);
    }
}
