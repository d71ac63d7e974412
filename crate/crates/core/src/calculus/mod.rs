//! Formulas, multiset sequents, rule schemes, substitutions and derivations.
//!
//! Sequent sides are finite multisets. There are no structural rules: exchange
//! is built into equality, weakening and contraction do not exist.

mod derivation;
mod formula;
mod matching;
mod rule;
mod sequent;

use thiserror::Error;

pub use derivation::{replay, Derivation, ReplayFailure, Replayer, Step};
pub use formula::{atom_names, Formula, MetaVar};
pub use matching::{apply_rule, close_unbound, match_conclusion, match_sequent, principal_side};
pub use rule::{
    canonical_key, same_rules, validate_visibility, ConnectiveSpec, Provenance, RuleScheme, Violation, ViolationKind,
};
pub use sequent::{cut, substitute, ContextVar, Item, Sequent, Side, Substitution};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CalculusError {
    #[error("rule {rule}: symbol {symbol} is not covered by the substitution")]
    IncompleteSubstitution { rule: String, symbol: String },
    #[error("cut formula {formula} absent: needs it on the right of `{left}` and the left of `{right}`")]
    CutFormulaAbsent { formula: String, left: String, right: String },
}

/// Ground instance `C(p_1, …, p_n)` with fresh atoms, and the atoms themselves.
pub fn ground_principal(spec: &ConnectiveSpec) -> (Formula, Vec<Formula>) {
    let atoms: Vec<Formula> = atom_names(spec.arity()).into_iter().map(Formula::Atom).collect();
    (spec.instance(&atoms), atoms)
}
