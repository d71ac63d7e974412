//! Definitional equations and the principle of reflection.
//!
//! A definitional equation is read off the rules of one side (its formation
//! rules): the shared conclusion holds iff all their premises hold. Solving it
//! means trivializing the quantified context to the connective itself, which
//! turns each premise into an identity-grounded sequent `S0` (the implicit
//! reflection rule applied to an axiom), and then cutting every argument
//! occurrence of `S0` against a fresh hypothesis. What remains is an explicit
//! reflection rule: fresh-context premises, the connective on the side
//! opposite to the formation rule. The equation is solvable when the principal
//! cut between the formation rule and the explicit rules reduces.
//!
//! Two structural pre-checks short-circuit the verdict: a formation rule whose
//! premise and conclusion contexts differ, and more than one formation rule.
//! The construction is still run in both cases so that its own verdict can be
//! compared against the pre-check.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::calculus::{
    ground_principal, principal_side, same_rules, substitute, ConnectiveSpec, ContextVar, Derivation, Formula, Item,
    ReplayFailure, Replayer, RuleScheme, Sequent, Side, Substitution,
};
use crate::cut::{check_main_cut_step, CutResult};
use crate::doi::two_phase;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ReflectionError {
    #[error("equation is not admissible for trivialization: {0}")]
    NotAdmissible(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefinitionalEquation {
    pub connective: String,
    pub formation_side: Side,
    pub formation_rules: Vec<RuleScheme>,
    /// Conclusion of the first formation rule.
    pub lhs: Option<Sequent>,
    /// Premises of all formation rules, joined by "and".
    pub rhs: Vec<Sequent>,
    /// The universally quantified context, when the conclusion has exactly one
    /// on its non-principal side.
    pub context_variable: Option<ContextVar>,
}

impl fmt::Display for DefinitionalEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(lhs) = &self.lhs else {
            return f.write_str("(no formation rules)");
        };
        if let Some(c) = &self.context_variable {
            write!(f, "forall {c}. ")?;
        }
        write!(f, "{lhs} iff ")?;
        if self.rhs.is_empty() {
            return f.write_str("true");
        }
        let parts: Vec<String> = self.rhs.iter().map(|s| s.to_string()).collect();
        f.write_str(&parts.join(" and "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reason {
    Ok,
    MissingRules,
    MultiContextConclusion,
    PremiseSideMismatch,
    ExtraneousContext,
}

impl Reason {
    pub fn as_str(self) -> &'static str {
        match self {
            Reason::Ok => "ok",
            Reason::MissingRules => "missing_rules",
            Reason::MultiContextConclusion => "multi_context_conclusion",
            Reason::PremiseSideMismatch => "premise_side_mismatch",
            Reason::ExtraneousContext => "extraneous_context",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lemma {
    /// Premise contexts differ from conclusion contexts.
    ContextChanging,
    /// More than one formation rule.
    SeveralFormationRules,
}

impl Lemma {
    pub fn as_str(self) -> &'static str {
        match self {
            Lemma::ContextChanging => "context_changing",
            Lemma::SeveralFormationRules => "multi_formation",
        }
    }
}

pub fn build_equation(spec: &ConnectiveSpec, side: Side) -> DefinitionalEquation {
    let formation_rules: Vec<RuleScheme> = spec.rules_on(side).cloned().collect();
    let lhs = formation_rules.first().map(|r| r.conclusion.clone());
    let rhs = formation_rules.iter().flat_map(|r| r.premises.iter().cloned()).collect();
    let context_variable = formation_rules.first().and_then(|r| {
        let other = r.conclusion.side(side.opposite());
        match other {
            [Item::Context(c)] => Some(c.clone()),
            _ => None,
        }
    });
    DefinitionalEquation { connective: spec.name.clone(), formation_side: side, formation_rules, lhs, rhs, context_variable }
}

/// `Cxt_Prem(F) ≠ Cxt_Concl(F)`, comparing sets of context variables.
pub fn detect_context_change(rule: &RuleScheme) -> bool {
    rule.premise_contexts() != rule.conclusion_contexts()
}

pub fn check_admissible(eq: &DefinitionalEquation) -> (bool, Reason) {
    if eq.formation_rules.is_empty() {
        return (false, Reason::MissingRules);
    }
    for rule in &eq.formation_rules {
        let reason = rule_admissibility(rule, eq.formation_side);
        if reason != Reason::Ok {
            return (false, reason);
        }
    }
    (true, Reason::Ok)
}

fn rule_admissibility(rule: &RuleScheme, side: Side) -> Reason {
    let opp = side.opposite();
    if rule.conclusion.side(side).len() != 1 {
        return Reason::ExtraneousContext;
    }
    let other = rule.conclusion.side(opp);
    let ctx_count = other.iter().filter(|i| i.as_context().is_some()).count();
    if ctx_count > 1 {
        return Reason::MultiContextConclusion;
    }
    let context = match other {
        [Item::Context(c)] => c,
        _ => return Reason::ExtraneousContext,
    };
    for p in &rule.premises {
        let active = p.side(side);
        if active.is_empty() || p.formulas(opp).next().is_some() {
            return Reason::PremiseSideMismatch;
        }
        if active.iter().any(|i| !matches!(i, Item::Formula(Formula::Meta(_)))) {
            return if active.iter().any(|i| i.as_context().is_some()) {
                Reason::ExtraneousContext
            } else {
                Reason::PremiseSideMismatch
            };
        }
        if !matches!(p.side(opp), [Item::Context(c)] if c == context) {
            return Reason::ExtraneousContext;
        }
    }
    Reason::Ok
}

/// An explicit reflection rule with the cut construction that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedRule {
    pub rule: RuleScheme,
    /// Formation rule and premise index (1-based) it was read from.
    pub source: (String, usize),
    /// Trivialized premise `S0`, at the ground level.
    pub trivialized: Sequent,
    /// Implicit reflection on an axiom, followed by one cut per argument.
    pub construction: Derivation,
    /// Fresh-context premises at the ground level.
    pub hypotheses: Vec<Sequent>,
}

/// Result of running the trivialize-and-cut construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Construction {
    pub implicit_rules: Vec<RuleScheme>,
    pub trivialized: Vec<Sequent>,
    pub derived: Vec<DerivedRule>,
    /// Set when some step of the construction was impossible.
    pub failure: Option<String>,
    /// Principal cut between the formation rules and the derived rules.
    pub cut_step: Option<CutResult>,
}

impl Construction {
    pub fn succeeded(&self) -> bool {
        self.failure.is_none() && self.cut_step.as_ref().is_some_and(|c| c.holds)
    }

    pub fn replay_all(&self) -> Result<(), ReplayFailure> {
        for d in &self.derived {
            Replayer::new()
                .with_rules(self.implicit_rules.iter().cloned())
                .with_hypotheses(d.hypotheses.iter().cloned())
                .check(&d.construction)?;
        }
        if let Some(c) = &self.cut_step {
            for p in &c.pairs {
                if let Some(t) = &p.trace {
                    t.replay()?;
                }
            }
        }
        Ok(())
    }
}

/// Fresh context names `base`, or `base1..basek`, avoiding `taken`.
pub(crate) fn fresh_names(base: &str, count: usize, taken: &mut BTreeSet<String>) -> Vec<String> {
    let mut out = Vec::new();
    for i in 1..=count {
        let mut name = if count == 1 { base.to_string() } else { format!("{base}{i}") };
        while taken.contains(&name) {
            name.push('\'');
        }
        taken.insert(name.clone());
        out.push(name);
    }
    out
}

fn taken_names(spec: &ConnectiveSpec) -> BTreeSet<String> {
    let mut t: BTreeSet<String> = spec.args.iter().cloned().collect();
    t.insert(spec.name.clone());
    t
}

/// Runs trivialization and cut generalization on every formation rule,
/// regardless of admissibility.
pub fn construct(eq: &DefinitionalEquation, spec: &ConnectiveSpec) -> Construction {
    let (c, atoms) = ground_principal(spec);
    let mut out = Construction { implicit_rules: Vec::new(), trivialized: Vec::new(), derived: Vec::new(), failure: None, cut_step: None };
    let fail = |out: &mut Construction, msg: String| {
        if out.failure.is_none() {
            out.failure = Some(msg);
        }
    };
    for rule in &eq.formation_rules {
        let s = rule.side;
        let opp = s.opposite();
        if rule.conclusion.formulas(opp).next().is_some() {
            fail(&mut out, format!("{}: conclusion has formulas beside the quantified context", rule.name));
            continue;
        }
        let concl_ctx: Vec<ContextVar> = rule.conclusion.contexts(opp).cloned().collect();
        let Some(target) = concl_ctx.first() else {
            fail(&mut out, format!("{}: no context variable to trivialize", rule.name));
            continue;
        };
        let mut sub = Substitution::new();
        for (i, a) in atoms.iter().enumerate() {
            sub.metas.insert(i + 1, a.clone());
        }
        for ctx in rule.conclusion_contexts() {
            let image = if &ctx == target { vec![Item::Formula(c.clone())] } else { Vec::new() };
            sub.contexts.insert(ctx, image);
        }
        for ctx in rule.premise_contexts() {
            sub.contexts.entry(ctx.clone()).or_insert_with(|| vec![Item::Context(ctx)]);
        }
        let identity = substitute(&rule.conclusion, &sub);
        if !identity.is_axiom() {
            fail(&mut out, format!("{}: trivialized conclusion {identity} is not an identity", rule.name));
            continue;
        }
        for (j, premise) in rule.premises.iter().enumerate() {
            let implicit = RuleScheme::new(
                format!("{}/implicit.{}", rule.name, j + 1),
                s,
                vec![rule.conclusion.clone()],
                premise.clone(),
            );
            let s0 = substitute(premise, &sub);
            out.trivialized.push(s0.clone());
            let start = Derivation::rule(s0.clone(), &implicit.name, sub.clone(), vec![Derivation::axiom(identity.clone())]);
            out.implicit_rules.push(implicit);
            match generalize(start, &atoms, spec) {
                Ok((construction, hypotheses)) => {
                    let concl = &construction.conclusion;
                    let Some(side) = principal_side(concl, &spec.name) else {
                        fail(&mut out, format!("trivialized premise {s0} does not yield a rule for {}", spec.name));
                        continue;
                    };
                    if concl.formulas(side).count() != 1 || concl.formulas(side.opposite()).next().is_some() {
                        fail(&mut out, format!("trivialized premise {s0} leaves formulas beside {c}"));
                        continue;
                    }
                    let lift = |seq: &Sequent| lift_to_schema(seq, &atoms, &c, spec);
                    let explicit = RuleScheme::new(
                        format!("{}/explicit.{}", rule.name, j + 1),
                        side,
                        hypotheses.iter().map(lift).collect(),
                        lift(concl),
                    );
                    out.derived.push(DerivedRule {
                        rule: explicit,
                        source: (rule.name.clone(), j + 1),
                        trivialized: s0,
                        construction,
                        hypotheses,
                    });
                }
                Err(msg) => fail(&mut out, msg),
            }
        }
    }
    if out.failure.is_none() {
        let mut rules = eq.formation_rules.clone();
        rules.extend(out.derived.iter().map(|d| d.rule.clone()));
        let check = ConnectiveSpec::new(spec.name.clone(), spec.args.clone(), rules, spec.provenance.clone());
        out.cut_step = Some(check_main_cut_step(&check));
    }
    out
}

/// Cuts every standalone argument atom of the start sequent against a fresh
/// hypothesis `Γ ⊢ a` (atom on the left) or `a ⊢ Δ` (atom on the right).
fn generalize(
    start: Derivation,
    atoms: &[Formula],
    spec: &ConnectiveSpec,
) -> Result<(Derivation, Vec<Sequent>), String> {
    let is_arg = |i: &Item| matches!(i, Item::Formula(f) if atoms.contains(f));
    let left: Vec<Formula> = start.conclusion.antecedent().iter().filter(|i| is_arg(i)).filter_map(|i| i.as_formula().cloned()).collect();
    let right: Vec<Formula> = start.conclusion.succedent().iter().filter(|i| is_arg(i)).filter_map(|i| i.as_formula().cloned()).collect();
    let mut taken = taken_names(spec);
    taken.extend(start.conclusion.all_contexts().into_iter().map(|c| c.0));
    let gammas = fresh_names("G", left.len(), &mut taken);
    let deltas = fresh_names("D", right.len(), &mut taken);
    let mut d = start;
    let mut hyps = Vec::new();
    for (a, g) in left.iter().zip(&gammas) {
        let h = Sequent::new(vec![Item::ctx(g.clone())], vec![Item::Formula(a.clone())]);
        hyps.push(h.clone());
        d = Derivation::cut(a.clone(), Derivation::hypothesis(h), d).map_err(|e| e.to_string())?;
    }
    for (a, g) in right.iter().zip(&deltas) {
        let h = Sequent::new(vec![Item::Formula(a.clone())], vec![Item::ctx(g.clone())]);
        hyps.push(h.clone());
        d = Derivation::cut(a.clone(), d, Derivation::hypothesis(h)).map_err(|e| e.to_string())?;
    }
    Ok((d, hyps))
}

fn lift_to_schema(seq: &Sequent, atoms: &[Formula], principal: &Formula, spec: &ConnectiveSpec) -> Sequent {
    seq.map_formulas(|f| {
        if f == principal {
            return spec.principal();
        }
        match atoms.iter().position(|a| a == f) {
            Some(i) => spec.meta(i + 1),
            None => f.clone(),
        }
    })
}

/// Identity-grounded sequents of an admissible single-rule equation, at the
/// schematic level (e.g. `A, B ⊢ C(A, B)`).
pub fn trivialize(eq: &DefinitionalEquation, spec: &ConnectiveSpec) -> Result<Vec<Sequent>, ReflectionError> {
    require_solvable_shape(eq)?;
    let (c, atoms) = ground_principal(spec);
    let con = construct(eq, spec);
    Ok(con.trivialized.iter().map(|s| lift_to_schema(s, &atoms, &c, spec)).collect())
}

pub fn derive_explicit_reflection(eq: &DefinitionalEquation, spec: &ConnectiveSpec) -> Result<Vec<DerivedRule>, ReflectionError> {
    require_solvable_shape(eq)?;
    let con = construct(eq, spec);
    match con.failure {
        Some(f) => Err(ReflectionError::NotAdmissible(f)),
        None => Ok(con.derived),
    }
}

fn require_solvable_shape(eq: &DefinitionalEquation) -> Result<(), ReflectionError> {
    let (ok, reason) = check_admissible(eq);
    if !ok {
        return Err(ReflectionError::NotAdmissible(reason.as_str().into()));
    }
    if eq.formation_rules.len() != 1 {
        return Err(ReflectionError::NotAdmissible(format!("{} formation rules", eq.formation_rules.len())));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    pub equation: DefinitionalEquation,
    pub formation_side: Side,
    pub formation_rule_count: usize,
    pub admissible: bool,
    pub reason: Reason,
    pub context_changing: bool,
    /// Structural pre-check that fired, if any.
    pub lemma: Option<Lemma>,
    /// Schematic `S0` sequents (only when the pre-checks pass).
    pub trivialization: Vec<Sequent>,
    /// Explicit reflection rules (only when the pre-checks pass).
    pub derived: Vec<DerivedRule>,
    pub cut_step_ok: bool,
    pub matches_given: bool,
    pub solvable: bool,
    /// The construction run without pre-checks.
    pub construction: Construction,
}

impl SolveResult {
    /// Verdict of the construction alone, ignoring the pre-checks.
    pub fn direct_solvable(&self) -> bool {
        self.formation_rule_count > 0 && self.construction.succeeded()
    }

    /// A pre-check that fires must agree with the construction.
    pub fn lemma_agreement(&self) -> bool {
        self.lemma.is_none() || !self.direct_solvable()
    }

    pub fn derived_rules(&self) -> impl Iterator<Item = &RuleScheme> {
        self.derived.iter().map(|d| &d.rule)
    }
}

pub fn solve(eq: &DefinitionalEquation, spec: &ConnectiveSpec) -> SolveResult {
    let count = eq.formation_rules.len();
    let (admissible, reason) = check_admissible(eq);
    let context_changing = eq.formation_rules.iter().any(detect_context_change);
    let lemma = if context_changing {
        Some(Lemma::ContextChanging)
    } else if count > 1 {
        Some(Lemma::SeveralFormationRules)
    } else {
        None
    };
    let construction = construct(eq, spec);
    let official = count == 1 && admissible && lemma.is_none();
    let (c, atoms) = ground_principal(spec);
    let (trivialization, derived, cut_step_ok) = if official {
        (
            construction.trivialized.iter().map(|s| lift_to_schema(s, &atoms, &c, spec)).collect(),
            construction.derived.clone(),
            construction.succeeded(),
        )
    } else {
        (Vec::new(), Vec::new(), false)
    };
    let given: Vec<&RuleScheme> = spec.rules_on(eq.formation_side.opposite()).collect();
    let matches_given = official && construction.failure.is_none() && same_rules(derived.iter().map(|d| &d.rule), given);
    SolveResult {
        equation: eq.clone(),
        formation_side: eq.formation_side,
        formation_rule_count: count,
        admissible,
        reason,
        context_changing,
        lemma,
        trivialization,
        derived,
        cut_step_ok,
        matches_given,
        solvable: official && cut_step_ok,
        construction,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReflectionVerdict {
    pub satisfied: bool,
    pub witness_side: Option<Side>,
    pub left: SolveResult,
    pub right: SolveResult,
}

impl ReflectionVerdict {
    pub fn side(&self, side: Side) -> &SolveResult {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }
}

pub fn check_reflection(spec: &ConnectiveSpec) -> ReflectionVerdict {
    let left = solve(&build_equation(spec, Side::Left), spec);
    let right = solve(&build_equation(spec, Side::Right), spec);
    let witness_side = [&left, &right]
        .into_iter()
        .find(|r| r.solvable && r.matches_given)
        .map(|r| r.formation_side);
    ReflectionVerdict { satisfied: witness_side.is_some(), witness_side, left, right }
}

/// Interderivability of the connective with a copy carrying the same rules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Uniqueness {
    pub star: ConnectiveSpec,
    /// `C(p̄) ⊢ C*(p̄)`.
    pub forward: Derivation,
    /// `C*(p̄) ⊢ C(p̄)`.
    pub backward: Derivation,
}

impl Uniqueness {
    pub fn replay(&self, spec: &ConnectiveSpec) -> Result<(), ReplayFailure> {
        let r = Replayer::for_spec(spec).with_rules(self.star.rules.iter().cloned());
        r.check(&self.forward)?;
        r.check(&self.backward)
    }
}

pub fn derive_uniqueness(spec: &ConnectiveSpec) -> Option<Uniqueness> {
    let verdict = check_reflection(spec);
    derive_uniqueness_on(spec, verdict.witness_side?)
}

/// Composes the two equations through their shared context: the formation
/// rule of one connective, with its context set to the other connective, is
/// closed by the other connective's explicit rules.
pub fn derive_uniqueness_on(spec: &ConnectiveSpec, formation_side: Side) -> Option<Uniqueness> {
    let star = spec.renamed(&format!("{}*", spec.name), "*");
    let (c, atoms) = ground_principal(spec);
    let c_star = star.instance(&atoms);
    let s = formation_side;
    let rules = |x: &ConnectiveSpec, side: Side| -> Vec<RuleScheme> { x.rules_on(side).cloned().collect() };
    let derive = |from: &Formula, to: &Formula, from_spec: &ConnectiveSpec, to_spec: &ConnectiveSpec| {
        let goal = Sequent::new(vec![Item::Formula(from.clone())], vec![Item::Formula(to.clone())]);
        // the formation rule acts on whichever connective sits on its side
        let (first, second) = match s {
            Side::Left => (rules(from_spec, s), rules(to_spec, s.opposite())),
            Side::Right => (rules(to_spec, s), rules(from_spec, s.opposite())),
        };
        let first: Vec<&RuleScheme> = first.iter().collect();
        let second: Vec<&RuleScheme> = second.iter().collect();
        two_phase(&goal, &first, &second, "formation-first").ok()
    };
    let forward = derive(&c, &c_star, spec, &star)?;
    let backward = derive(&c_star, &c, &star, spec)?;
    Some(Uniqueness { star, forward, backward })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::canonical_key;
    use crate::dsl::{builtin_corpus, parse_spec};

    fn corpus(name: &str) -> ConnectiveSpec {
        builtin_corpus().into_iter().find(|e| e.spec.name == name).unwrap().spec
    }

    #[test]
    fn equations_read_off_rules() {
        let t = corpus("Tensor");
        assert_eq!(build_equation(&t, Side::Left).to_string(), "forall D. Tensor(A, B) |- D iff A, B |- D");
        let w = corpus("With");
        assert_eq!(build_equation(&w, Side::Right).to_string(), "forall G. G |- With(A, B) iff G |- A and G |- B");
        let l = build_equation(&w, Side::Left);
        assert_eq!(l.to_string(), "forall D. With(A, B) |- D iff A |- D and B |- D");
        assert_eq!(l.formation_rules.len(), 2);
    }

    #[test]
    fn context_change_detection() {
        let w = corpus("With");
        assert!(!detect_context_change(w.rule("with-R").unwrap()));
        let t = corpus("Tensor");
        assert!(!detect_context_change(t.rule("tensor-L").unwrap()));
        let m = &parse_spec(r#"connective M(A, B) { right "m": [G1 |- A; G2 |- B] => G1 |- *; }"#).unwrap()[0];
        assert!(detect_context_change(&m.rules[0]));
    }

    #[test]
    fn admissibility_reasons() {
        let t = corpus("Tensor");
        assert_eq!(check_admissible(&build_equation(&t, Side::Right)), (false, Reason::MultiContextConclusion));
        assert_eq!(check_admissible(&build_equation(&corpus("With"), Side::Right)), (true, Reason::Ok));
        assert_eq!(check_admissible(&build_equation(&corpus("Tonk"), Side::Right)), (true, Reason::Ok));
        let dropped = &parse_spec(r#"connective K(A) { left "k": [A |- D] => * |- D; }"#).unwrap()[0];
        assert_eq!(check_admissible(&build_equation(dropped, Side::Right)), (false, Reason::MissingRules));
    }

    #[test]
    fn trivialization_outputs() {
        let t = corpus("Tensor");
        let s0: Vec<String> = trivialize(&build_equation(&t, Side::Left), &t).unwrap().iter().map(|s| s.to_string()).collect();
        assert_eq!(s0, vec!["A, B |- Tensor(A, B)"]);
        let w = corpus("With");
        let s0: Vec<String> = trivialize(&build_equation(&w, Side::Right), &w).unwrap().iter().map(|s| s.to_string()).collect();
        assert_eq!(s0, vec!["With(A, B) |- A", "With(A, B) |- B"]);
        let p = corpus("Plus");
        let s0: Vec<String> = trivialize(&build_equation(&p, Side::Left), &p).unwrap().iter().map(|s| s.to_string()).collect();
        assert_eq!(s0, vec!["A |- Plus(A, B)", "B |- Plus(A, B)"]);
        assert!(trivialize(&build_equation(&t, Side::Right), &t).is_err());
    }

    #[test]
    fn tensor_explicit_reflection() {
        let t = corpus("Tensor");
        let d = derive_explicit_reflection(&build_equation(&t, Side::Left), &t).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].rule.to_string(), "right \"tensor-L/explicit.1\": [G1 |- A; G2 |- B] => G1, G2 |- Tensor(A, B)");
        assert_eq!(canonical_key(&d[0].rule), canonical_key(t.rule("tensor-R").unwrap()));
    }

    #[test]
    fn with_explicit_reflection() {
        let w = corpus("With");
        let d = derive_explicit_reflection(&build_equation(&w, Side::Right), &w).unwrap();
        let shown: Vec<String> = d.iter().map(|r| format!("{:?}", r.rule.premises.iter().map(|p| p.to_string()).collect::<Vec<_>>())).collect();
        assert_eq!(shown, vec!["[\"A |- D\"]", "[\"B |- D\"]"]);
        assert!(d.iter().all(|r| r.rule.conclusion.to_string() == "With(A, B) |- D"));
    }

    #[test]
    fn solve_verdicts() {
        let w = corpus("With");
        let left = solve(&build_equation(&w, Side::Left), &w);
        assert!(!left.solvable);
        assert_eq!(left.lemma, Some(Lemma::SeveralFormationRules));
        assert!(left.lemma_agreement());

        let t = corpus("Tensor");
        let left = solve(&build_equation(&t, Side::Left), &t);
        assert!(left.solvable && left.matches_given);
        left.construction.replay_all().unwrap();

        let tonk = corpus("Tonk");
        let right = solve(&build_equation(&tonk, Side::Right), &tonk);
        assert!(right.cut_step_ok && right.solvable && !right.matches_given);
        assert_eq!(right.derived[0].rule.to_string(), "left \"tonk-R/explicit.1\": [A |- D] => Tonk(A, B) |- D");
    }

    #[test]
    fn reflection_witnesses() {
        assert_eq!(check_reflection(&corpus("Tensor")).witness_side, Some(Side::Left));
        assert_eq!(check_reflection(&corpus("With")).witness_side, Some(Side::Right));
        assert!(!check_reflection(&corpus("Tonk")).satisfied);
    }

    #[test]
    fn uniqueness_pairs() {
        for name in ["With", "Tensor", "Fig3", "Par", "Plus"] {
            let spec = corpus(name);
            let u = derive_uniqueness(&spec).unwrap_or_else(|| panic!("{name}"));
            u.replay(&spec).unwrap();
            assert_eq!(u.forward.conclusion.antecedent()[0].to_string(), u.backward.conclusion.succedent()[0].to_string());
        }
        assert!(derive_uniqueness(&corpus("Tonk")).is_none());
    }

    #[test]
    fn forced_construction_fails_for_context_shrink() {
        let s = corpus("ContextShrink");
        let right = solve(&build_equation(&s, Side::Right), &s);
        assert_eq!(right.lemma, Some(Lemma::ContextChanging));
        assert!(!right.direct_solvable());
        assert!(right.construction.failure.is_some());
    }
}
