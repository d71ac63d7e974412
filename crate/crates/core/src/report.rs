//! Full analysis of a connective, the equivalence check across analyses, and
//! text/JSON rendering. Failing checks are data; only a missing search depth
//! is an error.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use serde::Serialize;
use serde_json::{json, Value};

use crate::calculus::{replay, validate_visibility, ConnectiveSpec, Derivation, Provenance, Side, Step};
use crate::classify::{classify, Classification};
use crate::cut::{check_main_cut_step, CutResult, PairVerdict};
use crate::doi::{check_doi, DoiError, DoiMode, DoiResult};
use crate::dsl::{spec_source, RuleJson};
use crate::exec::ordered_map;
use crate::reflection::{check_reflection, derive_uniqueness_on, ReflectionVerdict, SolveResult, Uniqueness};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AnalyzeOptions {
    pub doi_mode: DoiMode,
    pub max_depth: Option<usize>,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        Self { doi_mode: DoiMode::TwoPhase, max_depth: None }
    }
}

/// The four verdicts the equivalence relates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Verdicts {
    pub doi: bool,
    pub main_cut: bool,
    pub reflection: bool,
    pub synthetic: bool,
}

impl Verdicts {
    /// Names of the biconditionals that fail.
    pub fn broken(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if (self.doi && self.main_cut) != self.reflection {
            out.push("(doi and main_cut) <=> reflection");
        }
        if self.reflection != self.synthetic {
            out.push("reflection <=> synthetic");
        }
        out
    }

    pub fn consistent(&self) -> bool {
        self.broken().is_empty()
    }
}

/// Wall time per stage. Never rendered, so output stays byte-stable.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Timings {
    pub doi: Duration,
    pub main_cut: Duration,
    pub reflection: Duration,
    pub classify: Duration,
    pub uniqueness: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalysisReport {
    pub spec: ConnectiveSpec,
    pub doi: DoiResult,
    pub main_cut: CutResult,
    pub reflection: ReflectionVerdict,
    pub classification: Classification,
    pub uniqueness: Option<Uniqueness>,
    pub equivalence_consistent: bool,
    pub notes: Vec<String>,
    pub timings: Timings,
}

fn timed<T>(slot: &mut Duration, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    *slot = start.elapsed();
    out
}

pub fn analyze(spec: &ConnectiveSpec, options: AnalyzeOptions) -> Result<AnalysisReport, DoiError> {
    let mut t = Timings::default();
    let doi = timed(&mut t.doi, || check_doi(spec, options.doi_mode, options.max_depth))?;
    let main_cut = timed(&mut t.main_cut, || check_main_cut_step(spec));
    let reflection = timed(&mut t.reflection, || check_reflection(spec));
    let classification = timed(&mut t.classify, || classify(spec));
    let uniqueness = timed(&mut t.uniqueness, || reflection.witness_side.and_then(|s| derive_uniqueness_on(spec, s)));
    let mut report = AnalysisReport {
        spec: spec.clone(),
        doi,
        main_cut,
        reflection,
        classification,
        uniqueness,
        equivalence_consistent: false,
        notes: Vec::new(),
        timings: t,
    };
    report.equivalence_consistent = report.verdicts().consistent();
    report.notes = notes(&report);
    Ok(report)
}

fn notes(r: &AnalysisReport) -> Vec<String> {
    let mut out = Vec::new();
    let spec = &r.spec;
    if spec.is_degenerate() {
        out.push("rules on one side only: analyzed, but not a connective in the strict sense".to_string());
    }
    let unused = spec.unused_args();
    if !unused.is_empty() {
        let names: Vec<&str> = unused.iter().map(|&i| spec.args[i - 1].as_str()).collect();
        out.push(format!("arguments occurring in no premise: {}", names.join(", ")));
    }
    for rule in &spec.rules {
        for v in validate_visibility(rule) {
            out.push(format!("rule {}: {}", rule.name, v.detail));
        }
    }
    if let Some(m) = &r.classification.matrix {
        if r.reflection.satisfied && !m.is_single_mall_connective() {
            out.push(format!(
                "solvable definitional equation beyond tensor, par, with and plus: scheme {m}"
            ));
        }
    }
    out
}

impl AnalysisReport {
    pub fn verdicts(&self) -> Verdicts {
        Verdicts {
            doi: self.doi.holds,
            main_cut: self.main_cut.holds,
            reflection: self.reflection.satisfied,
            synthetic: self.classification.synthetic,
        }
    }

    /// Every emitted certificate that fails to replay, described.
    pub fn replay_failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let Some(d) = &self.doi.certificate {
            if let Err(e) = replay(d, &self.spec) {
                out.push(format!("doi certificate {e}"));
            }
        }
        for p in &self.main_cut.pairs {
            if let Some(t) = &p.trace {
                if let Err(e) = t.replay() {
                    out.push(format!("reduction {}/{} {e}", p.right_rule, p.left_rule));
                }
            }
        }
        for s in self.equations() {
            if let Err(e) = s.construction.replay_all() {
                out.push(format!("{} equation construction {e}", s.formation_side));
            }
        }
        if let Some(u) = &self.uniqueness {
            if let Err(e) = u.replay(&self.spec) {
                out.push(format!("uniqueness {e}"));
            }
        }
        out
    }

    /// Equations whose pre-check fired while the direct construction succeeded.
    pub fn lemma_disagreements(&self) -> Vec<Side> {
        self.equations().filter(|s| !s.lemma_agreement()).map(|s| s.formation_side).collect()
    }

    pub fn uniqueness_missing(&self) -> bool {
        self.reflection.satisfied && self.uniqueness.is_none()
    }

    pub fn equations(&self) -> impl Iterator<Item = &SolveResult> {
        [&self.reflection.left, &self.reflection.right].into_iter()
    }

    /// Number of emitted derivations: certificate, traces, constructions and
    /// the uniqueness pair.
    pub fn certificate_count(&self) -> usize {
        self.doi.certificate.iter().count()
            + self.main_cut.pairs.iter().filter(|p| p.reduces()).count()
            + self.equations().map(|s| s.construction.derived.len()).sum::<usize>()
            + self.uniqueness.as_ref().map_or(0, |_| 2)
    }

    pub fn to_json(&self) -> Value {
        let spec = &self.spec;
        json!({
            "connective": spec.name,
            "arity": spec.arity(),
            "arguments": spec.args,
            "provenance": provenance_str(&spec.provenance),
            "rules": spec.rules.iter().map(RuleJson::from).collect::<Vec<_>>(),
            "doi": doi_json(&self.doi),
            "main_cut": cut_json(&self.main_cut),
            "equations": self.equations().map(equation_json).collect::<Vec<_>>(),
            "reflection": {
                "satisfied": self.reflection.satisfied,
                "witness_side": self.reflection.witness_side.map(|s| s.as_str()),
            },
            "classification": classification_json(&self.classification),
            "uniqueness": {
                "derivable": self.uniqueness.is_some(),
                "forward": self.uniqueness.as_ref().map(|u| derivation_json(&u.forward)),
                "backward": self.uniqueness.as_ref().map(|u| derivation_json(&u.backward)),
            },
            "equivalence_consistent": self.equivalence_consistent,
            "notes": self.notes,
        })
    }

    pub fn render_text(&self, verbose: bool) -> String {
        let mut s = String::new();
        let spec = &self.spec;
        let _ = writeln!(s, "connective {}({})  [{}]", spec.name, spec.args.join(", "), provenance_str(&spec.provenance));
        for r in &spec.rules {
            let _ = writeln!(s, "  {r}");
        }
        s.push_str(&doi_text(&self.doi, verbose));
        s.push_str(&cut_text(&self.main_cut, verbose));
        for e in self.equations() {
            s.push_str(&equation_text(e, verbose));
        }
        let _ = match self.reflection.witness_side {
            Some(side) => writeln!(s, "reflection: satisfied by the {side} equation"),
            None => writeln!(s, "reflection: not satisfied"),
        };
        s.push_str(&classification_text(&self.classification));
        let _ = match &self.uniqueness {
            Some(u) => {
                let _ = writeln!(s, "uniqueness: {} and {} interderivable", u.forward.conclusion, u.backward.conclusion);
                if verbose {
                    s.push_str(&indent(&u.forward.render_tree(), 2));
                    s.push_str(&indent(&u.backward.render_tree(), 2));
                }
                Ok(())
            }
            None if self.reflection.satisfied => writeln!(s, "uniqueness: NOT derivable"),
            None => writeln!(s, "uniqueness: not applicable"),
        };
        let _ = writeln!(
            s,
            "equivalence: {}",
            if self.equivalence_consistent { "consistent".to_string() } else { format!("VIOLATED: {}", self.verdicts().broken().join("; ")) }
        );
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        s
    }
}

pub fn provenance_str(p: &Provenance) -> String {
    match p {
        Provenance::Builtin => "builtin".into(),
        Provenance::Parsed => "parsed".into(),
        Provenance::Generated(seed) => format!("generated:{seed}"),
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn indent(text: &str, n: usize) -> String {
    let pad = " ".repeat(n);
    text.lines().map(|l| format!("{pad}{l}\n")).collect()
}

pub fn doi_text(doi: &DoiResult, verbose: bool) -> String {
    let mut s = String::new();
    match &doi.certificate {
        Some(d) => {
            let _ = writeln!(s, "identity: derivable ({}; {})", doi.mode, d.rules_used().join(", "));
            if verbose {
                s.push_str(&indent(&d.render_tree(), 2));
            }
        }
        None => {
            let _ = writeln!(s, "identity: NOT derivable ({})", doi.mode);
            for a in &doi.failure {
                let _ = writeln!(s, "  {a}");
            }
        }
    }
    s
}

pub fn cut_text(cut: &CutResult, verbose: bool) -> String {
    let mut s = String::new();
    let ok = cut.pairs.iter().filter(|p| p.reduces()).count();
    let _ = writeln!(s, "main cut step: {} ({ok}/{} pairs reduce)", if cut.holds { "holds" } else { "FAILS" }, cut.pairs.len());
    for p in &cut.pairs {
        match (&p.trace, &p.failure) {
            (Some(t), _) => {
                let on: Vec<String> = t.cuts.iter().map(|(f, _)| f.to_string()).collect();
                let _ = writeln!(
                    s,
                    "  {} / {}: cuts on {} using {} give {}",
                    p.right_rule,
                    p.left_rule,
                    if on.is_empty() { "nothing".to_string() } else { on.join(", ") },
                    t.premises_used.join(", "),
                    t.final_sequent
                );
                if verbose {
                    s.push_str(&indent(&t.derivation.render_tree(), 4));
                }
            }
            (None, f) => {
                let _ = writeln!(s, "  {} / {}: {}", p.right_rule, p.left_rule, f.as_deref().unwrap_or("irreducible"));
            }
        }
    }
    s
}

pub fn equation_text(e: &SolveResult, verbose: bool) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} equation: {}", e.formation_side, e.equation);
    let _ = writeln!(
        s,
        "  formation rules: {}, admissible: {} ({}), context-changing: {}",
        e.formation_rule_count,
        yes(e.admissible),
        e.reason.as_str(),
        yes(e.context_changing)
    );
    if let Some(l) = e.lemma {
        let _ = writeln!(
            s,
            "  unsolvable by pre-check: {}; direct construction {}",
            l.as_str(),
            if e.direct_solvable() { "SUCCEEDS" } else { "agrees" }
        );
    }
    for t in &e.trivialization {
        let _ = writeln!(s, "  trivialized: {t}");
    }
    for d in &e.derived {
        let _ = writeln!(s, "  derived: {}", d.rule);
        if verbose {
            s.push_str(&indent(&d.construction.render_tree(), 4));
        }
    }
    if e.formation_rule_count > 0 {
        let _ = writeln!(
            s,
            "  solvable: {}, cut step: {}, matches given rules: {}",
            yes(e.solvable),
            yes(e.cut_step_ok),
            yes(e.matches_given)
        );
    }
    s
}

pub fn classification_text(c: &Classification) -> String {
    let mut s = match (&c.matrix, c.failure) {
        (Some(m), _) => format!("synthetic: yes, scheme {m}\n"),
        (None, Some(f)) => format!("synthetic: no ({}: {})\n", f.as_str(), c.detail.as_deref().unwrap_or("")),
        (None, None) => "synthetic: no\n".to_string(),
    };
    for w in &c.warnings {
        let _ = writeln!(s, "warning: {w}");
    }
    s
}

pub fn derivation_json(d: &Derivation) -> Value {
    let premises: Vec<Value> = d.children().into_iter().map(derivation_json).collect();
    match &d.step {
        Step::Axiom => json!({ "conclusion": d.conclusion.to_string(), "step": "axiom" }),
        Step::Hypothesis => json!({ "conclusion": d.conclusion.to_string(), "step": "hypothesis" }),
        Step::Rule { rule, substitution, .. } => json!({
            "conclusion": d.conclusion.to_string(),
            "step": "rule",
            "rule": rule,
            "substitution": substitution.to_string(),
            "premises": premises,
        }),
        Step::Cut { formula, .. } => json!({
            "conclusion": d.conclusion.to_string(),
            "step": "cut",
            "formula": formula.to_string(),
            "premises": premises,
        }),
    }
}

pub fn doi_json(doi: &DoiResult) -> Value {
    json!({
        "holds": doi.holds,
        "mode": doi.mode.to_string(),
        "certificate": doi.certificate.as_ref().map(derivation_json),
        "failures": doi.failure.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
    })
}

pub fn cut_json(cut: &CutResult) -> Value {
    json!({
        "holds": cut.holds,
        "pairs": cut.pairs.iter().map(pair_json).collect::<Vec<_>>(),
    })
}

pub fn classification_json(c: &Classification) -> Value {
    json!({
        "synthetic": c.synthetic,
        "scheme": c.scheme.map(|s| s.to_string()),
        "polarity": c.matrix.as_ref().map(|m| m.polarity),
        "matrix": c.matrix.as_ref().map(|m| m.branch_names()),
        "failure": c.failure.map(|f| f.as_str()),
        "detail": c.detail,
        "warnings": c.warnings,
    })
}

pub fn pair_json(p: &PairVerdict) -> Value {
    json!({
        "right_rule": p.right_rule,
        "left_rule": p.left_rule,
        "target": p.target.as_ref().map(|t| t.to_string()),
        "reduces": p.reduces(),
        "premises_used": p.trace.as_ref().map(|t| t.premises_used.clone()),
        "cuts": p.trace.as_ref().map(|t| t.cuts.iter().map(|(f, r)| json!({"formula": f.to_string(), "result": r.to_string()})).collect::<Vec<_>>()),
        "derivation": p.trace.as_ref().map(|t| derivation_json(&t.derivation)),
        "failure": p.failure,
    })
}

pub fn equation_json(e: &SolveResult) -> Value {
    json!({
        "formation_side": e.formation_side.as_str(),
        "equation": e.equation.to_string(),
        "formation_rule_count": e.formation_rule_count,
        "admissible": e.admissible,
        "reason": e.reason.as_str(),
        "context_changing": e.context_changing,
        "lemma": e.lemma.map(|l| l.as_str()),
        "trivialization": e.trivialization.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        "derived_rules": e.derived.iter().map(|d| RuleJson::from(&d.rule)).collect::<Vec<_>>(),
        "constructions": e.derived.iter().map(|d| derivation_json(&d.construction)).collect::<Vec<_>>(),
        "cut_step_ok": e.cut_step_ok,
        "matches_given": e.matches_given,
        "solvable": e.solvable,
        "direct_solvable": e.direct_solvable(),
        "direct_failure": e.construction.failure,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ViolationRecord {
    pub id: String,
    pub broken: Vec<String>,
    pub verdicts: Verdicts,
    /// Rule-file text reproducing the counterexample.
    pub source: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EquivalenceSummary {
    pub total: usize,
    pub violations: Vec<ViolationRecord>,
    pub lemma_disagreements: Vec<(String, Side)>,
    pub replay_failures: Vec<(String, String)>,
    pub uniqueness_failures: Vec<String>,
    pub certificates: usize,
    pub wall_time: Duration,
}

impl EquivalenceSummary {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
            && self.lemma_disagreements.is_empty()
            && self.replay_failures.is_empty()
            && self.uniqueness_failures.is_empty()
    }

    /// Summary lines; wall time is left out so the text is byte-stable.
    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "specs analyzed: {}", self.total);
        let _ = writeln!(s, "certificates replayed: {}", self.certificates);
        let _ = writeln!(s, "equivalence violations: {}", self.violations.len());
        for v in &self.violations {
            let _ = writeln!(s, "  {}: {}", v.id, v.broken.join("; "));
            s.push_str(&indent(&v.source, 4));
        }
        let _ = writeln!(s, "lemma disagreements: {}", self.lemma_disagreements.len());
        for (id, side) in &self.lemma_disagreements {
            let _ = writeln!(s, "  {id}: {side} equation");
        }
        let _ = writeln!(s, "replay failures: {}", self.replay_failures.len());
        for (id, e) in &self.replay_failures {
            let _ = writeln!(s, "  {id}: {e}");
        }
        let _ = writeln!(s, "uniqueness failures: {}", self.uniqueness_failures.len());
        for id in &self.uniqueness_failures {
            let _ = writeln!(s, "  {id}");
        }
        s
    }

    pub fn to_json(&self) -> Value {
        json!({
            "total": self.total,
            "certificates": self.certificates,
            "violations": self.violations.iter().map(|v| json!({
                "id": v.id,
                "broken": v.broken,
                "verdicts": v.verdicts,
                "source": v.source,
            })).collect::<Vec<_>>(),
            "lemma_disagreements": self.lemma_disagreements.iter().map(|(id, s)| json!({"id": id, "side": s.as_str()})).collect::<Vec<_>>(),
            "replay_failures": self.replay_failures.iter().map(|(id, e)| json!({"id": id, "error": e})).collect::<Vec<_>>(),
            "uniqueness_failures": self.uniqueness_failures,
        })
    }
}

/// Aggregates reports; verdict consistency is recomputed, not read from the
/// stored flag.
pub fn summarize<'a>(reports: impl IntoIterator<Item = (&'a str, &'a AnalysisReport)>) -> EquivalenceSummary {
    let mut sum = EquivalenceSummary::default();
    for (id, r) in reports {
        sum.total += 1;
        sum.certificates += r.certificate_count();
        let v = r.verdicts();
        let broken = v.broken();
        if !broken.is_empty() {
            sum.violations.push(ViolationRecord {
                id: id.to_string(),
                broken: broken.into_iter().map(String::from).collect(),
                verdicts: v,
                source: spec_source(&r.spec),
            });
        }
        for side in r.lemma_disagreements() {
            sum.lemma_disagreements.push((id.to_string(), side));
        }
        for e in r.replay_failures() {
            sum.replay_failures.push((id.to_string(), e));
        }
        if r.uniqueness_missing() {
            sum.uniqueness_failures.push(id.to_string());
        }
    }
    sum
}

pub fn analyze_all(specs: &[ConnectiveSpec]) -> Vec<AnalysisReport> {
    ordered_map(specs, |s| analyze(s, AnalyzeOptions::default()).expect("two-phase search needs no depth"))
}

pub fn verify_equivalence(specs: &[ConnectiveSpec]) -> EquivalenceSummary {
    let start = Instant::now();
    let reports = analyze_all(specs);
    let mut sum = summarize(reports.iter().map(|r| (r.spec.name.as_str(), r)));
    sum.wall_time = start.elapsed();
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::builtin_corpus;

    fn corpus(name: &str) -> ConnectiveSpec {
        builtin_corpus().into_iter().find(|e| e.spec.name == name).unwrap().spec
    }

    #[test]
    fn tensor_report() {
        let r = analyze(&corpus("Tensor"), AnalyzeOptions::default()).unwrap();
        assert!(r.equivalence_consistent);
        assert_eq!(r.reflection.witness_side, Some(Side::Left));
        assert!(r.replay_failures().is_empty());
        let j = r.to_json();
        assert_eq!(j["doi"]["holds"], true);
        assert_eq!(j["equations"][1]["reason"], "multi_context_conclusion");
        assert_eq!(j["classification"]["scheme"], "II");
    }

    #[test]
    fn fig3_gets_a_note() {
        let r = analyze(&corpus("Fig3"), AnalyzeOptions::default()).unwrap();
        assert!(r.notes.iter().any(|n| n.contains("beyond tensor")));
    }

    #[test]
    fn corrupted_report_is_caught() {
        let mut r = analyze(&corpus("With"), AnalyzeOptions::default()).unwrap();
        assert!(summarize([("With", &r)]).is_clean());
        r.doi.holds = false;
        let sum = summarize([("With", &r)]);
        assert_eq!(sum.violations.len(), 1);
        assert_eq!(sum.violations[0].broken, vec!["(doi and main_cut) <=> reflection"]);
    }

    #[test]
    fn text_is_stable() {
        let spec = corpus("Tonk");
        let a = analyze(&spec, AnalyzeOptions::default()).unwrap().render_text(true);
        let b = analyze(&spec, AnalyzeOptions::default()).unwrap().render_text(true);
        assert_eq!(a, b);
        assert!(a.contains("identity: NOT derivable"));
    }
}
