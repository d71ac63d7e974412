//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use synconn::calculus::{canonical_key, ConnectiveSpec, RuleScheme, Side};
use synconn::classify::Scheme;
use synconn::dsl::{builtin_corpus, parse_spec};
use synconn::fuzz::{run_fuzz, FuzzConfig};
use synconn::generator::{GenBounds, MutationKind};
use synconn::reflection::{build_equation, derive_explicit_reflection, Lemma};
use synconn::report::{analyze_all, summarize, AnalysisReport};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn corpus_spec(name: &str) -> ConnectiveSpec {
    builtin_corpus().into_iter().find(|e| e.spec.name == name).expect("corpus entry").spec
}

fn keys<'a>(rules: impl IntoIterator<Item = &'a RuleScheme>) -> Vec<String> {
    let mut k: Vec<String> = rules.into_iter().map(canonical_key).collect();
    k.sort();
    k
}

/// Rules written out by hand, independently of the engine.
fn figure_rules(src: &str) -> Vec<RuleScheme> {
    parse_spec(src).expect("figure rules parse").remove(0).rules
}

fn corpus_matrix() -> Outcome {
    let start = Instant::now();
    let corpus = builtin_corpus();
    let specs: Vec<ConnectiveSpec> = corpus.iter().map(|e| e.spec.clone()).collect();
    let reports = analyze_all(&specs);
    let elapsed = start.elapsed();
    let mut mismatches = Vec::new();
    for (e, r) in corpus.iter().zip(&reports) {
        let x = e.expected;
        let got = (
            r.doi.holds,
            r.main_cut.holds,
            r.reflection.left.solvable,
            r.reflection.right.solvable,
            r.reflection.satisfied,
            r.classification.synthetic,
            r.classification.scheme,
        );
        let want = (x.doi, x.main_cut, x.left_solvable, x.right_solvable, x.reflection, x.synthetic, x.scheme);
        if got != want {
            mismatches.push(format!("{}: got {got:?}, want {want:?}", e.spec.name));
        }
    }
    let with = reports.iter().find(|r| r.spec.name == "With").expect("with");
    if with.reflection.left.lemma != Some(Lemma::SeveralFormationRules) {
        mismatches.push("With: left equation not rejected for several formation rules".into());
    }
    let tonk = reports.iter().find(|r| r.spec.name == "Tonk").expect("tonk");
    let v = tonk.verdicts();
    if v.doi || v.main_cut || v.reflection || v.synthetic {
        mismatches.push("Tonk: some verdict holds".into());
    }
    let fig3 = corpus.iter().find(|e| e.spec.name == "Fig3").expect("fig3");
    if fig3.expected.scheme != Some(Scheme::II) {
        mismatches.push("Fig3: expected scheme II".into());
    }
    let fast = elapsed < Duration::from_secs(1);
    outcome(
        mismatches.is_empty() && fast,
        if mismatches.is_empty() {
            format!("{} connectives as expected in {:.0?}", reports.len(), elapsed)
        } else {
            mismatches.join("; ")
        },
    )
}

fn figure_reproduction() -> Outcome {
    let mut failures = Vec::new();
    let mut check = |name: &str, side: Side, figure: &str| {
        let spec = corpus_spec(name);
        let derived = derive_explicit_reflection(&build_equation(&spec, side), &spec);
        match derived {
            Ok(d) => {
                if keys(d.iter().map(|r| &r.rule)) != keys(&figure_rules(figure)) {
                    failures.push(format!("{name}: derived rules differ from the figure"));
                }
            }
            Err(e) => failures.push(format!("{name}: {e}")),
        }
    };
    check("Tensor", Side::Left, r#"connective Tensor(A, B) { right "x": [S |- A; T |- B] => S, T |- *; }"#);
    check(
        "With",
        Side::Right,
        r#"connective With(A, B) { left "x1": [A |- E] => * |- E; left "x2": [B |- F] => * |- F; }"#,
    );
    check(
        "Fig3",
        Side::Left,
        r#"connective Fig3(A, B, C) {
            right "x1": [S |- A; T |- B] => S, T |- *;
            right "x2": [U |- A; V |- C] => U, V |- *;
        }"#,
    );
    outcome(failures.is_empty(), if failures.is_empty() { "tensor, with 1/2 and the ternary match".into() } else { failures.join("; ") })
}

struct Suite {
    reports: Vec<(String, AnalysisReport)>,
    generated: usize,
    attempted: usize,
    mutants: usize,
    elapsed: Duration,
}

fn theorem_suite() -> Suite {
    let start = Instant::now();
    let corpus: Vec<ConnectiveSpec> = builtin_corpus().into_iter().map(|e| e.spec).collect();
    let mut reports: Vec<(String, AnalysisReport)> =
        analyze_all(&corpus).into_iter().map(|r| (r.spec.name.clone(), r)).collect();
    let config = FuzzConfig { count: 500, seed: 42, bounds: GenBounds::default(), mutations: MutationKind::ALL.to_vec() };
    let run = run_fuzz(&config);
    let mut generated = 0;
    let mut mutants = 0;
    let attempted = run.cases.iter().filter(|c| c.mutation.is_some()).count();
    for (case, report) in run.cases.into_iter().zip(run.reports) {
        if let Some(r) = report {
            if case.mutation.is_some() {
                mutants += 1;
            } else {
                generated += 1;
            }
            reports.push((case.id, r));
        }
    }
    Suite { reports, generated, attempted, mutants, elapsed: start.elapsed() }
}

fn fuzz_json() -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_synconn"))
        .args(["fuzz", "--count", "500", "--seed", "42", "--format", "json"])
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("exit status {:?}", out.status.code()));
    }
    Ok(out.stdout)
}

fn main() -> ExitCode {
    let mut results: Vec<(u8, &str, Outcome)> = Vec::new();
    results.push((1, "corpus verdict matrix", corpus_matrix()));
    results.push((2, "explicit reflection rules match the figures", figure_reproduction()));

    let suite = theorem_suite();
    let summary = summarize(suite.reports.iter().map(|(id, r)| (id.as_str(), r)));
    let max_arity = suite.reports.iter().filter(|(id, _)| id.starts_with("Gen")).map(|(_, r)| r.spec.arity()).max();
    results.push((
        3,
        "equivalence over corpus, generated connectives and mutants",
        outcome(
            summary.violations.is_empty()
                && suite.generated >= 500
                && suite.attempted == 4 * suite.generated
                && max_arity <= Some(4)
                && suite.elapsed < Duration::from_secs(60),
            format!(
                "{} specs ({} generated, {} of {} mutations applicable), {} violations, {:.1?}",
                summary.total,
                suite.generated,
                suite.mutants,
                suite.attempted,
                summary.violations.len(),
                suite.elapsed
            ),
        ),
    ));
    results.push((
        4,
        "certificate replay",
        outcome(
            summary.replay_failures.is_empty() && summary.certificates > 0,
            format!("{} certificates, {} failures", summary.certificates, summary.replay_failures.len()),
        ),
    ));
    let fired = suite.reports.iter().flat_map(|(_, r)| r.equations()).filter(|e| e.lemma.is_some()).count();
    results.push((
        5,
        "pre-checks agree with the direct construction",
        outcome(
            summary.lemma_disagreements.is_empty() && fired > 0,
            format!("{fired} pre-check verdicts, {} disagreements", summary.lemma_disagreements.len()),
        ),
    ));
    let satisfying = suite.reports.iter().filter(|(_, r)| r.reflection.satisfied).count();
    results.push((
        6,
        "uniqueness pairs for reflection-satisfying connectives",
        outcome(
            summary.uniqueness_failures.is_empty() && satisfying > 0,
            format!("{satisfying} connectives, {} failures", summary.uniqueness_failures.len()),
        ),
    ));
    let determinism = match (fuzz_json(), fuzz_json()) {
        (Ok(a), Ok(b)) => outcome(a == b, format!("{} bytes, identical: {}", a.len(), a == b)),
        (Err(e), _) | (_, Err(e)) => outcome(false, e),
    };
    results.push((7, "fuzz JSON is byte-identical across runs", determinism));

    let mut all = true;
    for (n, name, o) in &results {
        all &= o.passed;
        println!("criterion {n} {}: {name} ({})", if o.passed { "PASS" } else { "FAIL" }, o.detail);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
