//! Batch verification over generated connectives and their mutants.

use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::calculus::ConnectiveSpec;
use crate::exec::ordered_map;
use crate::generator::{mutate, random_connective, spec_seeds, GenBounds, MutationError, MutationKind};
use crate::report::{analyze, summarize, AnalysisReport, AnalyzeOptions, EquivalenceSummary, Verdicts};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuzzConfig {
    pub count: usize,
    pub seed: u64,
    pub bounds: GenBounds,
    pub mutations: Vec<MutationKind>,
}

#[derive(Clone, Debug)]
pub struct FuzzCase {
    pub id: String,
    pub seed: u64,
    pub mutation: Option<MutationKind>,
    pub spec: Result<ConnectiveSpec, MutationError>,
}

#[derive(Clone, Debug)]
pub struct FuzzRun {
    pub config: FuzzConfig,
    pub cases: Vec<FuzzCase>,
    /// One per case whose spec exists, in case order.
    pub reports: Vec<Option<AnalysisReport>>,
    pub summary: EquivalenceSummary,
}

/// Each generated connective is followed by its mutants, in the order of
/// `config.mutations`. Mutation `k` of spec seed `s` uses seed `s + k + 1`.
pub fn fuzz_cases(config: &FuzzConfig) -> Vec<FuzzCase> {
    let mut cases = Vec::new();
    for seed in spec_seeds(config.seed, config.count) {
        let base = random_connective(seed, config.bounds);
        for (k, &kind) in config.mutations.iter().enumerate() {
            let spec = mutate(&base, kind, seed.wrapping_add(k as u64 + 1));
            let id = format!("{}_{}", base.name, kind.as_str());
            cases.push((k, FuzzCase { id, seed, mutation: Some(kind), spec }));
        }
        cases.push((usize::MAX, FuzzCase { id: base.name.clone(), seed, mutation: None, spec: Ok(base) }));
        // generated spec first, then mutants
        let n = config.mutations.len() + 1;
        let start = cases.len() - n;
        cases[start..].sort_by_key(|(k, _)| k.wrapping_add(1));
    }
    cases.into_iter().map(|(_, c)| c).collect()
}

pub fn run_fuzz(config: &FuzzConfig) -> FuzzRun {
    let cases = fuzz_cases(config);
    let reports: Vec<Option<AnalysisReport>> = ordered_map(&cases, |c| {
        c.spec.as_ref().ok().map(|s| analyze(s, AnalyzeOptions::default()).expect("two-phase search needs no depth"))
    });
    let summary = summarize(cases.iter().zip(&reports).filter_map(|(c, r)| r.as_ref().map(|r| (c.id.as_str(), r))));
    FuzzRun { config: config.clone(), cases, reports, summary }
}

impl FuzzRun {
    fn rows(&self) -> Vec<(String, usize, usize, usize)> {
        let mut kinds: Vec<Option<MutationKind>> = vec![None];
        kinds.extend(self.config.mutations.iter().copied().map(Some));
        kinds
            .into_iter()
            .map(|kind| {
                let mut applied = 0;
                let mut skipped = 0;
                let mut consistent = 0;
                for (c, r) in self.cases.iter().zip(&self.reports) {
                    if c.mutation != kind {
                        continue;
                    }
                    match r {
                        Some(r) => {
                            applied += 1;
                            consistent += usize::from(r.verdicts().consistent());
                        }
                        None => skipped += 1,
                    }
                }
                (kind.map_or("generated".to_string(), |k| k.as_str().to_string()), applied, skipped, consistent)
            })
            .collect()
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let b = self.config.bounds;
        let _ = writeln!(
            s,
            "fuzz: {} connectives from seed {} (max arity {}, max branches {}, max group {})",
            self.config.count, self.config.seed, b.max_arity, b.max_branches, b.max_group
        );
        let _ = writeln!(s, "{:<16} {:>8} {:>13} {:>11}", "kind", "applied", "inapplicable", "consistent");
        for (kind, applied, skipped, consistent) in self.rows() {
            let _ = writeln!(s, "{kind:<16} {applied:>8} {skipped:>13} {consistent:>11}");
        }
        s.push_str(&self.summary.render_text());
        s
    }

    pub fn to_json(&self) -> Value {
        let b = self.config.bounds;
        let cases: Vec<Value> = self
            .cases
            .iter()
            .zip(&self.reports)
            .map(|(c, r)| {
                let verdicts: Option<Verdicts> = r.as_ref().map(|r| r.verdicts());
                json!({
                    "id": c.id,
                    "seed": c.seed,
                    "mutation": c.mutation.map(|k| k.as_str()),
                    "applied": c.spec.is_ok(),
                    "inapplicable": c.spec.as_ref().err().map(|e| e.to_string()),
                    "verdicts": verdicts,
                    "consistent": verdicts.map(|v| v.consistent()),
                })
            })
            .collect();
        json!({
            "count": self.config.count,
            "seed": self.config.seed,
            "bounds": {"max_arity": b.max_arity, "max_branches": b.max_branches, "max_group": b.max_group},
            "mutations": self.config.mutations.iter().map(|k| k.as_str()).collect::<Vec<_>>(),
            "cases": cases,
            "summary": self.summary.to_json(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_case_precedes_its_mutants() {
        let cfg = FuzzConfig { count: 2, seed: 1, bounds: GenBounds::default(), mutations: MutationKind::ALL.to_vec() };
        let cases = fuzz_cases(&cfg);
        assert_eq!(cases.len(), 10);
        assert!(cases[0].mutation.is_none());
        assert_eq!(cases[1].mutation, Some(MutationKind::ContextChange));
        assert!(cases[5].mutation.is_none());
    }

    #[test]
    fn small_run_is_clean() {
        let cfg = FuzzConfig { count: 20, seed: 3, bounds: GenBounds::default(), mutations: MutationKind::ALL.to_vec() };
        let run = run_fuzz(&cfg);
        assert!(run.summary.is_clean(), "{}", run.summary.render_text());
    }
}
