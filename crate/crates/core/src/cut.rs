//! Main step of cut elimination.
//!
//! For a right rule `r` and a left rule `l`, the cut on `C(p̄)` between their
//! conclusions is reducible when some cut tree on argument atoms, whose leaves
//! are distinct premises of `r` and `l`, ends exactly in the cut-free target
//! sequent. Premises may be left unused (an additive branch picks one premise);
//! no weakening is ever inserted.

use std::collections::{BTreeMap, HashSet};

use crate::calculus::{
    cut, ground_principal, substitute, ConnectiveSpec, Derivation, Formula, Item, Replayer, RuleScheme, Sequent, Side,
    Substitution,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionTrace {
    pub right_rule: String,
    pub left_rule: String,
    /// Instantiated premises of the right rule, then of the left rule.
    pub hypotheses: Vec<Sequent>,
    /// Labels (`right.1`, `left.2`, …) of the premises the reduct uses.
    pub premises_used: Vec<String>,
    /// Argument cuts in application order with their results.
    pub cuts: Vec<(Formula, Sequent)>,
    pub final_sequent: Sequent,
    pub derivation: Derivation,
}

impl ReductionTrace {
    pub fn replay(&self) -> Result<(), crate::calculus::ReplayFailure> {
        Replayer::new().with_hypotheses(self.hypotheses.iter().cloned()).check(&self.derivation)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairVerdict {
    pub right_rule: String,
    pub left_rule: String,
    /// Conclusion of the principal cut.
    pub target: Option<Sequent>,
    pub trace: Option<ReductionTrace>,
    pub failure: Option<String>,
}

impl PairVerdict {
    pub fn reduces(&self) -> bool {
        self.trace.is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutResult {
    pub holds: bool,
    pub pairs: Vec<PairVerdict>,
}

fn instantiate(rule: &RuleScheme, atoms: &[Formula], tag: &str) -> Substitution {
    let mut sub = Substitution::new();
    for (i, a) in atoms.iter().enumerate() {
        sub.metas.insert(i + 1, a.clone());
    }
    for c in rule.all_contexts() {
        let fresh = Item::ctx(format!("{tag}:{}", c.name()));
        sub.contexts.insert(c, vec![fresh]);
    }
    sub
}

/// Tries to reduce the principal cut between right rule `r` and left rule `l`.
pub fn reduce_principal_cut(spec: &ConnectiveSpec, r: &RuleScheme, l: &RuleScheme) -> PairVerdict {
    let mut verdict = PairVerdict {
        right_rule: r.name.clone(),
        left_rule: l.name.clone(),
        target: None,
        trace: None,
        failure: None,
    };
    let (principal, atoms) = ground_principal(spec);
    let rs = instantiate(r, &atoms, "r");
    let ls = instantiate(l, &atoms, "l");
    let r_concl = substitute(&r.conclusion, &rs);
    let l_concl = substitute(&l.conclusion, &ls);
    let target = match cut(&r_concl, &l_concl, &principal) {
        Ok(t) => t,
        Err(_) => {
            verdict.failure = Some("principal formula is not on the right of the right rule and the left of the left rule".into());
            return verdict;
        }
    };
    verdict.target = Some(target.clone());
    let mut hyps: Vec<(String, Sequent)> = Vec::new();
    for (i, p) in r.premises.iter().enumerate() {
        hyps.push((format!("right.{}", i + 1), substitute(p, &rs)));
    }
    for (i, p) in l.premises.iter().enumerate() {
        hyps.push((format!("left.{}", i + 1), substitute(p, &ls)));
    }
    match search_reduct(&hyps, &target, &atoms) {
        Some((used, derivation)) => {
            let mut cuts = Vec::new();
            collect_cuts(&derivation, &mut cuts);
            verdict.trace = Some(ReductionTrace {
                right_rule: r.name.clone(),
                left_rule: l.name.clone(),
                hypotheses: hyps.into_iter().map(|(_, s)| s).collect(),
                premises_used: used,
                cuts,
                final_sequent: derivation.conclusion.clone(),
                derivation,
            });
        }
        None => {
            verdict.failure = Some(format!("no cut sequence on {} reaches {target}", atom_list(&atoms)));
        }
    }
    verdict
}

fn atom_list(atoms: &[Formula]) -> String {
    atoms.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(", ")
}

fn collect_cuts(d: &Derivation, out: &mut Vec<(Formula, Sequent)>) {
    if let crate::calculus::Step::Cut { formula, left, right } = &d.step {
        collect_cuts(left, out);
        collect_cuts(right, out);
        out.push((formula.clone(), d.conclusion.clone()));
    }
}

/// Multiset of non-atom items per side; cuts on atoms never change it.
fn residue(seqs: &[&Sequent], atoms: &[Formula]) -> (Vec<Item>, Vec<Item>) {
    let keep = |i: &&Item| !matches!(i, Item::Formula(f) if atoms.contains(f));
    let mut ant: Vec<Item> = seqs.iter().flat_map(|s| s.antecedent().iter().filter(keep).cloned()).collect();
    let mut suc: Vec<Item> = seqs.iter().flat_map(|s| s.succedent().iter().filter(keep).cloned()).collect();
    ant.sort();
    suc.sort();
    (ant, suc)
}

fn search_reduct(hyps: &[(String, Sequent)], target: &Sequent, atoms: &[Formula]) -> Option<(Vec<String>, Derivation)> {
    let n = hyps.len();
    let target_residue = residue(&[target], atoms);
    let mut masks: Vec<u32> = (1..(1u32 << n)).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    for mask in masks {
        let chosen: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let seqs: Vec<&Sequent> = chosen.iter().map(|&i| &hyps[i].1).collect();
        if residue(&seqs, atoms) != target_residue {
            continue;
        }
        let forest: Vec<Derivation> = seqs.iter().map(|s| Derivation::hypothesis((*s).clone())).collect();
        let mut failed = HashSet::new();
        if let Some(d) = merge(forest, target, atoms, &mut failed) {
            return Some((chosen.iter().map(|&i| hyps[i].0.clone()).collect(), d));
        }
    }
    None
}

fn merge(forest: Vec<Derivation>, target: &Sequent, atoms: &[Formula], failed: &mut HashSet<Vec<Sequent>>) -> Option<Derivation> {
    if forest.len() == 1 {
        let d = forest.into_iter().next().unwrap();
        return (d.conclusion == *target).then_some(d);
    }
    let mut key: Vec<Sequent> = forest.iter().map(|d| d.conclusion.clone()).collect();
    key.sort();
    if failed.contains(&key) {
        return None;
    }
    for i in 0..forest.len() {
        for j in 0..forest.len() {
            if i == j {
                continue;
            }
            for a in atoms {
                let item = Item::Formula(a.clone());
                if forest[i].conclusion.count(Side::Right, &item) == 0
                    || forest[j].conclusion.count(Side::Left, &item) == 0
                {
                    continue;
                }
                let Ok(merged) = Derivation::cut(a.clone(), forest[i].clone(), forest[j].clone()) else {
                    continue;
                };
                let mut next: Vec<Derivation> = forest
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != i && *k != j)
                    .map(|(_, d)| d.clone())
                    .collect();
                next.push(merged);
                if let Some(d) = merge(next, target, atoms, failed) {
                    return Some(d);
                }
            }
        }
    }
    failed.insert(key);
    None
}

/// Checks every right × left pair.
pub fn check_main_cut_step(spec: &ConnectiveSpec) -> CutResult {
    let mut pairs = Vec::new();
    for r in spec.right_rules() {
        for l in spec.left_rules() {
            pairs.push(reduce_principal_cut(spec, r, l));
        }
    }
    CutResult { holds: pairs.iter().all(PairVerdict::reduces), pairs }
}

/// Context variables per side of a sequent, for the no-leak property.
pub fn context_counts(seq: &Sequent) -> BTreeMap<(Side, String), usize> {
    let mut out = BTreeMap::new();
    for side in [Side::Left, Side::Right] {
        for c in seq.contexts(side) {
            *out.entry((side, c.name().to_string())).or_insert(0) += 1;
        }
    }
    out
}
