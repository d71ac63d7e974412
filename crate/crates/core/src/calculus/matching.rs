use std::collections::{BTreeMap, BTreeSet};

use super::formula::Formula;
use super::rule::RuleScheme;
use super::sequent::{remove_all, substitute, ContextVar, Item, Sequent, Side, Substitution};
use super::CalculusError;

/// All substitutions σ with `σ(rule.conclusion) = goal` as multisets,
/// in ascending order. Context variables may absorb the empty multiset.
pub fn match_conclusion(rule: &RuleScheme, goal: &Sequent) -> Vec<Substitution> {
    match_sequent(&rule.conclusion, goal).into_iter().collect()
}

pub fn match_sequent(pattern: &Sequent, goal: &Sequent) -> BTreeSet<Substitution> {
    let mut out = BTreeSet::new();
    let start = Substitution::new();
    for after_left in match_side(pattern.antecedent(), goal.antecedent(), start) {
        for full in match_side(pattern.succedent(), goal.succedent(), after_left) {
            out.insert(full);
        }
    }
    out
}

fn match_side(pattern: &[Item], target: &[Item], sub: Substitution) -> Vec<Substitution> {
    let formulas: Vec<&Formula> = pattern.iter().filter_map(Item::as_formula).collect();
    let contexts: Vec<&ContextVar> = pattern.iter().filter_map(Item::as_context).collect();
    let mut results = Vec::new();
    let mut used = vec![false; target.len()];
    assign_formulas(&formulas, target, &mut used, sub.metas.clone(), &mut |metas, used| {
        let rest: Vec<Item> = target
            .iter()
            .zip(used)
            .filter(|(_, u)| !**u)
            .map(|(t, _)| t.clone())
            .collect();
        let mut base = sub.clone();
        base.metas = metas.clone();
        distribute_contexts(&contexts, rest, base, &mut results);
    });
    results
}

/// Continuation receiving meta bindings and the used-target mask.
type Assigned<'a> = dyn FnMut(&BTreeMap<usize, Formula>, &[bool]) + 'a;

fn assign_formulas(
    formulas: &[&Formula],
    target: &[Item],
    used: &mut Vec<bool>,
    metas: BTreeMap<usize, Formula>,
    k: &mut Assigned<'_>,
) {
    let Some((first, rest)) = formulas.split_first() else {
        k(&metas, used);
        return;
    };
    let mut tried: Vec<&Item> = Vec::new();
    for i in 0..target.len() {
        if used[i] || tried.contains(&&target[i]) {
            continue;
        }
        tried.push(&target[i]);
        let Item::Formula(t) = &target[i] else { continue };
        let mut m = metas.clone();
        if first.match_into(t, &mut m) {
            used[i] = true;
            assign_formulas(rest, target, used, m, k);
            used[i] = false;
        }
    }
}

fn distribute_contexts(contexts: &[&ContextVar], rest: Vec<Item>, sub: Substitution, out: &mut Vec<Substitution>) {
    // contexts already bound from the other side consume their image first
    let mut rest = rest;
    let mut free: Vec<&ContextVar> = Vec::new();
    for c in contexts {
        match sub.contexts.get(*c) {
            Some(image) => match remove_all(&rest, image) {
                Some(r) => rest = r,
                None => return,
            },
            None => free.push(c),
        }
    }
    if free.is_empty() {
        if rest.is_empty() {
            out.push(sub);
        }
        return;
    }
    let mut seen = BTreeSet::new();
    let mut buckets: Vec<Vec<Item>> = vec![Vec::new(); free.len()];
    spread(&rest, 0, &mut buckets, &mut |b| {
        let mut s = sub.clone();
        for (c, items) in free.iter().zip(b) {
            let mut items = items.clone();
            items.sort();
            s.contexts.insert((*c).clone(), items);
        }
        seen.insert(s);
    });
    out.extend(seen);
}

fn spread(rest: &[Item], i: usize, buckets: &mut Vec<Vec<Item>>, f: &mut dyn FnMut(&[Vec<Item>])) {
    if i == rest.len() {
        f(buckets);
        return;
    }
    for b in 0..buckets.len() {
        buckets[b].push(rest[i].clone());
        spread(rest, i + 1, buckets, f);
        buckets[b].pop();
    }
}

/// Instantiated premises of `rule` under `sub`, in rule order.
pub fn apply_rule(rule: &RuleScheme, sub: &Substitution) -> Result<Vec<Sequent>, CalculusError> {
    for m in rule.metas() {
        if !sub.metas.contains_key(&m.index) {
            return Err(CalculusError::IncompleteSubstitution { rule: rule.name.clone(), symbol: m.name.clone() });
        }
    }
    for c in rule.all_contexts() {
        if !sub.contexts.contains_key(&c) {
            return Err(CalculusError::IncompleteSubstitution { rule: rule.name.clone(), symbol: c.0.clone() });
        }
    }
    Ok(rule.premises.iter().map(|p| substitute(p, sub)).collect())
}

/// Extends a conclusion match so that premise-only contexts are bound to the
/// empty multiset, making the substitution complete for backward search.
pub fn close_unbound(rule: &RuleScheme, mut sub: Substitution) -> Substitution {
    for c in rule.premise_contexts() {
        sub.contexts.entry(c).or_default();
    }
    sub
}

/// Side of `seq` holding a formula of `connective`, if exactly one does.
pub fn principal_side(seq: &Sequent, connective: &str) -> Option<Side> {
    let on = |s: Side| seq.formulas(s).filter(|f| f.is_compound_of(connective)).count();
    match (on(Side::Left), on(Side::Right)) {
        (1, 0) => Some(Side::Left),
        (0, 1) => Some(Side::Right),
        _ => None,
    }
}
