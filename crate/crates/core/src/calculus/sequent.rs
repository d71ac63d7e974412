use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::formula::Formula;
use super::CalculusError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Context variable such as Γ or Δ, standing for an arbitrary multiset.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ContextVar(pub String);

impl ContextVar {
    pub fn new(name: impl Into<String>) -> Self {
        ContextVar(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ContextVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Item {
    Formula(Formula),
    Context(ContextVar),
}

impl Item {
    pub fn ctx(name: impl Into<String>) -> Self {
        Item::Context(ContextVar::new(name))
    }

    pub fn as_formula(&self) -> Option<&Formula> {
        match self {
            Item::Formula(f) => Some(f),
            Item::Context(_) => None,
        }
    }

    pub fn as_context(&self) -> Option<&ContextVar> {
        match self {
            Item::Context(c) => Some(c),
            Item::Formula(_) => None,
        }
    }
}

impl From<Formula> for Item {
    fn from(f: Formula) -> Self {
        Item::Formula(f)
    }
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Item::Formula(x) => write!(f, "{x}"),
            Item::Context(c) => write!(f, "{c}"),
        }
    }
}

/// A sequent whose sides are multisets. Both sides are kept sorted, so the
/// derived `Eq` is multiset equality.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sequent {
    antecedent: Vec<Item>,
    succedent: Vec<Item>,
}

impl Sequent {
    pub fn new(mut antecedent: Vec<Item>, mut succedent: Vec<Item>) -> Self {
        antecedent.sort();
        succedent.sort();
        Self { antecedent, succedent }
    }

    pub fn antecedent(&self) -> &[Item] {
        &self.antecedent
    }

    pub fn succedent(&self) -> &[Item] {
        &self.succedent
    }

    pub fn side(&self, side: Side) -> &[Item] {
        match side {
            Side::Left => &self.antecedent,
            Side::Right => &self.succedent,
        }
    }

    pub fn contexts(&self, side: Side) -> impl Iterator<Item = &ContextVar> {
        self.side(side).iter().filter_map(Item::as_context)
    }

    pub fn formulas(&self, side: Side) -> impl Iterator<Item = &Formula> {
        self.side(side).iter().filter_map(Item::as_formula)
    }

    pub fn all_contexts(&self) -> BTreeSet<ContextVar> {
        self.contexts(Side::Left).chain(self.contexts(Side::Right)).cloned().collect()
    }

    pub fn count(&self, side: Side, item: &Item) -> usize {
        self.side(side).iter().filter(|i| *i == item).count()
    }

    /// Reflexivity axiom `F ⊢ F`.
    pub fn is_axiom(&self) -> bool {
        matches!(
            (self.antecedent.as_slice(), self.succedent.as_slice()),
            ([Item::Formula(a)], [Item::Formula(b)]) if a == b
        )
    }

    pub fn map_items(&self, mut f: impl FnMut(&Item) -> Vec<Item>) -> Sequent {
        let ant = self.antecedent.iter().flat_map(&mut f).collect();
        let suc = self.succedent.iter().flat_map(&mut f).collect();
        Sequent::new(ant, suc)
    }

    /// Rewrites every formula item with `f`, leaving context variables alone.
    pub fn map_formulas(&self, f: impl Fn(&Formula) -> Formula) -> Sequent {
        self.map_items(|item| match item {
            Item::Formula(x) => vec![Item::Formula(f(x))],
            other => vec![other.clone()],
        })
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn side(f: &mut fmt::Formatter<'_>, items: &[Item]) -> fmt::Result {
            if items.is_empty() {
                return f.write_str(".");
            }
            for (i, it) in items.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{it}")?;
            }
            Ok(())
        }
        side(f, &self.antecedent)?;
        f.write_str(" |- ")?;
        side(f, &self.succedent)
    }
}

/// Removes one occurrence of `item` from a sorted multiset.
pub(crate) fn remove_one(items: &[Item], item: &Item) -> Option<Vec<Item>> {
    let pos = items.iter().position(|i| i == item)?;
    let mut out = items.to_vec();
    out.remove(pos);
    Some(out)
}

/// Removes the sub-multiset `sub` from `items`.
pub(crate) fn remove_all(items: &[Item], sub: &[Item]) -> Option<Vec<Item>> {
    let mut out = items.to_vec();
    for s in sub {
        let pos = out.iter().position(|i| i == s)?;
        out.remove(pos);
    }
    Some(out)
}

/// Binding of meta-variables to formulas and context variables to multisets.
///
/// Context images are multisets of items rather than formulas only, so a
/// rule can be instantiated on schematic object sequents (Γ ↦ {Γ'}).
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Substitution {
    pub metas: BTreeMap<usize, Formula>,
    pub contexts: BTreeMap<ContextVar, Vec<Item>>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind_meta(mut self, index: usize, f: Formula) -> Self {
        self.metas.insert(index, f);
        self
    }

    pub fn bind_context(mut self, name: &str, mut items: Vec<Item>) -> Self {
        items.sort();
        self.contexts.insert(ContextVar::new(name), items);
        self
    }

    pub fn is_empty(&self) -> bool {
        self.metas.is_empty() && self.contexts.is_empty()
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        let mut first = true;
        for (i, v) in &self.metas {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            write!(f, "A{i} := {v}")?;
        }
        for (c, v) in &self.contexts {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            write!(f, "{c} := [{}]", parts.join(", "))?;
        }
        f.write_str("}")
    }
}

/// Applies `sub` to every item of `seq`. Total: unmapped symbols are kept.
pub fn substitute(seq: &Sequent, sub: &Substitution) -> Sequent {
    seq.map_items(|item| match item {
        Item::Formula(f) => vec![Item::Formula(f.substitute(&sub.metas))],
        Item::Context(c) => match sub.contexts.get(c) {
            Some(image) => image.clone(),
            None => vec![item.clone()],
        },
    })
}

/// Cut on `f`: `Γ ⊢ Δ, f` and `f, Γ' ⊢ Δ'` give `Γ, Γ' ⊢ Δ, Δ'`.
pub fn cut(s1: &Sequent, s2: &Sequent, f: &Formula) -> Result<Sequent, CalculusError> {
    let item = Item::Formula(f.clone());
    let absent = || CalculusError::CutFormulaAbsent {
        formula: f.to_string(),
        left: s1.to_string(),
        right: s2.to_string(),
    };
    let suc1 = remove_one(&s1.succedent, &item).ok_or_else(absent)?;
    let ant2 = remove_one(&s2.antecedent, &item).ok_or_else(absent)?;
    let mut ant = s1.antecedent.clone();
    ant.extend(ant2);
    let mut suc = suc1;
    suc.extend(s2.succedent.iter().cloned());
    Ok(Sequent::new(ant, suc))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(i: usize, n: &str) -> Item {
        Item::Formula(Formula::meta(i, n))
    }

    fn tensor_ab() -> Formula {
        Formula::compound("Tensor", vec![Formula::meta(1, "A"), Formula::meta(2, "B")])
    }

    #[test]
    fn substitute_context_into_identity() {
        let seq = Sequent::new(vec![m(1, "A"), m(2, "B")], vec![Item::ctx("D")]);
        let sub = Substitution::new().bind_context("D", vec![tensor_ab().into()]);
        let out = substitute(&seq, &sub);
        assert_eq!(out.to_string(), "A, B |- Tensor(A, B)");
    }

    #[test]
    fn substitute_identity_is_noop() {
        let seq = Sequent::new(vec![Item::ctx("G")], vec![m(1, "A")]);
        assert_eq!(substitute(&seq, &Substitution::new()), seq);
    }

    #[test]
    fn substitute_with_trivialization() {
        let with = Formula::compound("With", vec![Formula::meta(1, "A"), Formula::meta(2, "B")]);
        let seq = Sequent::new(vec![Item::ctx("G")], vec![with.clone().into()]);
        let sub = Substitution::new().bind_context("G", vec![with.into()]);
        let out = substitute(&seq, &sub);
        assert!(out.is_axiom());
        assert_eq!(out.to_string(), "With(A, B) |- With(A, B)");
    }

    #[test]
    fn axiom_recognition() {
        let p = Item::Formula(Formula::atom("p"));
        let q = Item::Formula(Formula::atom("q"));
        assert!(Sequent::new(vec![p.clone()], vec![p.clone()]).is_axiom());
        assert!(!Sequent::new(vec![p.clone(), q], vec![p.clone()]).is_axiom());
        assert!(!Sequent::new(vec![], vec![p]).is_axiom());
        let pq = Formula::compound("Tensor", vec![Formula::atom("p"), Formula::atom("q")]);
        assert!(Sequent::new(vec![pq.clone().into()], vec![pq.into()]).is_axiom());
    }

    #[test]
    fn tensor_double_cut() {
        let a = Formula::meta(1, "A");
        let b = Formula::meta(2, "B");
        let ident = Sequent::new(vec![a.clone().into(), b.clone().into()], vec![tensor_ab().into()]);
        let g = Sequent::new(vec![Item::ctx("G")], vec![a.clone().into()]);
        let g2 = Sequent::new(vec![Item::ctx("G'")], vec![b.clone().into()]);
        let once = cut(&g, &ident, &a).unwrap();
        assert_eq!(once.to_string(), "B, G |- Tensor(A, B)");
        let twice = cut(&g2, &once, &b).unwrap();
        assert_eq!(twice.to_string(), "G, G' |- Tensor(A, B)");
    }

    #[test]
    fn identity_cut() {
        let p = Formula::atom("p");
        let ax = Sequent::new(vec![p.clone().into()], vec![p.clone().into()]);
        assert_eq!(cut(&ax, &ax, &p).unwrap(), ax);
    }

    #[test]
    fn cut_requires_formula_on_both_sides() {
        let p = Formula::atom("p");
        let q = Formula::atom("q");
        let s1 = Sequent::new(vec![], vec![q.clone().into()]);
        let s2 = Sequent::new(vec![p.clone().into()], vec![]);
        assert!(matches!(cut(&s1, &s2, &p), Err(CalculusError::CutFormulaAbsent { .. })));
    }
}
