use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use super::formula::Formula;
use super::matching::apply_rule;
use super::rule::{ConnectiveSpec, RuleScheme};
use super::sequent::{cut, substitute, Sequent, Substitution};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Axiom,
    /// An assumed sequent: a premise of a rule being derived or reduced.
    Hypothesis,
    Rule { rule: String, substitution: Substitution, premises: Vec<Derivation> },
    Cut { formula: Formula, left: Box<Derivation>, right: Box<Derivation> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub conclusion: Sequent,
    pub step: Step,
}

impl Derivation {
    pub fn axiom(conclusion: Sequent) -> Self {
        Self { conclusion, step: Step::Axiom }
    }

    pub fn hypothesis(conclusion: Sequent) -> Self {
        Self { conclusion, step: Step::Hypothesis }
    }

    pub fn rule(conclusion: Sequent, rule: &str, substitution: Substitution, premises: Vec<Derivation>) -> Self {
        Self { conclusion, step: Step::Rule { rule: rule.to_string(), substitution, premises } }
    }

    /// Builds a cut node, computing its conclusion.
    pub fn cut(formula: Formula, left: Derivation, right: Derivation) -> Result<Self, super::CalculusError> {
        let conclusion = cut(&left.conclusion, &right.conclusion, &formula)?;
        Ok(Self { conclusion, step: Step::Cut { formula, left: Box::new(left), right: Box::new(right) } })
    }

    pub fn children(&self) -> Vec<&Derivation> {
        match &self.step {
            Step::Axiom | Step::Hypothesis => Vec::new(),
            Step::Rule { premises, .. } => premises.iter().collect(),
            Step::Cut { left, right, .. } => vec![left, right],
        }
    }

    /// Names of all rules applied anywhere in the tree.
    pub fn rules_used(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.walk(&mut |d| {
            if let Step::Rule { rule, .. } = &d.step {
                out.push(rule.as_str());
            }
        });
        out
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.walk(&mut |_| n += 1);
        n
    }

    pub fn walk<'a>(&'a self, f: &mut dyn FnMut(&'a Derivation)) {
        f(self);
        for c in self.children() {
            c.walk(f);
        }
    }

    pub fn label(&self) -> String {
        match &self.step {
            Step::Axiom => "axiom".into(),
            Step::Hypothesis => "hypothesis".into(),
            Step::Rule { rule, .. } => rule.clone(),
            Step::Cut { formula, .. } => format!("cut on {formula}"),
        }
    }

    /// Indented tree, conclusion first, one node per line.
    pub fn render_tree(&self) -> String {
        let mut s = String::new();
        self.render_into(&mut s, 0);
        s
    }

    fn render_into(&self, out: &mut String, depth: usize) {
        let _ = writeln!(out, "{}{}   [{}]", "  ".repeat(depth), self.conclusion, self.label());
        for c in self.children() {
            c.render_into(out, depth + 1);
        }
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_tree())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReplayFailure {
    /// Child indices from the root to the failing node.
    pub path: Vec<usize>,
    pub reason: String,
}

impl fmt::Display for ReplayFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at {:?}: {}", self.path, self.reason)
    }
}

/// Certificate checker: which rules may appear and which hypotheses may be
/// assumed.
#[derive(Clone, Debug, Default)]
pub struct Replayer {
    rules: BTreeMap<String, RuleScheme>,
    hypotheses: Vec<Sequent>,
}

impl Replayer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn for_spec(spec: &ConnectiveSpec) -> Self {
        Self::new().with_rules(spec.rules.iter().cloned())
    }

    pub fn with_rules(mut self, rules: impl IntoIterator<Item = RuleScheme>) -> Self {
        for r in rules {
            self.rules.insert(r.name.clone(), r);
        }
        self
    }

    pub fn with_hypotheses(mut self, hyps: impl IntoIterator<Item = Sequent>) -> Self {
        self.hypotheses.extend(hyps);
        self
    }

    pub fn check(&self, d: &Derivation) -> Result<(), ReplayFailure> {
        let mut path = Vec::new();
        self.check_at(d, &mut path)
    }

    fn check_at(&self, d: &Derivation, path: &mut Vec<usize>) -> Result<(), ReplayFailure> {
        let fail = |path: &Vec<usize>, reason: String| Err(ReplayFailure { path: path.clone(), reason });
        match &d.step {
            Step::Axiom => {
                if !d.conclusion.is_axiom() {
                    return fail(path, format!("leaf {} is not an axiom", d.conclusion));
                }
            }
            Step::Hypothesis => {
                if !self.hypotheses.contains(&d.conclusion) {
                    return fail(path, format!("{} is not an admitted hypothesis", d.conclusion));
                }
            }
            Step::Rule { rule, substitution, premises } => {
                let Some(r) = self.rules.get(rule) else {
                    return fail(path, format!("unknown rule {rule}"));
                };
                let expected = match apply_rule(r, substitution) {
                    Ok(p) => p,
                    Err(e) => return fail(path, e.to_string()),
                };
                if substitute(&r.conclusion, substitution) != d.conclusion {
                    return fail(path, format!("{rule} does not conclude {}", d.conclusion));
                }
                let got: Vec<&Sequent> = premises.iter().map(|p| &p.conclusion).collect();
                if got.len() != expected.len() || got.iter().zip(&expected).any(|(a, b)| *a != b) {
                    return fail(path, format!("premises of {rule} do not match its instance"));
                }
            }
            Step::Cut { formula, left, right } => match cut(&left.conclusion, &right.conclusion, formula) {
                Ok(c) if c == d.conclusion => {}
                Ok(c) => return fail(path, format!("cut yields {c}, node claims {}", d.conclusion)),
                Err(e) => return fail(path, e.to_string()),
            },
        }
        for (i, c) in d.children().into_iter().enumerate() {
            path.push(i);
            self.check_at(c, path)?;
            path.pop();
        }
        Ok(())
    }
}

/// Replays `d` against the rules of `spec` plus axioms and cut.
pub fn replay(d: &Derivation, spec: &ConnectiveSpec) -> Result<(), ReplayFailure> {
    Replayer::for_spec(spec).check(d)
}
