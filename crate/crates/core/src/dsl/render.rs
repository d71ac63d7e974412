use std::fmt::Write as _;

use serde::Serialize;

use crate::calculus::{ConnectiveSpec, Formula, Item, RuleScheme, Sequent};

/// Output format shared by specs and reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Sequent in rule-file syntax: the principal formula prints as `*`.
fn sequent_source(seq: &Sequent, connective: &str) -> String {
    let side = |items: &[Item]| {
        if items.is_empty() {
            return ".".to_string();
        }
        items
            .iter()
            .map(|i| match i {
                Item::Formula(f) if f.is_compound_of(connective) => "*".to_string(),
                Item::Formula(Formula::Meta(m)) => m.name.clone(),
                other => other.to_string(),
            })
            .collect::<Vec<_>>()
            .join(", ")
    };
    format!("{} |- {}", side(seq.antecedent()), side(seq.succedent()))
}

pub fn rule_source(rule: &RuleScheme, connective: &str) -> String {
    let prem: Vec<String> = rule.premises.iter().map(|p| sequent_source(p, connective)).collect();
    format!(
        "{} \"{}\": [{}] => {};",
        rule.side,
        rule.name,
        prem.join("; "),
        sequent_source(&rule.conclusion, connective)
    )
}

/// Rule-file text for one connective; parses back to an equal spec.
pub fn spec_source(spec: &ConnectiveSpec) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "connective {}({}) {{", spec.name, spec.args.join(", "));
    for r in &spec.rules {
        let _ = writeln!(s, "  {}", rule_source(r, &spec.name));
    }
    s.push_str("}\n");
    s
}

#[derive(Serialize)]
pub struct RuleJson {
    pub name: String,
    pub side: &'static str,
    pub premises: Vec<String>,
    pub conclusion: String,
}

impl From<&RuleScheme> for RuleJson {
    fn from(r: &RuleScheme) -> Self {
        RuleJson {
            name: r.name.clone(),
            side: r.side.as_str(),
            premises: r.premises.iter().map(|p| p.to_string()).collect(),
            conclusion: r.conclusion.to_string(),
        }
    }
}

#[derive(Serialize)]
struct SpecJson {
    connective: String,
    arity: usize,
    arguments: Vec<String>,
    rules: Vec<RuleJson>,
}

pub fn render_spec(spec: &ConnectiveSpec, format: Format) -> String {
    match format {
        Format::Text => spec_source(spec),
        Format::Json => {
            let j = SpecJson {
                connective: spec.name.clone(),
                arity: spec.arity(),
                arguments: spec.args.clone(),
                rules: spec.rules.iter().map(RuleJson::from).collect(),
            };
            let mut s = serde_json::to_string_pretty(&j).expect("spec json");
            s.push('\n');
            s
        }
    }
}
