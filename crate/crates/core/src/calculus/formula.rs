use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};

/// Schematic argument `A_i` of a connective.
///
/// Identity is the 1-based `index`; `name` is display only, so two specs that
/// spell their arguments differently still compare equal position by position.
#[derive(Clone, Debug)]
pub struct MetaVar {
    pub index: usize,
    pub name: String,
}

impl MetaVar {
    pub fn new(index: usize, name: impl Into<String>) -> Self {
        Self { index, name: name.into() }
    }
}

impl PartialEq for MetaVar {
    fn eq(&self, other: &Self) -> bool {
        self.index == other.index
    }
}

impl Eq for MetaVar {}

impl PartialOrd for MetaVar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MetaVar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.index.cmp(&other.index)
    }
}

impl Hash for MetaVar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.index.hash(state);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(String),
    Meta(MetaVar),
    Compound { connective: String, args: Vec<Formula> },
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    pub fn meta(index: usize, name: impl Into<String>) -> Self {
        Formula::Meta(MetaVar::new(index, name))
    }

    pub fn compound(connective: impl Into<String>, args: Vec<Formula>) -> Self {
        Formula::Compound { connective: connective.into(), args }
    }

    pub fn is_compound_of(&self, name: &str) -> bool {
        matches!(self, Formula::Compound { connective, .. } if connective == name)
    }

    pub fn substitute(&self, metas: &BTreeMap<usize, Formula>) -> Formula {
        match self {
            Formula::Atom(_) => self.clone(),
            Formula::Meta(m) => metas.get(&m.index).cloned().unwrap_or_else(|| self.clone()),
            Formula::Compound { connective, args } => Formula::Compound {
                connective: connective.clone(),
                args: args.iter().map(|a| a.substitute(metas)).collect(),
            },
        }
    }

    /// One-way matching of `self` (pattern) against a target formula,
    /// extending `metas`. On failure `metas` may hold partial bindings.
    pub fn match_into(&self, target: &Formula, metas: &mut BTreeMap<usize, Formula>) -> bool {
        match (self, target) {
            (Formula::Meta(m), _) => match metas.get(&m.index) {
                Some(bound) => bound == target,
                None => {
                    metas.insert(m.index, target.clone());
                    true
                }
            },
            (Formula::Atom(a), Formula::Atom(b)) => a == b,
            (
                Formula::Compound { connective: c1, args: a1 },
                Formula::Compound { connective: c2, args: a2 },
            ) => {
                c1 == c2
                    && a1.len() == a2.len()
                    && a1.iter().zip(a2).all(|(p, t)| p.match_into(t, metas))
            }
            _ => false,
        }
    }

    pub fn collect_metas(&self, out: &mut Vec<MetaVar>) {
        match self {
            Formula::Atom(_) => {}
            Formula::Meta(m) => out.push(m.clone()),
            Formula::Compound { args, .. } => args.iter().for_each(|a| a.collect_metas(out)),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(a) => f.write_str(a),
            Formula::Meta(m) => f.write_str(&m.name),
            Formula::Compound { connective, args } => {
                write!(f, "{connective}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Fresh atom names used when instantiating `A_1..A_n`.
pub fn atom_names(n: usize) -> Vec<String> {
    const SHORT: [&str; 6] = ["p", "q", "r", "s", "t", "u"];
    if n <= SHORT.len() {
        SHORT[..n].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=n).map(|i| format!("p{i}")).collect()
    }
}
