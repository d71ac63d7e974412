use crate::calculus::{ConnectiveSpec, Provenance};
use crate::classify::Scheme;

use super::parse_spec;

/// Source of the built-in corpus, also shipped as `data/corpus.rules`.
pub const CORPUS_SOURCE: &str = include_str!("../../data/corpus.rules");

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExpectedVerdicts {
    pub doi: bool,
    pub main_cut: bool,
    /// Solvability of the equation whose formation rules are the left rules.
    pub left_solvable: bool,
    pub right_solvable: bool,
    pub reflection: bool,
    pub synthetic: bool,
    pub scheme: Option<Scheme>,
}

impl ExpectedVerdicts {
    /// `(doi ∧ main_cut) ⟺ reflection ⟺ synthetic`, with a scheme exactly
    /// when synthetic.
    pub fn is_consistent(&self) -> bool {
        (self.doi && self.main_cut) == self.reflection
            && self.reflection == self.synthetic
            && self.scheme.is_some() == self.synthetic
    }
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub spec: ConnectiveSpec,
    pub expected: ExpectedVerdicts,
}

const fn v(
    doi: bool,
    main_cut: bool,
    left_solvable: bool,
    right_solvable: bool,
    reflection: bool,
    synthetic: bool,
    scheme: Option<Scheme>,
) -> ExpectedVerdicts {
    ExpectedVerdicts { doi, main_cut, left_solvable, right_solvable, reflection, synthetic, scheme }
}

const EXPECTED: &[(&str, ExpectedVerdicts)] = &[
    ("Tensor", v(true, true, true, false, true, true, Some(Scheme::II))),
    ("With", v(true, true, false, true, true, true, Some(Scheme::I))),
    ("Plus", v(true, true, true, false, true, true, Some(Scheme::II))),
    ("Par", v(true, true, false, true, true, true, Some(Scheme::I))),
    ("Fig3", v(true, true, true, false, true, true, Some(Scheme::II))),
    // both equations solve, but neither solution is tonk's other rule
    ("Tonk", v(false, false, true, true, false, false, None)),
    // the extra context may be emptied in the identity search
    ("ContextChange", v(true, false, false, false, false, false, None)),
    ("ContextShrink", v(false, false, false, false, false, false, None)),
    ("MultiFormation", v(true, false, false, false, false, false, None)),
    ("DroppedWith", v(false, true, true, true, false, false, None)),
];

/// The built-in connectives with their expected verdicts.
pub fn builtin_corpus() -> Vec<CorpusEntry> {
    let specs = parse_spec(CORPUS_SOURCE).expect("built-in corpus parses");
    specs
        .into_iter()
        .map(|mut spec| {
            spec.provenance = Provenance::Builtin;
            let expected = EXPECTED
                .iter()
                .find(|(n, _)| *n == spec.name)
                .map(|(_, e)| *e)
                .unwrap_or_else(|| panic!("no expectation for corpus entry {}", spec.name));
            CorpusEntry { spec, expected }
        })
        .collect()
}
