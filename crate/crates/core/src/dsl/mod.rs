//! Text format for connective definitions.
//!
//! ```text
//! connective With(A, B) {
//!   right "with-R": [G |- A; G |- B] => G |- *;
//!   left "with-L1": [A |- D] => * |- D;
//!   left "with-L2": [B |- D] => * |- D;
//! }
//! ```
//!
//! Header identifiers are the arguments, any other identifier in a sequent is
//! a context variable, `*` is the principal formula, `.` an empty side, `;`
//! separates premises and `#` starts a comment.

mod corpus;
mod parse;
mod render;

pub use corpus::{builtin_corpus, CorpusEntry, ExpectedVerdicts, CORPUS_SOURCE};
pub use parse::{parse_spec, ParseError, SourceSpan, MAX_ARITY};
pub use render::{render_spec, rule_source, spec_source, Format, RuleJson};
