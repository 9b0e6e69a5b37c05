//! Translation of past LTL into deterministic Rabin automata.
//!
//! Formulas are parsed into negation normal form ([`parse`]), advanced letter
//! by letter with the after-function ([`after`]) and assembled into a Rabin
//! automaton by [`translate`]. Lasso words and an exact evaluator
//! ([`lasso`]) provide the reference semantics.

pub mod after;
pub mod automata;
pub mod formula;
pub mod gen;
pub mod lasso;
pub mod parser;
pub mod past;
pub mod prop;
pub mod selftest;
pub mod stability;
pub mod translation;

pub use formula::{Formula, FormulaSet, Node, Op};
pub use lasso::{eval, holds, Alphabet, LassoWord, Letter, PeriodicBitSeq};
pub use parser::{parse, ParseError};
pub use prop::{CanonicalBool, Canonicalizer};
pub use translation::{translate, Translation, TranslationStats, TranslateError, DEFAULT_MAX_STATES};
