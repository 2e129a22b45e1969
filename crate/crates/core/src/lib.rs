//! First-order frame correspondents for relevance-logic formulas.
//!
//! A formula is rewritten by a calculus of inequality rules into a pure
//! quasi-inequality, which is then translated into first-order logic over
//! Routley-Meyer frames. The [`oracle`] module checks results by brute
//! force on all small frames.
#![allow(clippy::needless_range_loop, clippy::should_implement_trait, clippy::result_large_err)]

pub mod calculus;
pub mod corpus;
pub mod error;
pub mod fo;
pub mod formula;
pub mod oracle;
pub mod parser;
pub mod pipeline;
pub mod serialize;
pub mod translate;

pub use calculus::{Inequality, QuasiInequality, Trace};
pub use error::{CorpusError, NotApplicable, OracleError, ParseError, PrintError, SerializeError, TranslateError};
pub use fo::{alpha_eq, eval_fo, fo_simplify, Fo, Term, Var};
pub use formula::{fresh_atom, Atom, AtomKind, BinOp, Const, Formula, Sign, UnOp};
pub use parser::{parse_formula, parse_inequality, parse_quasi, to_text, Syntax};
pub use pipeline::{pearl, pearl_text, PearlOptions, PearlResult, Status};
pub use serialize::{render, OutputFormat, RenderOptions};
