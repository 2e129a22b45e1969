//! The rewrite calculus on quasi-inequalities.

mod inequality;
pub mod rules;
pub mod trace;

pub use inequality::{Inequality, QuasiInequality};
pub use rules::{AdjRule, ApproxRule, Direction, ResRule, Side};
pub use trace::{Step, Trace, TraceStep};
