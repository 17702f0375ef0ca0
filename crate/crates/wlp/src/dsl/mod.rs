//! Textual system-structure language.
//!
//! ```text
//! expr   := term ( "|" term )*
//! term   := factor ( "&" factor )*
//! factor := "x" integer | number | "min(" expr ("," expr)+ ")"
//!         | "max(" expr ("," expr)+ ")" | "(" expr ")"
//! ```
//!
//! `&` is meet (series), `|` is join (parallel), `&` binds tighter. The
//! min/max forms are n-ary sugar for readers who think in those terms.
//! Numbers are constant lifetimes and must lie in the lattice domain. The
//! grammar has no complement operator: everything expressible is monotone by
//! construction.

mod format;
mod parse;

pub use format::format_expression;
pub use parse::{parse_system, ParseDiagnostic, ParseOutcome, Severity, SourceSpan};
