//! Lattice domain, weighted-lattice-polynomial expressions, canonical set
//! functions, and pure lattice evaluation.
//!
//! Everything here is immutable after construction and safe to share across
//! threads.

mod domain;
mod expr;
mod set_function;

pub use domain::LatticeDomain;
pub use expr::WlpExpression;
pub use set_function::{
    order_statistic, symmetric_decomposition_eval, CharacteristicVector, SetFunction, MAX_ARITY,
};
