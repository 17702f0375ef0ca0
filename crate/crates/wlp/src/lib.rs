//! Exact lifetime distributions for systems whose lifetime is a min/max
//! combination of component lifetimes.
//!
//! A series/parallel network with constant lower or upper bounds has lifetime
//! Y = p(X_1,..,X_n) for a weighted lattice polynomial p, canonically
//! described by a nondecreasing set function over the subsets of components.
//! For any threshold y the survival Pr(Y > y) is a dot product between that
//! set function thresholded at y and the distribution of the exceedance
//! pattern (which components are still alive at y), so the full cdf of Y is
//! computable exactly for independent components, exchangeable indicator
//! patterns, empirical samples, joint-cdf tables, and random-shift models.
//!
//! The crate provides:
//!
//! - [`lattice`]: domains, expressions, canonical set functions, evaluation;
//! - [`setfn`]: subset-sum (zeta) and Möbius transforms on real tables;
//! - [`model`]: marginal cdfs, joint models, pattern distributions, sampling;
//! - [`engine`]: the survival routes and order-statistic specializations;
//! - [`dsl`]: the `x1 & (2 | x2)` system description language;
//! - [`oracle`]: seeded Monte Carlo validation of any analytic route.

pub mod bits;
pub mod dsl;
pub mod engine;
mod error;
pub mod lattice;
pub mod model;
pub mod oracle;
pub mod setfn;

pub use engine::{Route, SurvivalPoint};
pub use error::{Error, Result};
pub use lattice::{LatticeDomain, SetFunction, WlpExpression};
pub use model::{IndicatorDistribution, JointModel, MarginalCdf};
pub use setfn::RealSetFunction;
