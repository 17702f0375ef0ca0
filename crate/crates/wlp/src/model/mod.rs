//! Joint lifetime models: marginal cdfs, dependence regimes, exceedance
//! pattern distributions at any threshold, and reproducible sampling.
//!
//! The exceedance convention throughout is strict: a component counts as
//! alive at threshold y exactly when its lifetime is > y, while joint cdf
//! values are Pr(X <= y). Empirical counting follows the same split.

mod indicator;
mod ingest;
mod joint;
mod marginal;

pub use indicator::{IndicatorDistribution, MASS_TOLERANCE, PROB_CLAMP};
pub use ingest::{read_sample_csv, read_sample_csv_path, JointCdfTable};
pub use joint::{
    JointModel, LevelWeightFn, SampleMatrix, JOINT_CDF_CLAMP, SYMMETRY_TOLERANCE,
};
pub(crate) use joint::validate_level_weights;
pub use marginal::MarginalCdf;
