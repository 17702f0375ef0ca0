use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("arity {arity} exceeds the supported maximum of {max}")]
    ArityTooLarge { arity: usize, max: usize },
    #[error("invalid lattice domain: bottom {bottom} must lie strictly below top {top}")]
    InvalidDomain { bottom: f64, top: f64 },
    #[error("value {value} lies outside the lattice domain [{bottom}, {top}]")]
    OutOfDomain { value: f64, bottom: f64, top: f64 },
    #[error("projection index {index} is outside 1..={arity}")]
    BadProjection { index: usize, arity: usize },
    #[error("order statistic index {k} is outside 0..={max}")]
    BadOrderIndex { k: usize, max: usize },
    #[error("set function is not a lattice polynomial")]
    NotLatticePolynomial,
    #[error("set function is not cardinality-based")]
    NotCardinalityBased,
    #[error("level values are not nondecreasing")]
    NonMonotoneLevels,
    #[error("order-statistic cdf list is invalid: {0}")]
    InvalidOrderCdfs(String),
    #[error("invalid marginal distribution: {0}")]
    InvalidMarginal(String),
    #[error("invalid level weights: {0}")]
    InvalidLevelWeights(String),
    #[error("invalid probability vector: {0}")]
    InvalidPmf(String),
    #[error("joint cdf table is inconsistent: subset mask {mask} receives probability {mass}")]
    InconsistentJointCdf { mask: u64, mass: f64 },
    #[error("joint cdf table error: {0}")]
    JointCdfTable(String),
    #[error("model kind does not support {0}")]
    Unsupported(&'static str),
    #[error("empirical sample must contain at least one row")]
    EmptySample,
    #[error("sample csv error at row {row}, column {column}: {message}")]
    SampleCsv {
        row: usize,
        column: usize,
        message: String,
    },
    #[error("grid must be nonempty, finite-or-domain-bounded, and sorted ascending")]
    BadGrid,
    #[error("grids do not match")]
    GridMismatch,
    #[error("sample count {requested} is below the minimum {minimum}")]
    TooFewSamples { requested: u64, minimum: u64 },
    #[error("route {route} is not applicable: {reason}")]
    RouteInapplicable {
        route: &'static str,
        reason: String,
    },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
