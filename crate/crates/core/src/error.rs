use thiserror::Error;

/// Errors shared across the estimation library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("kernel order {order} exceeds the maximum supported order {max}")]
    OrderTooLarge { order: usize, max: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("bandwidth {value} in coordinate {coord} is outside (0, 1/2)")]
    InvalidBandwidth { coord: usize, value: f64 },

    #[error("coordinate {value} at row {row}, column {col} is outside [0, 1]")]
    OutOfDomain { row: usize, col: usize, value: f64 },

    #[error("sample must contain at least one point")]
    EmptySample,

    #[error(
        "no candidate level satisfies both bandwidth bounds: \
         need exp(-l) <= {h_max:.6e} and n*exp(-d*l) >= {floor:.6e}"
    )]
    EmptyFamily { h_max: f64, floor: f64 },

    #[error("index {0} is not a member of the enumerated family")]
    IndexNotInFamily(String),

    #[error("value vector has {got} entries but the grid has {expected} nodes")]
    GridMismatch { expected: usize, got: usize },

    #[error("bump amplitude {rho} violates the positivity bound rho < {bound}")]
    InvalidAmplitude { rho: f64, bound: f64 },

    #[error("density value {value} exceeds the declared envelope {envelope}")]
    BadEnvelope { value: f64, envelope: f64 },

    #[error("rate fit needs at least two sample sizes, got {0}")]
    InsufficientPoints(usize),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
