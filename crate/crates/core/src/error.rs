use thiserror::Error;

/// Errors reported by the geometry, solver, problem registry and benchmark code.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate box: lower bound {lower} is not below upper bound {upper} in coordinate {coord}")]
    DegenerateBox { coord: usize, lower: f64, upper: f64 },

    #[error("box corners have different lengths ({lower} vs {upper})")]
    CornerLengthMismatch { lower: usize, upper: usize },

    #[error("non-finite coordinate {value} at index {coord}")]
    NonFiniteCoordinate { coord: usize, value: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("split point is not strictly inside the box (coordinate {coord})")]
    NotInterior { coord: usize },

    #[error("dimension {n} exceeds the supported cap of {cap}")]
    DimensionCap { n: usize, cap: usize },

    #[error("placed point left the diagonal segment (parameter {param}); Lipschitz estimate {khat} too small")]
    PlacementOutside { param: f64, khat: f64 },

    #[error("objective returned {value} at {point:?}")]
    NonFiniteObjective { point: Vec<f64>, value: f64 },

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("unknown problem id {0} (expected 1..=20)")]
    UnknownProblem(u32),

    #[error("problem {id} has fixed dimension {fixed}; dimension override not accepted")]
    FixedDimension { id: u32, fixed: usize },

    #[error("problem {id} does not support dimension {n}")]
    UnsupportedDimension { id: u32, n: usize },

    #[error("point {point:?} lies outside the problem domain")]
    OutOfDomain { point: Vec<f64> },

    #[error("no reference optimum stored for problem {id} in dimension {n}")]
    MissingReference { id: u32, n: usize },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
