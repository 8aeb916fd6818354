use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty matrix")]
    EmptyMatrix,

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index {index} out of range for dimension {bound}")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("matrix is singular to working precision (detected rank {rank} of {size})")]
    Singular { rank: usize, size: usize },

    #[error("swap post-processing exceeded {limit} swaps")]
    SwapLimit { limit: usize },

    #[error("size {size} exceeds oracle cap {cap}")]
    OracleCap { size: usize, cap: usize },

    #[error("coincident points for a singular kernel (x[{x}] == y[{y}])")]
    CoincidentPoints { x: usize, y: usize },

    #[error("zero norm: {0}")]
    ZeroNorm(&'static str),

    #[error("zero variance in column {column}")]
    ZeroVariance { column: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Numerical failures, as opposed to bad input or configuration.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Singular { .. } | Error::SwapLimit { .. } | Error::NonFinite { .. } | Error::ZeroNorm(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
