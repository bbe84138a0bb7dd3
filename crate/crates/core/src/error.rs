use thiserror::Error;

use crate::dense::Role;

/// Errors produced by every lieforge pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("register size mismatch: {left} vs {right} qubits")]
    RegisterMismatch { left: u32, right: u32 },

    #[error("operator dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{what}: size {size} exceeds the limit {limit}")]
    Limit {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("operator is not {expected:?} (relative residual {residual:.3e})")]
    WrongRole { expected: Role, residual: f64 },

    #[error("operator is not an orthogonal projector (residual {residual:.3e})")]
    NotProjector { residual: f64 },

    #[error("chi has {found} distinct eigenvalues but {needed} are required")]
    EigenvalueCount { needed: usize, found: usize },

    #[error("power family of chi is numerically dependent (Vandermonde condition {condition:.3e})")]
    DependentPowers { condition: f64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("dense closure exceeded the maximum dimension {limit}")]
    ClosureLimit { limit: usize },

    #[error("algebra is not reductive (Killing form eigenvalue ratio {ratio:.3e})")]
    NotReductive { ratio: f64 },

    #[error("failed to separate simple ideals after {attempts} attempts")]
    IdealSplit { attempts: usize },

    #[error("target index set is empty")]
    EmptyTargets,

    #[error("target ideal {index} out of range ({count} ideals)")]
    TargetOutOfRange { index: usize, count: usize },

    #[error("filter component on ideal {index} is central")]
    CentralFilter { index: usize },

    #[error("every commutator with the filter vanishes")]
    EmptyReduction,

    #[error("{0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}
