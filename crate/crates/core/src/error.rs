use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors shared across the library modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("mode {mode} out of range for a {modes}-mode space")]
    ModeOutOfRange { mode: usize, modes: usize },

    #[error("unsupported mode count {modes}; this artifact handles 1..=3 modes")]
    ModeCountUnsupported { modes: usize },

    #[error("occupancy {occupancy} exceeds the cutoff {cutoff}")]
    OccupancyOutOfRange { occupancy: usize, cutoff: usize },

    #[error("cutoff must be at least 1")]
    CutoffTooSmall,

    #[error("operands live on different Fock spaces")]
    SpaceMismatch,

    #[error("space of dimension {dim} exceeds the limit {limit}")]
    DimensionLimit { dim: usize, limit: usize },

    #[error("operator is not Hermitian: max entry deviation {deviation:.3e}")]
    NotHermitian { deviation: f64 },

    #[error("generator is not anti-Hermitian: max entry deviation {deviation:.3e}")]
    NotAntiHermitian { deviation: f64 },

    #[error("state is not normalized: |norm - 1| = {deviation:.3e}")]
    NotNormalized { deviation: f64 },

    #[error("exponential action did not converge within budget; residual estimate {residual:.3e}")]
    ExpmDidNotConverge { residual: f64 },

    #[error(
        "power iteration hit the iteration budget ({iterations}); best residual {residual:.3e}"
    )]
    PowerIterationFailed { iterations: usize, residual: f64 },

    #[error("restriction basis is not orthonormal: Gram deviation {deviation:.3e}")]
    NonOrthonormalBasis { deviation: f64 },

    #[error("invalid quadratic exponent: {reason}")]
    InvalidQuadraticSpec { reason: String },

    #[error("invalid weights: {reason}")]
    InvalidWeights { reason: String },

    #[error(
        "circuit cutoff {circuit_cutoff} too small for a block cutoff of {block_cutoff}; \
         need circuit_cutoff >= 2 * block_cutoff"
    )]
    CircuitCutoffTooSmall {
        block_cutoff: usize,
        circuit_cutoff: usize,
    },

    #[error("tail mass {mass:.3e} exceeds the budget {budget:.3e}; raise the cutoff")]
    TailMass { mass: f64, budget: f64 },

    #[error("invalid parameter: {reason}")]
    InvalidParameter { reason: String },
}

impl Error {
    pub(crate) fn param(reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            reason: reason.into(),
        }
    }
}
