use thiserror::Error;

/// Errors raised by state construction, measurement and the protocol layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("state has zero norm")]
    ZeroNorm,

    #[error("amplitude count {0} is not a power of two >= 2")]
    BadLength(usize),

    #[error("{0} systems exceeds the supported maximum of {max}", max = crate::qmath::MAX_SYSTEMS)]
    TooManySystems(usize),

    #[error("non-finite amplitude or entry")]
    NonFinite,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("bad site list {sites:?} for a {num_systems}-system state")]
    BadSites { sites: Vec<usize>, num_systems: usize },

    #[error("operator is not a valid {kind}: {reason}")]
    InvalidOperator { kind: &'static str, reason: String },

    #[error("operator does not preserve the norm of this state (norm^2 = {0})")]
    NonNormalizing(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("invalid direction: polar {polar}, azimuth {azimuth}")]
    BadDirection { polar: f64, azimuth: f64 },

    #[error("inconsistent proposition set: {0}")]
    Inconsistent(String),

    #[error("proposition projector has rank {0:.6}, expected 1")]
    RankError(f64),

    #[error("cannot parse proposition {input:?}: {reason}")]
    PropositionSyntax { input: String, reason: String },

    #[error("insufficient rounds: {0}")]
    InsufficientRounds(String),

    #[error("setting pair {0} received no trials")]
    EmptySettingPair(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
