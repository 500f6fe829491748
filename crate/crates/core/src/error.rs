use thiserror::Error;

/// Failure modes of state construction, channel application and searches.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian: max |m - m^dagger| = {0:.3e}")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite: lowest eigenvalue {0:.3e}")]
    NotPositive(f64),

    #[error("not normalized: deviation {0:.3e}")]
    NotNormalized(f64),

    #[error("state is not bipartite: {0}")]
    NotBipartite(String),

    #[error("monitoring strength {0} lies outside [0, 1]")]
    EpsilonOutOfRange(f64),

    #[error("Kraus family is not trace preserving: max |sum K^dag K - 1| = {0:.3e}")]
    NotTracePreserving(f64),

    #[error("wrong dimensions: {0}")]
    WrongDimensions(String),

    #[error("search supports qubit parameterizations only here, got dimension {0}")]
    DimensionUnsupported(usize),

    #[error("unknown quantifier/destroyer pairing: {0}")]
    UnknownPairing(String),
}

pub type Result<T> = std::result::Result<T, Error>;
