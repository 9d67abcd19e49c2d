use thiserror::Error;

/// Errors produced by the walk simulators, the spectral harness and the
/// search driver.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension must be at least {min}, got n = {n}")]
    InvalidDimension { n: usize, min: usize },

    #[error("state has dimension n = {state_n}, expected n = {expected_n}")]
    DimensionMismatch { state_n: usize, expected_n: usize },

    #[error("n = {n} exceeds the memory cap (max n = {max_n}); set QWALK_MAX_N to raise it")]
    CapacityExceeded { n: usize, max_n: usize },

    #[error("target node {target} out of range for n = {n} (must be < 2^n)")]
    TargetOutOfRange { target: u64, n: usize },

    #[error("state is not normalized: |norm^2 - 1| = {deviation:.3e} exceeds tolerance {tol:.3e}")]
    NotNormalized { deviation: f64, tol: f64 },

    #[error("custom marking coin is not unitary: max |M^† M - I| = {residual:.3e}")]
    NonUnitaryCoin { residual: f64 },

    #[error("marking coin has dimension {coin_n}, expected n = {expected_n}")]
    CoinDimensionMismatch { coin_n: usize, expected_n: usize },

    #[error("bit index {index} out of range for n = {n}")]
    BitIndexOutOfRange { index: usize, n: usize },

    #[error("matrix is not orthogonal: max |M^T M - I| = {residual:.3e}")]
    NotOrthogonal { residual: f64 },

    #[error("operation requires even n, got n = {n}")]
    OddDimension { n: usize },

    #[error("eigenvalue index k = {k} out of range for n = {n}")]
    EigenIndexOutOfRange { k: usize, n: usize },

    #[error("eigensolver failed on {context} (n = {n}): {detail}")]
    EigenFailure {
        context: String,
        n: usize,
        detail: String,
    },

    #[error("expected exactly 2 eigenvalues on the arc, found {found} (n = {n})")]
    ArcCount { found: usize, n: usize },

    #[error("collapsed backend supports only the -I marking coin")]
    UnsupportedMarkingCoin,

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
