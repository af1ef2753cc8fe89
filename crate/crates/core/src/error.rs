use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not hermitian (max |A - A^H| = {deviation:e})")]
    NonHermitianInput { deviation: f64 },

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFiniteEntry { row: usize, col: usize },

    #[error("eigenvalue iteration did not converge for a block of size {block}")]
    ConvergenceFailure { block: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("site index out of range or repeated: ({first}, {second}) with {n_sites} sites")]
    IndexOutOfRange {
        first: usize,
        second: usize,
        n_sites: usize,
    },

    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("operation not supported for model kind {0}")]
    UnsupportedKind(&'static str),

    #[error("ground level is degenerate (gap {gap:e})")]
    DegenerateGround { gap: f64 },

    #[error("temperature must be finite and positive, got {0}")]
    TemperatureNotPositive(f64),

    #[error("not a density matrix: {0}")]
    NotADensityMatrix(String),

    #[error("closed-form elements violate their invariants: {0}")]
    InvariantViolation(String),

    #[error("state vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("negativity never drops below {threshold:e} up to {axis} = {limit}")]
    NoVanishing {
        axis: &'static str,
        threshold: f64,
        limit: f64,
    },

    #[error("no vanish-recover window found for B in [0, {limit}]")]
    NoWindow { limit: f64 },

    #[error("negativity at the reference point is {negativity:e}, not above {threshold:e}")]
    NeverEntangled { negativity: f64, threshold: f64 },

    #[error("chain of {0} sites exceeds the supported maximum of 12")]
    SizeLimit(usize),

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error("sweep point (T={t}, B={b}, d={d}) failed: {source}")]
    SweepPoint {
        t: f64,
        b: f64,
        d: f64,
        source: Box<Error>,
    },
}
