use thiserror::Error;

/// Errors raised by model construction, dynamics and the dense oracles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LmgError {
    #[error("bath size N must be at least 2, got {0}")]
    BathTooSmall(usize),

    #[error("bath coupling lambda must be positive and finite, got {0}")]
    InvalidLambda(f64),

    #[error("only the isotropic model is supported (gamma = 1), got gamma = {0}")]
    Anisotropic(f64),

    #[error("explicit qubit-bath coupling must be finite, got {0}")]
    InvalidLambdaPrime(f64),

    #[error("M = {m} is not on the Dicke grid for N = {n}")]
    OffGrid { n: usize, m: f64 },

    #[error("Dicke index belongs to N = {index} but the model has N = {model}")]
    SizeMismatch { index: usize, model: usize },

    #[error("the M = N/2 subspace is one-dimensional and has no 2x2 block")]
    OneDimensionalSubspace,

    #[error("no invariant subspace below M = -N/2")]
    NoLowerSubspace,

    #[error("qubit state is not normalized (|c_up|^2 + |c_down|^2 = {0})")]
    NotNormalized(f64),

    #[error("{op} requires {requirement}, got lambda = {lambda}")]
    PhaseMismatch {
        op: &'static str,
        requirement: &'static str,
        lambda: f64,
    },

    #[error("{0} is only defined for the (|up> + |down>)/sqrt(2) initial qubit state")]
    UnsupportedInitialState(&'static str),

    #[error("time grid must be ascending and finite")]
    UnsortedTimes,

    #[error("photon index n = {n} exceeds N = {max}")]
    PhotonIndexOutOfRange { n: usize, max: usize },

    #[error("N = {n} exceeds the oracle limit of {max}")]
    OracleTooLarge { n: usize, max: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not Hermitian (max |H - H^dagger| = {0:e})")]
    NotHermitian(f64),

    #[error("Jacobi iteration did not converge after {0} sweeps")]
    NoConvergence(usize),
}

pub type Result<T> = std::result::Result<T, LmgError>;
