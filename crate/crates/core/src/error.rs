use thiserror::Error;

/// Errors produced by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |H - H^dagger| = {defect:.3e} exceeds {tolerance:.3e})")]
    NotHermitian { defect: f64, tolerance: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("parameter `{name}` = {value} is outside {range}")]
    ParamOutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("invalid probability vector {probs:?}: {reason}")]
    InvalidProbs {
        probs: Vec<f64>,
        reason: &'static str,
    },

    #[error("correlations ({c1}, {c2}, {c3}) do not describe a state (Bell weights {weights:?})")]
    InvalidState {
        c1: f64,
        c2: f64,
        c3: f64,
        weights: [f64; 4],
    },

    #[error("Kraus operators are not trace preserving (max |sum K^dagger K - I| = {defect:.3e})")]
    InvalidChannel { defect: f64 },

    #[error("matrix is not unitary (max |U^dagger U - I| = {defect:.3e})")]
    NotUnitary { defect: f64 },

    #[error("control amplitudes are not normalized (|a|^2 + |b|^2 = {norm})")]
    InvalidControl { norm: f64 },

    #[error(
        "measurement branch has probability {probability:.3e}; post-selected state is undefined"
    )]
    ZeroProbabilityBranch { probability: f64 },

    #[error("bad spectrum: {0}")]
    BadSpectrum(String),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("invalid grid `{spec}`: {reason}")]
    InvalidGrid { spec: String, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
