use thiserror::Error;

/// Errors produced by model construction and the simulation operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A quantity that must be strictly positive was not.
    #[error("{name} must be strictly positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },

    /// A quantity that must be finite and non-negative was not.
    #[error("{name} must be non-negative and finite, got {value}")]
    Negative { name: &'static str, value: f64 },

    /// A non-finite (NaN/inf) value where a finite one is required.
    #[error("{name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },

    /// Per-mode containers whose lengths disagree.
    #[error("length mismatch: {left_name} has {left} entries, {right_name} has {right}")]
    LengthMismatch {
        left_name: &'static str,
        left: usize,
        right_name: &'static str,
        right: usize,
    },

    /// An empty container where at least one element is required.
    #[error("{0} must be nonempty")]
    Empty(&'static str),

    /// Times that must be strictly increasing were not.
    #[error("{0} must be strictly increasing")]
    NotIncreasing(&'static str),

    /// A time outside the interval covered by a coupling profile.
    #[error("time {t} outside profile coverage [0, {t_end}]")]
    OutsideCoverage { t: f64, t_end: f64 },

    /// Coupling profile segments that fail to tile [0, T].
    #[error("profile segments must contiguously tile [0, T] starting at 0: {0}")]
    BadProfile(String),

    /// Pulse swap times outside (0, T) or out of order.
    #[error("swap times must satisfy 0 < t_1 < ... < t_n < {total_time}")]
    BadPulseSequence { total_time: f64 },

    /// Truncated-Fock configuration whose state space is too large.
    #[error("truncated state space dimension {dim} exceeds limit {limit}")]
    DimensionTooLarge { dim: u128, limit: u128 },

    /// Oracle initial states must be pure coherent states.
    #[error("oracle initial state must have nbar = 0 on every mode (thermal states are validated by sampling)")]
    ThermalOracleInput,

    /// Configuration-file parse or validation failure.
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
