use thiserror::Error;

/// Errors produced while building targets and objectives or solving fits.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("polynomial coefficient {index} is not finite ({value})")]
    NonFiniteCoefficient { index: usize, value: f64 },

    #[error("invalid domain [{lo}, {hi}]: {reason}")]
    InvalidDomain { lo: f64, hi: f64, reason: &'static str },

    #[error("invalid target: {0}")]
    InvalidTarget(String),

    #[error("invalid samples: {0}")]
    InvalidSamples(String),

    #[error("insufficient samples: degree {degree} needs at least {needed} samples, got {got}")]
    InsufficientSamples { degree: usize, needed: usize, got: usize },

    #[error("degree {degree} exceeds the surrogate cap of {cap}")]
    DegreeTooHigh { degree: usize, cap: usize },

    #[error("least-squares fit is rank deficient at basis function {index}")]
    SingularFit { index: usize },

    #[error("weight for segment {segment}, order {order} must be finite and >= 0, got {value}")]
    InvalidWeight { segment: usize, order: usize, value: f64 },

    #[error("invalid objective: {0}")]
    InvalidObjective(String),

    #[error("singular or indefinite system at pivot {pivot}")]
    SingularSystem { pivot: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
