use thiserror::Error;

/// Errors raised when an operation's preconditions are not met.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("alphabet size must be at least 1, got {0}")]
    EmptyAlphabet(i64),
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("duplicate alphabet label `{0}`")]
    DuplicateLabel(String),
    #[error("chain length must be at least 1")]
    EmptyChain,
    #[error("target index {index} is out of range for alphabet size {a}")]
    TargetOutOfRange { index: usize, a: usize },
    #[error("{name} must be positive and finite, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("{name} must lie in [0, 1], got {value}")]
    NotAProbability { name: &'static str, value: f64 },
    #[error("coefficient a/ln(a) is undefined for a <= 1 (got {0})")]
    CoefficientDomain(f64),
    #[error("alphabet size {a} is outside the supported range {min}..={max}")]
    AlphabetOutOfRange { a: usize, min: usize, max: usize },
    #[error("replicate count must be at least 1")]
    NoReplicates,
    #[error("effective success probability is zero; assembly would never terminate")]
    NeverSucceeds,
    #[error("timing ratio t_r/t_d = {timing} disagrees with configured ratio {config}")]
    RatioMismatch { timing: f64, config: f64 },
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("all samples share a single alphabet size; the rate laws cannot be told apart")]
    SingleAlphabet,
    #[error("bootstrap replicate count must be at least {min}, got {got}")]
    TooFewBootstrap { min: usize, got: usize },
    #[error("at least {min} trials are required, got {got}")]
    TooFewTrials { min: usize, got: usize },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::NonPositive { name, value })
    }
}

pub(crate) fn probability(name: &'static str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::NotAProbability { name, value })
    }
}
