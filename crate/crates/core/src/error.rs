use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("word length {requested} is shorter than the {needed} binary digits required")]
    Length { requested: usize, needed: usize },

    #[error("denominator {0} is even; value is not a 2-adic integer")]
    EvenDenominator(String),

    #[error("zero denominator")]
    ZeroDenominator,

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("unsupported pair: {0}")]
    UnsupportedPair(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("insufficient precision: {0}")]
    Precision(String),

    #[error("out of range: {0}")]
    Range(String),

    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },
}
