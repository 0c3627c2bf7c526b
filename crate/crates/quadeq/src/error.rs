use thiserror::Error;

/// Every failure the engine can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("operands use different bases")]
    BasisMismatch,
    #[error("operands use different epsilon")]
    EpsilonMismatch,
    #[error("operands use different coefficient domains")]
    DomainMismatch,
    #[error("not divisible: {0}")]
    NotDivisible(String),
    #[error("word is not in the normal closure of the relator: {0}")]
    NotInKernel(String),
    #[error("base {0} is singular for the twisted augmentation")]
    SingularBase(String),
    #[error("contradictory signs for {0} in the orbit")]
    InconsistentSign(String),
    #[error("not a mixed case: {0}")]
    NotMixedCase(String),
    #[error("case mismatch: {0}")]
    CaseMismatch(String),
    #[error("extracted pair failed re-verification: {0}")]
    ExtractionFailed(String),
    #[error("right-hand side length {len} exceeds the budget {budget}")]
    BudgetExceeded { len: usize, budget: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
