use alloc::string::String;

/// Errors raised by every module of the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("sample spaces differ")]
    SampleSpaceMismatch,

    #[error("conditioning on a zero-probability event")]
    ZeroProbabilityCondition,

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("malformed protocol: {0}")]
    MalformedProtocol(String),

    #[error("round {round}: no message defined for this view")]
    UndefinedMessage { round: usize },

    #[error("enumeration needs {needed} weighted terms, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("invalid character {ch:?} at position {pos}")]
    InvalidSymbol { ch: char, pos: usize },

    #[error("space violation in pass {pass} at position {position}: {bits} bits > declared {declared}")]
    SpaceViolation {
        pass: usize,
        position: usize,
        bits: usize,
        declared: usize,
    },

    #[error("cannot decode machine state: {0}")]
    StateDecode(String),

    #[error("prime generation failed after {0} attempts")]
    PrimeGeneration(usize),

    #[error("invalid quantum state: {0}")]
    InvalidState(String),

    #[error("register layouts differ")]
    LayoutMismatch,

    #[error("alignment failed: achieved {achieved}, target {target}")]
    AlignmentFailure { achieved: f64, target: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;
