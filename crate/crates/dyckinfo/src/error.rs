use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] dyckinfo_core::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("bad file format: {0}")]
    Format(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// The machine-readable form written to stderr on failure.
#[derive(Debug, Serialize)]
pub struct ErrorRecord {
    pub error: &'static str,
    pub message: String,
}

impl Error {
    pub fn kind(&self) -> &'static str {
        use dyckinfo_core::Error as C;
        match self {
            Error::Core(e) => match e {
                C::InvalidDistribution(_) => "invalid_distribution",
                C::SampleSpaceMismatch => "sample_space_mismatch",
                C::ZeroProbabilityCondition => "zero_probability_condition",
                C::OutOfRange(_) => "out_of_range",
                C::Precondition(_) => "precondition",
                C::MalformedProtocol(_) => "malformed_protocol",
                C::UndefinedMessage { .. } => "undefined_message",
                C::BudgetExceeded { .. } => "budget_exceeded",
                C::InvalidSymbol { .. } => "invalid_symbol",
                C::SpaceViolation { .. } => "space_violation",
                C::StateDecode(_) => "state_decode",
                C::PrimeGeneration(_) => "prime_generation",
                C::InvalidState(_) => "invalid_state",
                C::LayoutMismatch => "layout_mismatch",
                C::AlignmentFailure { .. } => "alignment_failure",
            },
            Error::Io(_) => "io",
            Error::Json(_) => "json",
            Error::Csv(_) => "csv",
            Error::Format(_) => "format",
            Error::Config(_) => "config",
        }
    }

    pub fn record(&self) -> ErrorRecord {
        ErrorRecord {
            error: self.kind(),
            message: self.to_string(),
        }
    }
}
