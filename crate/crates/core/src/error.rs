use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter lies outside the domain where the quantity is defined.
    #[error("parameter out of domain: {0}")]
    Parameter(String),

    /// The parameters are valid but the hypothesis of a formula fails.
    #[error("{formula}: hypothesis violated: {condition}")]
    Region {
        formula: &'static str,
        condition: String,
    },

    #[error("{formula}: no exact value known at these parameters")]
    NoExactResult { formula: &'static str },

    #[error("{formula}: no known lower bound at these parameters ({reason})")]
    NoKnownLower {
        formula: &'static str,
        reason: String,
    },

    #[error("{formula}: not applicable: {reason}")]
    Inapplicable {
        formula: &'static str,
        reason: String,
    },

    /// Aggregated bounds contradict each other. Always an implementation bug.
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    #[error("size budget exceeded: {what} needs {requested}, budget is {budget}")]
    Size {
        what: String,
        requested: u128,
        budget: u128,
    },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("invalid data: {0}")]
    Data(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn region(formula: &'static str, condition: impl Into<String>) -> Self {
        Error::Region {
            formula,
            condition: condition.into(),
        }
    }

    /// True for region, no-exact, no-lower and inapplicable errors: the inputs
    /// are well formed but no known result covers them.
    pub fn is_hypothesis_failure(&self) -> bool {
        matches!(
            self,
            Error::Region { .. }
                | Error::NoExactResult { .. }
                | Error::NoKnownLower { .. }
                | Error::Inapplicable { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
