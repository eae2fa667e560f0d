use thiserror::Error;

/// Errors raised by the library. Each variant maps onto one CLI exit code.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unsupported prime {p}: {reason}")]
    UnsupportedPrime { p: u64, reason: &'static str },

    #[error("budget exceeded: {what} needs {count} but the budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        count: String,
        budget: u64,
    },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn budget(what: &'static str, count: impl ToString, budget: u64) -> Self {
        Error::BudgetExceeded {
            what,
            count: count.to_string(),
            budget,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
