use thiserror::Error;

/// Errors raised by the library. Each variant maps onto one CLI exit code
/// through [`Error::exit_code`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("discriminant undefined for formal degree < 2")]
    DiscriminantDegree,

    #[error("resultant requires formal degree >= 1")]
    ResultantDegree,

    #[error("leading coefficient zero; use formal discriminant")]
    LeadingZero,

    #[error("roots undefined for the zero polynomial")]
    ZeroPolynomial,

    #[error("separation requires at least two roots")]
    SeparationDegree,

    #[error("root iteration did not converge (residual {residual:e}); retry with a smaller tolerance")]
    NotConverged { residual: f64 },

    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    #[error("budget exceeded: {needed} evaluations requested, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// 1 usage/parse, 2 invariant violation, 3 budget exceeded.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvariantViolation(_) => 2,
            Error::BudgetExceeded { .. } => 3,
            _ => 1,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
