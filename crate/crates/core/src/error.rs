use thiserror::Error;

/// Errors raised by operator construction, resolvent evaluation, parameter
/// validation and the rate calculus.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("forward evaluation is not supported for operator kind `{0}`")]
    UnsupportedForward(&'static str),

    #[error("singular system: {0}")]
    SingularSystem(String),

    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("operator has no Lipschitz constant")]
    MissingLipschitz,

    #[error("invalid constants: {0}")]
    InvalidConstants(String),

    #[error("infeasible parameters: {0}")]
    InfeasibleParameters(String),

    #[error("parameter validation failed ({code}): {message}")]
    InvalidParams { code: ParamCode, message: String },

    #[error("rate theorem not applicable: {0}")]
    RateNotApplicable(String),

    #[error("rate for a Lipschitz B requires B to be linear")]
    RequiresLinearB,

    #[error("sum of linear parts is singular; zer(A+B) is empty or not a singleton")]
    SingularSum,

    #[error("grid search supports dimension <= 2, got {0}")]
    DimensionTooLarge(usize),

    #[error("oracle method not applicable: {0}")]
    OracleNotApplicable(String),
}

/// Machine-readable codes for rejected splitting parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ParamCode {
    KappaRange,
    NonpositiveStep,
    RelaxationRange,
    CqViolated,
    ClassicalMismatch,
}

impl ParamCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ParamCode::KappaRange => "KAPPA_RANGE",
            ParamCode::NonpositiveStep => "NONPOSITIVE_STEP",
            ParamCode::RelaxationRange => "RELAXATION_RANGE",
            ParamCode::CqViolated => "CQ_VIOLATED",
            ParamCode::ClassicalMismatch => "CLASSICAL_MISMATCH",
        }
    }
}

impl std::fmt::Display for ParamCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Error {
    /// Stable identifier used in machine-readable CLI error objects.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "DIMENSION_MISMATCH",
            Error::UnsupportedForward(_) => "UNSUPPORTED_FORWARD",
            Error::SingularSystem(_) => "SINGULAR_SYSTEM",
            Error::InvalidOperator(_) => "INVALID_OPERATOR",
            Error::InvalidProblem(_) => "INVALID_PROBLEM",
            Error::MissingLipschitz => "MISSING_LIPSCHITZ",
            Error::InvalidConstants(_) => "INVALID_CONSTANTS",
            Error::InfeasibleParameters(_) => "INFEASIBLE",
            Error::InvalidParams { code, .. } => code.as_str(),
            Error::RateNotApplicable(_) => "RATE_NOT_APPLICABLE",
            Error::RequiresLinearB => "REQUIRES_LINEAR_B",
            Error::SingularSum => "SINGULAR_SUM",
            Error::DimensionTooLarge(_) => "DIMENSION_TOO_LARGE",
            Error::OracleNotApplicable(_) => "ORACLE_NOT_APPLICABLE",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
