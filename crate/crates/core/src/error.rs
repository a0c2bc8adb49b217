use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("variable space must contain at least one variable")]
    NoVariables,
    #[error("variable `{0}` has no values")]
    EmptyVariable(String),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("variable `{variable}` has duplicate value `{value}`")]
    DuplicateValue { variable: String, value: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("unknown value `{value}` for variable `{variable}`")]
    UnknownValue { variable: String, value: String },
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown action `{0}`")]
    UnknownAction(String),
    #[error("duplicate action `{0}`")]
    DuplicateAction(String),
    #[error("decision problem needs at least one action")]
    NoActions,
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("marginal table does not match its block: {0}")]
    BlockTableMismatch(String),
    #[error("invalid probability interval for state `{state}`: [{lo}, {hi}]")]
    InvalidInterval {
        state: String,
        lo: String,
        hi: String,
    },
    #[error("state `{0}` appears more than once in ordering")]
    DuplicateState(String),
    #[error("constraint needs at least one nonzero coefficient")]
    ZeroConstraint,
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("variable spaces differ")]
    SpaceMismatch,
    #[error("credal set is empty (constraints are inconsistent)")]
    EmptyCredalSet,
    #[error("alpha must lie in [0, 1], got {0}")]
    AlphaOutOfRange(String),
    #[error("maximum-entropy choice needs a credal set built only from marginal tables")]
    NotMarginalModel,
    #[error("iterative proportional fitting did not converge in {iterations} sweeps (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("internal solver error: {0}")]
    Solver(String),
    #[error("cannot parse rational `{0}`")]
    ParseRational(String),
    #[error("invalid problem file: {0}")]
    Problem(String),
}

impl Error {
    /// Process exit code: 1 usage/input error, 2 inconsistent constraints,
    /// 3 internal solver failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::EmptyCredalSet => 2,
            Error::Solver(_) | Error::NonConvergence { .. } => 3,
            _ => 1,
        }
    }
}
