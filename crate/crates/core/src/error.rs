use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("empty vector: at least one entry is required")]
    Empty,

    #[error("invalid value for `{field}`: {reason}")]
    Validation { field: String, reason: String },

    #[error("measure is undefined for a single decision maker")]
    UndefinedMeasure,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("problem is infeasible: {0}")]
    Infeasible(String),

    #[error("solver failure: {0}")]
    SolverFailure(String),

    #[error("symmetric solver requires uniform {0} (1/n each)")]
    SymmetryPrecondition(&'static str),

    #[error("n = {n} exceeds the enumeration limit of {limit}")]
    SizeGuard { n: usize, limit: usize },

    #[error("failed to parse {context}: {message}")]
    Parse { context: String, message: String },

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub(crate) fn validation(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Infeasible(_) => 3,
            Error::SolverFailure(_) => 4,
            _ => 2,
        }
    }
}
