use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("degenerate training set: {0}")]
    DegenerateTraining(String),

    #[error("solver did not converge after {iterations} iterations (worst KKT violation {violation:.3e})")]
    Convergence { iterations: usize, violation: f64 },

    #[error("training failed for {context}: {source}")]
    Training {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error("kappa is undefined: chance agreement equals 1")]
    UndefinedKappa,

    #[error("degenerate variance: kappas {a} and {b} differ but the combined variance is 0")]
    DegenerateVariance { a: f64, b: f64 },

    #[error("incomplete comparison grid, missing: {}", .0.join(", "))]
    IncompleteGrid(Vec<String>),

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn parse(offset: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            offset,
            message: msg.into(),
        }
    }

    pub(crate) fn training(context: impl Into<String>, source: Error) -> Self {
        Error::Training {
            context: context.into(),
            source: Box::new(source),
        }
    }

    /// The innermost error, looking through training context wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Training { source, .. } => source.root(),
            other => other,
        }
    }
}
