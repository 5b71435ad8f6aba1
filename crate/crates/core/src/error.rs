use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// The instance (or a subproblem derived from it) has no feasible solution.
    #[error("infeasible: {reason}")]
    Infeasible { reason: String, witness: Vec<usize> },

    #[error("{what} has size {size}, above the enumeration cap of {cap}")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    /// A postcondition that the algorithm guarantees was observed to fail.
    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub fn infeasible(reason: impl Into<String>, witness: Vec<usize>) -> Self {
        Error::Infeasible {
            reason: reason.into(),
            witness,
        }
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, Error::Infeasible { .. })
    }
}
