use thiserror::Error;

use crate::solver::SolveReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("gamma function pole at x = {x}")]
    Pole { x: f64 },

    #[error("gamma function overflows at x = {x}")]
    Overflow { x: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error at byte {offset}: expected {expected}")]
    Parse { offset: usize, expected: String },

    #[error("evaluation error at byte {offset}: {message}")]
    Eval { offset: usize, message: String },

    /// The nonlocal condition degenerates: `c + d - A` is numerically zero.
    #[error("singular problem: c + d - A = {denom:e} is below the rejection threshold")]
    SingularProblem { denom: f64 },

    #[error("inadmissible exponent: {condition}")]
    InadmissibleExponent { condition: String },

    /// Picard iteration exhausted its budget; the partial report is kept for diagnostics.
    #[error("no convergence after {} iterations", .0.iterations)]
    NoConvergence(Box<SolveReport>),

    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },

    /// An error inside the value at a problem-file key.
    #[error("at `{path}`: {source}")]
    Field { path: String, source: Box<Error> },

    #[error("mesh mismatch: {0}")]
    MeshMismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn field(path: impl Into<String>, source: Error) -> Self {
        Error::Field {
            path: path.into(),
            source: Box::new(source),
        }
    }

    pub(crate) fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            path: path.into(),
            message: message.into(),
        }
    }
}
