//! Error type shared by the whole toolkit.

use thiserror::Error;

/// Errors produced by cone queries, distance evaluations and certificates.
#[derive(Debug, Error)]
pub enum VarRegError {
    /// A point has the wrong dimension for the space it is used in.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Interior query on a cone with empty interior.
    #[error("cone is not solid (empty interior)")]
    NotSolid,

    /// A direction that must lie in the interior of the cone does not.
    #[error("point is not in the interior of the cone")]
    NotInterior,

    /// A construction that requires a pointed cone received one with a line.
    #[error("cone is not pointed")]
    NotPointed,

    /// Cone description is unusable (zero rows, no boundary, ...).
    #[error("invalid cone: {0}")]
    InvalidCone(String),

    /// The LP solver failed in a way valid inputs cannot trigger.
    #[error("linear program failed: {0}")]
    LpFailure(String),

    /// A result guaranteed nonempty came back empty; indicates a tolerance bug.
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),

    /// Operation needs a representation the map does not carry.
    #[error("unsupported map representation: {0}")]
    Unsupported(String),

    /// Reference point violates a precondition (not on the graph, infeasible).
    #[error("invalid reference point: {0}")]
    BadReference(String),

    /// Constants passed to a closed-form formula violate its hypotheses.
    #[error("invalid constants: {0}")]
    BadConstants(String),

    /// Fixture file rejected, with a line number when one is known.
    #[error("fixture error at line {line}: {msg}")]
    Fixture { line: usize, msg: String },

    /// Expression text rejected by the parser.
    #[error("expression error: {0}")]
    Expr(String),
}

impl VarRegError {
    pub(crate) fn fixture(line: usize, msg: impl Into<String>) -> Self {
        VarRegError::Fixture {
            line,
            msg: msg.into(),
        }
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, VarRegError>;
