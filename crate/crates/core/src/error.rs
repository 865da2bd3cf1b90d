use std::fmt;

use thiserror::Error;

/// Optional structure an instance may provide on top of the bare dagger
/// category operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Capability {
    Positivity,
    IdempotentSplitting,
    DaggerKernels,
    SquareRoots,
    Biproducts,
    Inverses,
    MoorePenrose,
}

impl fmt::Display for Capability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Capability::Positivity => "positivity witness",
            Capability::IdempotentSplitting => "dagger-idempotent splitting",
            Capability::DaggerKernels => "dagger kernel",
            Capability::SquareRoots => "square root",
            Capability::Biproducts => "dagger biproduct",
            Capability::Inverses => "inverse",
            Capability::MoorePenrose => "Moore-Penrose inverse",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Operands do not have compatible objects/shapes.
    #[error("type mismatch: {0}")]
    TypeMismatch(String),

    /// A square (endomorphism) operand was required.
    #[error("expected an endomorphism, got a map {source_obj} -> {target_obj}")]
    NotEndomorphism { source_obj: String, target_obj: String },

    #[error("instance does not provide the {0} capability")]
    Unsupported(Capability),

    /// A mathematical precondition of the operation does not hold.
    #[error("precondition failed: {what} (residual {residual:e})")]
    Precondition { what: String, residual: f64 },

    /// The map was checked and has no Moore-Penrose inverse by the route taken.
    #[error("no Moore-Penrose inverse: {what} (residual {residual:e})")]
    NoMpInverse { what: String, residual: f64 },

    #[error("{routine} did not converge after {sweeps} sweeps")]
    NoConvergence { routine: &'static str, sweeps: usize },

    /// Two computations that must agree did not.
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),

    #[error("enumeration bound exceeded: {cells} cells, at most {limit} allowed")]
    SizeBound { cells: usize, limit: usize },

    /// Malformed values: out-of-range indices, non-finite entries, bad tolerances.
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn mismatch(msg: impl Into<String>) -> Self {
        Error::TypeMismatch(msg.into())
    }

    pub(crate) fn precondition(what: impl Into<String>, residual: f64) -> Self {
        Error::Precondition { what: what.into(), residual }
    }

    /// True for errors that describe a mathematical outcome on well-formed
    /// input (a failed precondition, a refused decomposition) rather than
    /// malformed input or a missing capability.
    pub fn is_mathematical(&self) -> bool {
        matches!(
            self,
            Error::Precondition { .. }
                | Error::NoMpInverse { .. }
                | Error::NoConvergence { .. }
                | Error::Inconsistent(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
