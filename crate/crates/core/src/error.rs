use core::fmt;

/// Why a formal solve gave up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormalFailure {
    /// The piecewise-linear selection matrix was singular at the current iterate.
    SingularSelection,
    /// The residual did not reach tolerance within the iteration budget.
    NoConvergence,
}

impl fmt::Display for FormalFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormalFailure::SingularSelection => f.write_str("singular selection matrix"),
            FormalFailure::NoConvergence => f.write_str("residual did not converge"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("improper interval [{lo}, {hi}]")]
    ImproperInterval { lo: f64, hi: f64 },
    #[error("non-finite input value")]
    NonFinite,
    #[error("division by an interval containing zero")]
    DivisionByZero,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("empty vector or matrix")]
    Empty,
    #[error("negative inflation parameter {0}")]
    NegativeTheta(f64),
    #[error("widening by {0} makes the right-hand side improper")]
    ImproperWidening(f64),
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("singular matrix")]
    Singular,
    #[error("zero matrix has no condition number")]
    ZeroMatrix,
    #[error("{what} needs {count} items, over the limit of {limit}")]
    TooLarge {
        what: &'static str,
        count: u128,
        limit: u128,
    },
    #[error("operation requires exactly 2 unknowns, got {0}")]
    NotPlanar(usize),
    #[error("simplex exceeded {0} pivots without terminating")]
    SimplexStalled(usize),
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("no formal solution: {0}")]
    NoFormalSolution(FormalFailure),
    #[error("formal solutions are only supported for square systems, got {rows}x{cols}")]
    FormalUnsupported { rows: usize, cols: usize },
}

pub type Result<T> = core::result::Result<T, Error>;
