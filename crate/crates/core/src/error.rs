use thiserror::Error;

/// Failures raised anywhere in the EOF pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("covariance matrix entry ({row}, {col}) is not finite")]
    NonFiniteEntry { row: usize, col: usize },

    #[error("covariance matrix is not bona fide (smallest symplectic eigenvalue {min_nu})")]
    NotBonaFide { min_nu: f64 },

    #[error("local invariants admit no real correlation pair: {0}")]
    AmbiguousSigns(String),

    #[error("no root of the squeezing equations on the bracket [{lo}, {hi}]")]
    NoRoot { lo: f64, hi: f64 },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("argument outside the domain: {0}")]
    DomainError(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("no feasible pure-state block satisfies both determinant constraints")]
    Infeasible,

    #[error("bound sandwich violated: {0}")]
    SandwichViolation(String),

    #[error("Schmidt truncation too coarse (tail mass {tail_mass:e})")]
    TruncationTooCoarse { tail_mass: f64 },

    #[error("weight matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonFiniteEntry { .. } => "NonFiniteEntry",
            Error::NotBonaFide { .. } => "NotBonaFide",
            Error::AmbiguousSigns(_) => "AmbiguousSigns",
            Error::NoRoot { .. } => "NoRoot",
            Error::Degenerate(_) => "Degenerate",
            Error::DomainError(_) => "DomainError",
            Error::InvalidState(_) => "InvalidState",
            Error::Infeasible => "Infeasible",
            Error::SandwichViolation(_) => "SandwichViolation",
            Error::TruncationTooCoarse { .. } => "TruncationTooCoarse",
            Error::NotPsd { .. } => "NotPsd",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }

    /// Process exit code: 1 input validation, 2 numerical failure, 3 verification failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NonFiniteEntry { .. }
            | Error::NotBonaFide { .. }
            | Error::AmbiguousSigns(_)
            | Error::DomainError(_)
            | Error::InvalidState(_)
            | Error::InvalidInput(_) => 1,
            Error::NoRoot { .. }
            | Error::Degenerate(_)
            | Error::Infeasible
            | Error::TruncationTooCoarse { .. } => 2,
            Error::SandwichViolation(_) | Error::NotPsd { .. } => 3,
        }
    }
}
