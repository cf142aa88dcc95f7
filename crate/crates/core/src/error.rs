use thiserror::Error;

/// Everything that can go wrong inside the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimension: expected {expected}, found {found}")]
    InvalidDimension { expected: String, found: usize },

    #[error("matrix is not Hermitian: max |m - m^dagger| entry = {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite: min eigenvalue = {min_eigenvalue:e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("trace collapsed to {trace:e}")]
    TraceCollapse { trace: f64 },

    #[error("state is not normalized: trace = {trace}")]
    NotNormalized { trace: f64 },

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unknown figure id {0:?} (expected fig2, fig4 or fig5)")]
    UnknownFigure(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl Error {
    /// Broad failure class, used by front ends to pick an exit status.
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Config(_) | Error::UnknownFigure(_) | Error::Io(_) => ErrorKind::Usage,
            Error::InvalidDimension { .. }
            | Error::NotHermitian { .. }
            | Error::NotPositive { .. }
            | Error::NonFinite { .. }
            | Error::NotNormalized { .. }
            | Error::InvalidParameter { .. } => ErrorKind::Validation,
            Error::TraceCollapse { .. } | Error::Numerical(_) => ErrorKind::Numerical,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    Validation,
    Numerical,
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
