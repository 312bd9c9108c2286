use thiserror::Error;

/// Broad category of a failure, used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed or out-of-range input.
    Input,
    /// Input is well formed but lies outside the domain of the operation.
    Domain,
    /// A numerical procedure could not certify or produce its result.
    Numerical,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("depth must be positive")]
    ZeroDepth,

    #[error("enclosure too wide to certify {0}")]
    EnclosureTooWide(String),

    #[error("operation requires an irrational ratio, got a rational number")]
    RationalTheta,

    #[error("equal approximation weights for denominators {0} and {1}")]
    EqualWeights(u64, u64),

    #[error("coupling strength alpha = 0 is excluded: the spectrum is the whole half-line [0, inf) and has no gaps")]
    ZeroCoupling,

    #[error("momentum must be positive, got {0}")]
    NonPositiveMomentum(f64),

    #[error("coupling resonance: singular matrix in the vertex scattering formula at k = {0}")]
    CouplingResonance(f64),

    #[error("cannot decide: {0}")]
    Undecided(String),

    #[error("schema violation at `{field}`: {message}")]
    Schema { field: String, message: String },
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Parse(_) | Error::InvalidInput(_) | Error::ZeroDepth | Error::Schema { .. } => ErrorKind::Input,
            Error::RationalTheta | Error::ZeroCoupling | Error::NonPositiveMomentum(_) => ErrorKind::Domain,
            Error::EnclosureTooWide(_)
            | Error::EqualWeights(..)
            | Error::CouplingResonance(_)
            | Error::Undecided(_) => ErrorKind::Numerical,
        }
    }

    pub(crate) fn schema(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema { field: field.into(), message: message.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
