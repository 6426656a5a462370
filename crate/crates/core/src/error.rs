use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("resource limit: {0}")]
    Resource(String),

    /// Choi matrix has a negative eigenvalue. The reported value is for the
    /// normalized Choi state `J / N`.
    #[error("map is not completely positive (min Choi eigenvalue {min_eigenvalue:.3e})")]
    CompletePositivity { min_eigenvalue: f64 },

    #[error("transformation is not an allowed member: {0}")]
    NotAllowed(String),

    #[error("instrument outcomes do not sum to an allowed transformation: {0}")]
    Completeness(String),

    #[error("outcome probabilities sum to {total}, exceeding 1")]
    Model { total: f64 },

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
        if expected == found {
            Ok(())
        } else {
            Err(Error::Dimension { expected, found })
        }
    }
}
