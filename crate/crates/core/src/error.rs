use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input violated a documented precondition. `name` identifies the
    /// offending argument so front ends can point at it.
    #[error("invalid {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// The squeezed frame does not exist once the coupling reaches the
    /// collapse point `lambda_c = omega_plus`.
    #[error("spectral collapse regime: lambda={lambda} >= lambda_c={lambda_c}")]
    CollapseRegime { lambda: f64, lambda_c: f64 },

    #[error("eigensolver did not converge after {iterations} iterations (index {index})")]
    NoConvergence { iterations: usize, index: usize },

    #[error("matrix is not antisymmetric (max |g + g^T| = {deviation:e})")]
    NotAntisymmetric { deviation: f64 },

    #[error("singular matrix in linear solve")]
    Singular,

    #[error("reference method `{0}` has no rows in the table")]
    MissingReference(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }
}
