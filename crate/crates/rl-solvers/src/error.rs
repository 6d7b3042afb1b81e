use thiserror::Error;

/// Errors reported by the sampling-based solvers.
#[derive(Debug, Error)]
pub enum RlError {
    /// The wrapped decision model failed validation.
    #[error(transparent)]
    Model(#[from] mdp_core::MdpError),
    /// A solver argument is outside its documented range.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// Serialization of a result failed.
    #[error("serialization failed: {0}")]
    Export(String),
}
