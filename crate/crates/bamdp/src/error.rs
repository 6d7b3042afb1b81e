//! Error type shared by the Bayes-adaptive constructions.

use thiserror::Error;

/// Errors raised by hyperstate models and observation-count models.
#[derive(Debug, Error)]
pub enum BamdpError {
    /// The underlying decision process is malformed.
    #[error(transparent)]
    Model(#[from] mdp_core::MdpError),
    /// Dimensions of counts or tables disagree with the model.
    #[error("shape mismatch: {0}")]
    Shape(String),
    /// The model declaration is internally inconsistent.
    #[error("invalid model: {0}")]
    Invalid(String),
    /// A caller-supplied argument is out of range or inadmissible.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// A count vector sums to zero where a distribution is required.
    #[error("zero count total on {0}")]
    ZeroCounts(String),
    /// Expanding the reachable hyperstates would exceed the state cap.
    #[error("hyperstate space needs more than {cap} states; use the generative interface instead")]
    CapExceeded {
        /// The cap that would be exceeded.
        cap: usize,
    },
    /// Serialization of a model or policy failed.
    #[error("export failed: {0}")]
    Export(String),
}
