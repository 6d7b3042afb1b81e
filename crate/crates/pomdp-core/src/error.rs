use thiserror::Error;

/// Errors reported by POMDP construction, filtering, and solving.
#[derive(Debug, Error)]
pub enum PomdpError {
    /// The underlying fully observed model failed validation.
    #[error(transparent)]
    Model(#[from] mdp_core::MdpError),
    /// A table does not match the declared state, action, or observation
    /// counts.
    #[error("shape error: {0}")]
    Shape(String),
    /// A semantic defect in the observation model or initial belief.
    #[error("invalid model: {0}")]
    Invalid(String),
    /// An argument is outside its documented range.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// Conditioning on evidence of probability zero.
    #[error("impossible evidence: {0}")]
    ImpossibleEvidence(String),
    /// Reachable belief expansion hit the node cap.
    #[error("belief graph needs more than {cap} nodes")]
    CapExceeded { cap: usize },
    /// A belief policy did not cover a reached belief.
    #[error("policy undefined at stage {stage} for the reached belief")]
    PolicyGap { stage: usize },
    /// Serialization of a model or result failed.
    #[error("serialization failed: {0}")]
    Export(String),
}
