//! Error type shared across the crate.

use thiserror::Error;

/// Errors from MDP construction, policy handling, simulation, and
/// evaluation.
#[derive(Debug, Error)]
pub enum MdpError {
    /// Table dimensions are inconsistent with the declared state and action
    /// counts.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// A policy references actions outside the constraint sets, carries
    /// malformed distributions, or does not cover the requested stages.
    #[error("invalid policy: {0}")]
    InvalidPolicy(String),

    /// An operation received an argument outside its documented domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The model has error-severity diagnostics; see
    /// [`FiniteMdp::validate`](crate::FiniteMdp::validate).
    #[error("mdp failed validation: {0}")]
    Invalid(String),

    /// The policy-evaluation linear system could not be factorized.
    #[error("policy-evaluation system is singular")]
    Singular,

    /// The policy-evaluation solution is less accurate than required.
    #[error("policy evaluation left residual {residual:e}, above {tolerance:e}")]
    ResidualTooLarge {
        /// Max-norm of the final residual.
        residual: f64,
        /// Required bound.
        tolerance: f64,
    },

    /// Serialization or file output failed.
    #[error("export failed: {0}")]
    Export(String),
}
