//! Error type shared by the dynamic-programming solvers.

use mdp_core::MdpError;
use thiserror::Error;

/// Failure modes of the solvers in this crate.
#[derive(Debug, Error)]
pub enum DpError {
    /// The model or a policy failed validation in `mdp-core`.
    #[error("model error: {0}")]
    Model(#[from] MdpError),
    /// An argument was outside its documented domain.
    #[error("{0}")]
    InvalidArgument(String),
    /// The brute-force oracle would enumerate too many policies.
    #[error("enumeration of {count} policies exceeds the limit of {limit}")]
    TooLarge {
        /// Number of Markov deterministic policies of the instance.
        count: u128,
        /// Enumeration limit.
        limit: u128,
    },
    /// Policy iteration hit the improvement-round cap without stabilizing.
    #[error("policy iteration did not stabilize within {0} improvement rounds")]
    NoTermination(usize),
    /// A result could not be serialized.
    #[error("export failed: {0}")]
    Export(String),
}
