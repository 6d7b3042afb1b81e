//! Error type shared by model construction, simulation, and cost evaluation.

use thiserror::Error;

/// Errors produced by model validation, simulation, and cost evaluation.
#[derive(Debug, Error)]
pub enum PdmpError {
    /// Requested flow duration runs past the deterministic exit time.
    #[error("flow duration {t} exceeds boundary time {t_star}")]
    BoundaryOverrun { t: f64, t_star: f64 },

    /// Trajectory exceeded the configured per-trajectory jump cap.
    #[error("explosion guard tripped: {jumps} jumps by time {time}")]
    Explosion { jumps: usize, time: f64 },

    /// No jump is reachable within the configured search window.
    #[error("no jump reachable within {guard} time units")]
    NoJumpReachable { guard: f64 },

    /// Observed intensity above the declared global bound.
    #[error("intensity {observed} exceeds declared bound {bound}")]
    IntensityBoundViolated { observed: f64, bound: f64 },

    /// Thinning was requested on a model without a declared intensity bound.
    #[error("model declares no intensity bound")]
    MissingIntensityBound,

    /// State or argument failed validation against the model.
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// Jump kernel returned its input state.
    #[error("jump kernel returned the pre-jump state")]
    KernelSelfTransition,

    /// Intervention times must be strictly increasing and never in the past.
    #[error("intervention time {next} not after {prev}")]
    NonIncreasingIntervention { prev: f64, next: f64 },

    /// Queried time lies outside the simulated range.
    #[error("time {t} outside reconstructed range (max {max})")]
    OutOfRange { t: f64, max: f64 },

    /// Cost specification violates its own constraints.
    #[error("invalid cost specification: {0}")]
    InvalidCostSpec(String),

    /// Model configuration could not be built.
    #[error("invalid model configuration: {0}")]
    InvalidConfig(String),

    /// Trajectory export failed.
    #[error("export failed: {0}")]
    Export(String),
}
