//! Common output record of the solvers.

use mdp_core::Policy;
use serde::{Deserialize, Serialize};

use crate::error::DpError;

/// Value function and optimal policy returned by a solver.
///
/// Finite-horizon solvers store one value vector per stage (`H + 1`
/// entries, the last being the terminal costs) and a Markov deterministic
/// policy. Infinite-horizon solvers store a single value vector and a
/// stationary deterministic policy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    /// Per-stage value vectors, or a single vector for stationary
    /// solutions.
    pub values: Vec<Vec<f64>>,
    /// Optimal policy, admissible for the solved model.
    pub policy: Policy,
    /// Number of sweeps (backward induction, value iteration) or
    /// evaluation rounds (policy iteration) performed.
    pub iterations: usize,
    /// Max-norm Bellman residual of the returned values.
    pub residual: f64,
}

impl SolveResult {
    /// The single value vector of a stationary solution, if this is one.
    pub fn stationary_values(&self) -> Option<&[f64]> {
        match self.values.as_slice() {
            [v] => Some(v),
            _ => None,
        }
    }

    /// Serializes the result as pretty-printed JSON.
    ///
    /// # Errors
    /// [`DpError::Export`] if serialization fails.
    pub fn to_json(&self) -> Result<String, DpError> {
        serde_json::to_string_pretty(self).map_err(|e| DpError::Export(e.to_string()))
    }

    /// Reads a result back from [`Self::to_json`] output.
    ///
    /// # Errors
    /// [`DpError::Export`] on malformed input.
    pub fn from_json(json: &str) -> Result<Self, DpError> {
        serde_json::from_str(json).map_err(|e| DpError::Export(e.to_string()))
    }
}
