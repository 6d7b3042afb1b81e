use serde::{Deserialize, Serialize};

use crate::error::PomdpError;

/// Tolerance on the total mass of a probability vector over states.
pub const BELIEF_SUM_TOL: f64 = 1e-12;

/// Resolution used when deduplicating beliefs: weights that agree to twelve
/// decimal places index the same graph node.
const QUANT_SCALE: f64 = 1e12;

/// A probability distribution over the hidden states of a model.
///
/// Weights are kept in state order, are non-negative, and sum to one within
/// [`BELIEF_SUM_TOL`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Belief {
    weights: Vec<f64>,
}

impl Belief {
    /// Builds a belief from raw weights, checking mass and sign.
    pub fn new(weights: Vec<f64>) -> Result<Self, PomdpError> {
        if weights.is_empty() {
            return Err(PomdpError::InvalidArgument(
                "a belief needs at least one state".into(),
            ));
        }
        let mut total = 0.0;
        for (s, &w) in weights.iter().enumerate() {
            if !w.is_finite() || w < 0.0 {
                return Err(PomdpError::Invalid(format!(
                    "belief weight for state {s} is {w}, expected a finite non-negative value"
                )));
            }
            total += w;
        }
        if (total - 1.0).abs() > BELIEF_SUM_TOL {
            return Err(PomdpError::Invalid(format!(
                "belief weights sum to {total}, expected 1"
            )));
        }
        Ok(Self { weights })
    }

    /// A point mass on `state` over `n_states` states.
    pub fn dirac(n_states: usize, state: usize) -> Result<Self, PomdpError> {
        if state >= n_states {
            return Err(PomdpError::InvalidArgument(format!(
                "dirac state {state} is out of range for {n_states} states"
            )));
        }
        let mut weights = vec![0.0; n_states];
        weights[state] = 1.0;
        Ok(Self { weights })
    }

    /// The uniform distribution over `n_states` states.
    pub fn uniform(n_states: usize) -> Result<Self, PomdpError> {
        if n_states == 0 {
            return Err(PomdpError::InvalidArgument(
                "a belief needs at least one state".into(),
            ));
        }
        Ok(Self {
            weights: vec![1.0 / n_states as f64; n_states],
        })
    }

    /// Normalizes raw non-negative scores into a belief.
    ///
    /// Returns `ImpossibleEvidence` when every score is zero, which is how a
    /// Bayes update signals that the conditioning event has probability zero.
    pub fn normalized(scores: Vec<f64>, context: &str) -> Result<Self, PomdpError> {
        let total: f64 = scores.iter().sum();
        if !(total > 0.0) || !total.is_finite() {
            return Err(PomdpError::ImpossibleEvidence(context.to_string()));
        }
        Self::new(scores.iter().map(|w| w / total).collect())
    }

    /// Number of states the belief ranges over.
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    /// True when the belief covers zero states; never true for a valid belief.
    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// The probability assigned to `state`.
    pub fn weight(&self, state: usize) -> f64 {
        self.weights[state]
    }

    /// All weights in state order.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// States carrying positive probability.
    pub fn support(&self) -> Vec<usize> {
        (0..self.weights.len())
            .filter(|&s| self.weights[s] > 0.0)
            .collect()
    }

    /// Expectation of a per-state function under the belief.
    pub fn expect(&self, f: impl Fn(usize) -> f64) -> f64 {
        self.weights
            .iter()
            .enumerate()
            .map(|(s, &w)| w * f(s))
            .sum()
    }

    /// A fixed-point key identifying the belief up to twelve decimals, used
    /// to merge numerically equal beliefs during graph expansion.
    pub fn quantized_key(&self) -> Vec<u64> {
        self.weights
            .iter()
            .map(|&w| (w * QUANT_SCALE).round() as u64)
            .collect()
    }

    /// Draws a state from the belief by inverting its CDF.
    pub fn sample(&self, rng: &mut dyn rand::RngCore) -> usize {
        use rand::Rng;
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        let mut last_positive = 0;
        for (s, &w) in self.weights.iter().enumerate() {
            if w > 0.0 {
                last_positive = s;
                acc += w;
                if u < acc {
                    return s;
                }
            }
        }
        last_positive
    }
}
