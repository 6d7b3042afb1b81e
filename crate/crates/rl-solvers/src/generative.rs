//! Generative access to a decision process: one sampled transition at a
//! time, with no direct reads of the transition law.

use std::fmt::Debug;

use mdp_core::{sample_successor, FiniteMdp, ROW_SUM_TOL};
use rand::{Rng, RngCore};

use crate::error::RlError;

/// A simulator of one-step transitions, the only model access Q-learning
/// and Monte-Carlo tree search require.
pub trait GenerativeModel {
    type State: Clone + PartialEq + Debug;
    type Action: Clone + PartialEq + Debug;

    /// Draws a start state for one learning episode.
    fn reset(&self, rng: &mut dyn RngCore) -> Self::State;

    /// Samples one transition, returning the successor state and the
    /// incurred cost.
    ///
    /// Callers only pass actions from [`admissible`](Self::admissible);
    /// terminal states absorb at zero cost.
    fn step(
        &self,
        state: &Self::State,
        action: &Self::Action,
        rng: &mut dyn RngCore,
    ) -> (Self::State, f64);

    /// Actions available in `state`, in a stable order.
    fn admissible(&self, state: &Self::State) -> Vec<Self::Action>;

    /// Flags states in which the decision process has stopped.
    fn is_terminal(&self, state: &Self::State) -> bool;

    /// Number of decision stages when the process has a fixed horizon.
    fn horizon(&self) -> Option<usize> {
        None
    }

    /// Discount factor attached to the model's objective, if any.
    fn discount(&self) -> Option<f64> {
        None
    }
}

/// Generative view of a stationary [`FiniteMdp`].
///
/// Episodes start uniformly over `starts`. A state counts as terminal when
/// every admissible action keeps the process there and the cheapest of
/// those actions is free; its terminal cost is then charged once, on
/// entry. Under an undiscounted finite-horizon objective this equals the
/// cost of absorbing in the state and paying its terminal cost at the
/// horizon.
pub struct FiniteMdpModel<'a> {
    mdp: &'a FiniteMdp,
    starts: Vec<usize>,
    terminal: Vec<bool>,
}

impl<'a> FiniteMdpModel<'a> {
    /// Wraps a validated stationary MDP.
    ///
    /// # Errors
    /// [`RlError::Model`] when the MDP fails validation, and
    /// [`RlError::InvalidArgument`] for stage-indexed overrides or a bad
    /// start set.
    pub fn new(mdp: &'a FiniteMdp, starts: Vec<usize>) -> Result<Self, RlError> {
        mdp.ensure_valid()?;
        if !mdp.stage_transitions.is_empty() || !mdp.stage_costs.is_empty() {
            return Err(RlError::InvalidArgument(
                "generative wrapper requires a stationary model; lift the stage into the state instead".into(),
            ));
        }
        if starts.is_empty() {
            return Err(RlError::InvalidArgument("empty start-state set".into()));
        }
        if let Some(&s) = starts.iter().find(|&&s| s >= mdp.n_states()) {
            return Err(RlError::InvalidArgument(format!(
                "start state {s} of {} states",
                mdp.n_states()
            )));
        }
        let terminal = (0..mdp.n_states()).map(|s| absorbs_for_free(mdp, s)).collect();
        Ok(Self { mdp, starts, terminal })
    }

    /// The wrapped model.
    pub fn mdp(&self) -> &FiniteMdp {
        self.mdp
    }
}

fn absorbs_for_free(mdp: &FiniteMdp, s: usize) -> bool {
    let stays = mdp.constraints[s]
        .iter()
        .all(|&a| mdp.transition_prob(0, s, a, s) >= 1.0 - ROW_SUM_TOL);
    let free = mdp.constraints[s].iter().any(|&a| mdp.expected_cost(0, s, a) == 0.0);
    stays && free
}

impl GenerativeModel for FiniteMdpModel<'_> {
    type State = usize;
    type Action = usize;

    fn reset(&self, rng: &mut dyn RngCore) -> usize {
        self.starts[rng.gen_range(0..self.starts.len())]
    }

    fn step(&self, state: &usize, action: &usize, rng: &mut dyn RngCore) -> (usize, f64) {
        if self.terminal[*state] {
            return (*state, 0.0);
        }
        let next = sample_successor(self.mdp, 0, *state, *action, rng);
        let mut cost = self.mdp.step_cost(0, *state, *action, next);
        if self.terminal[next] {
            cost += self.mdp.terminal_cost(next);
        }
        (next, cost)
    }

    fn admissible(&self, state: &usize) -> Vec<usize> {
        self.mdp.constraints[*state].clone()
    }

    fn is_terminal(&self, state: &usize) -> bool {
        self.terminal[*state]
    }

    fn horizon(&self) -> Option<usize> {
        self.mdp.horizon.finite()
    }
}

/// Rollout depth that makes truncation harmless: the remaining horizon when
/// one is known, otherwise the first depth at which the discounted tail
/// weight drops below `tail_tol`.
///
/// # Panics
/// For an infinite horizon, `gamma` must lie in (0, 1) and `tail_tol` in
/// (0, 1).
pub fn suggested_rollout_depth(horizon: Option<usize>, gamma: f64, tail_tol: f64) -> usize {
    if let Some(h) = horizon {
        return h.max(1);
    }
    assert!(gamma > 0.0 && gamma < 1.0, "discounted depth needs gamma in (0, 1)");
    assert!(tail_tol > 0.0 && tail_tol < 1.0, "tail tolerance must lie in (0, 1)");
    let depth = (tail_tol.ln() / gamma.ln()).ceil();
    (depth as usize).max(1)
}
