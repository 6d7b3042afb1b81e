//! Sampled one-step access to the Bayes-adaptive process, for planners
//! that never enumerate the hyperstate space.

use mdp_core::{sample_successor, ROW_SUM_TOL};
use rand::{Rng, RngCore};
use rl_solvers::GenerativeModel;

use crate::error::BamdpError;
use crate::hyper::{BayesAdaptiveMdp, HyperState};

/// Generative view of a [`BayesAdaptiveMdp`] from a fixed start state.
///
/// Episodes start at the prior counts. A state counts as terminal when it
/// absorbs at zero cost under the base law and no row of it is being
/// learned; its terminal cost is then charged once, on entry.
pub struct BamdpModel<'a> {
    model: &'a BayesAdaptiveMdp,
    start: HyperState,
    terminal: Vec<bool>,
}

impl<'a> BamdpModel<'a> {
    /// Wraps a validated model, starting episodes at `(start, prior)`.
    ///
    /// # Errors
    /// [`BamdpError::InvalidArgument`] for an out-of-range start state,
    /// plus anything [`BayesAdaptiveMdp::ensure_valid`] raises.
    pub fn new(model: &'a BayesAdaptiveMdp, start: usize) -> Result<Self, BamdpError> {
        model.ensure_valid()?;
        let start = model.initial_hyperstate(start)?;
        let base = &model.base;
        let terminal = (0..base.n_states())
            .map(|s| {
                let stays = base.constraints[s]
                    .iter()
                    .all(|&a| base.transition_prob(0, s, a, s) >= 1.0 - ROW_SUM_TOL);
                let free = base.constraints[s].iter().any(|&a| base.expected_cost(0, s, a) == 0.0);
                let learned = base.constraints[s].iter().any(|&a| model.row_index(s, a).is_some());
                stays && free && !learned
            })
            .collect();
        Ok(Self { model, start, terminal })
    }

    /// The wrapped model.
    pub fn model(&self) -> &BayesAdaptiveMdp {
        self.model
    }
}

impl GenerativeModel for BamdpModel<'_> {
    type State = HyperState;
    type Action = usize;

    fn reset(&self, _rng: &mut dyn RngCore) -> HyperState {
        self.start.clone()
    }

    fn step(&self, state: &HyperState, action: &usize, rng: &mut dyn RngCore) -> (HyperState, f64) {
        if self.terminal[state.state] {
            return (state.clone(), 0.0);
        }
        let base = &self.model.base;
        let next = match self.model.row_index(state.state, *action) {
            Some(k) => {
                let row = &state.counts[k];
                let total: u64 = row.iter().sum();
                assert!(total > 0, "exercised unknown row with zero counts");
                let mut draw = rng.gen::<f64>() * total as f64;
                let mut pick = row.len() - 1;
                for (j, &c) in row.iter().enumerate() {
                    draw -= c as f64;
                    if draw < 0.0 && c > 0 {
                        pick = j;
                        break;
                    }
                }
                while row[pick] == 0 {
                    pick -= 1;
                }
                let mut counts = state.counts.clone();
                counts[k][pick] += 1;
                HyperState { state: self.model.rows[k].successors[pick], counts }
            }
            None => {
                let s2 = sample_successor(base, 0, state.state, *action, rng);
                HyperState { state: s2, counts: state.counts.clone() }
            }
        };
        let mut cost = base.step_cost(0, state.state, *action, next.state);
        if self.terminal[next.state] {
            cost += base.terminal_cost(next.state);
        }
        (next, cost)
    }

    fn admissible(&self, state: &HyperState) -> Vec<usize> {
        self.model.base.constraints[state.state].clone()
    }

    fn is_terminal(&self, state: &HyperState) -> bool {
        self.terminal[state.state]
    }

    fn horizon(&self) -> Option<usize> {
        self.model.base.horizon.finite()
    }
}
