use mdp_core::sample_successor;
use rand::{Rng, RngCore};

use crate::belief::Belief;
use crate::error::PomdpError;
use crate::graph::BeliefPolicy;
use crate::pomdp::FinitePomdp;
use crate::update::belief_update_at;

/// One rollout of a belief policy against the hidden chain.
///
/// `hidden` and `beliefs` have one more entry than `actions`,
/// `observations`, and `costs`. Per-pair cost tables record the expected
/// stage cost of each step instead of a realized one, matching the base
/// model's convention.
#[derive(Debug, Clone)]
pub struct PomdpTrajectory {
    /// Hidden states, starting at the sampled initial state.
    pub hidden: Vec<usize>,
    /// Actions taken.
    pub actions: Vec<usize>,
    /// Observations seen after each action.
    pub observations: Vec<usize>,
    /// Stage cost of each step.
    pub costs: Vec<f64>,
    /// Filtered beliefs, starting at the initial belief.
    pub beliefs: Vec<Belief>,
    /// Terminal cost of the final hidden state.
    pub terminal_cost: f64,
}

impl PomdpTrajectory {
    /// Sum of the stage costs plus the terminal cost.
    pub fn total_cost(&self) -> f64 {
        self.costs.iter().sum::<f64>() + self.terminal_cost
    }
}

/// Draws an observation from the row of `(s2, action)` by inverting its CDF.
pub fn sample_observation(
    pomdp: &FinitePomdp,
    s2: usize,
    action: usize,
    rng: &mut dyn RngCore,
) -> usize {
    let row = &pomdp.observation[s2][action];
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (omega, &p) in row.iter().enumerate() {
        if p > 0.0 {
            last_positive = omega;
            acc += p;
            if u < acc {
                return omega;
            }
        }
    }
    last_positive
}

/// Simulates one episode: the hidden state starts from the initial belief
/// and follows the base dynamics, observations are drawn from the
/// observation table, and the belief is filtered by Bayes updates. The
/// episode runs for as many stages as the policy covers and then charges
/// the terminal cost of the final hidden state.
///
/// # Errors
/// [`PomdpError::PolicyGap`] when the policy does not cover a reached
/// belief, [`PomdpError::ImpossibleEvidence`] when a drawn observation has
/// probability zero under the filtered belief, which indicates an invalid
/// model.
pub fn pomdp_simulate(
    pomdp: &FinitePomdp,
    policy: &BeliefPolicy,
    rng: &mut dyn RngCore,
) -> Result<PomdpTrajectory, PomdpError> {
    let steps = policy.n_stages();
    let base = &pomdp.base;
    let mut belief = pomdp.initial_belief.clone();
    let mut state = belief.sample(rng);

    let mut hidden = Vec::with_capacity(steps + 1);
    let mut actions = Vec::with_capacity(steps);
    let mut observations = Vec::with_capacity(steps);
    let mut costs = Vec::with_capacity(steps);
    let mut beliefs = Vec::with_capacity(steps + 1);
    hidden.push(state);
    beliefs.push(belief.clone());

    for t in 0..steps {
        let action = policy
            .action(t, &belief)
            .ok_or(PomdpError::PolicyGap { stage: t })?;
        let next = sample_successor(base, t, state, action, rng);
        let omega = sample_observation(pomdp, next, action, rng);
        belief = belief_update_at(pomdp, t, &belief, action, omega)?;

        actions.push(action);
        observations.push(omega);
        costs.push(base.step_cost(t, state, action, next));
        hidden.push(next);
        beliefs.push(belief.clone());
        state = next;
    }

    Ok(PomdpTrajectory {
        hidden,
        actions,
        observations,
        costs,
        beliefs,
        terminal_cost: base.terminal_cost(state),
    })
}
