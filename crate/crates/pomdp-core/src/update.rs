//! Bayes filtering over the hidden state.
//!
//! Each update has a stationary entry point matching the common case and a
//! stage-indexed variant (`*_at`) that honors stage overrides in the base
//! model. All updates assume the action is admissible at every state in the
//! belief's support; constraint handling lives in the belief graph.

use mdp_core::FiniteMdp;

use crate::belief::Belief;
use crate::error::PomdpError;
use crate::pomdp::FinitePomdp;

/// Pushes a belief through the transition law at stage `t`: the returned
/// vector holds the predicted probability of each successor state before
/// any observation is seen.
pub fn belief_predict_at(base: &FiniteMdp, t: usize, belief: &Belief, action: usize) -> Vec<f64> {
    assert_eq!(
        belief.len(),
        base.n_states(),
        "belief length must match the state count"
    );
    let mut predicted = vec![0.0; base.n_states()];
    for (s, &w) in belief.weights().iter().enumerate() {
        if w > 0.0 {
            base.for_each_successor(t, s, action, |s2, p| predicted[s2] += w * p);
        }
    }
    predicted
}

/// Stationary version of [`belief_predict_at`].
pub fn belief_predict(base: &FiniteMdp, belief: &Belief, action: usize) -> Vec<f64> {
    belief_predict_at(base, 0, belief, action)
}

/// Conditions a belief on an observation after taking `action` at stage `t`:
/// predict through the transition law, reweight each successor by the
/// observation probability, and normalize.
///
/// # Errors
/// [`PomdpError::ImpossibleEvidence`] when the observation has probability
/// zero under the predicted belief.
pub fn belief_update_at(
    pomdp: &FinitePomdp,
    t: usize,
    belief: &Belief,
    action: usize,
    omega: usize,
) -> Result<Belief, PomdpError> {
    let predicted = belief_predict_at(&pomdp.base, t, belief, action);
    let scores: Vec<f64> = predicted
        .iter()
        .enumerate()
        .map(|(s2, &p)| p * pomdp.obs_prob(s2, action, omega))
        .collect();
    Belief::normalized(
        scores,
        &format!("observation {omega} has probability zero after action {action}"),
    )
}

/// Stationary version of [`belief_update_at`].
///
/// # Errors
/// [`PomdpError::ImpossibleEvidence`] when the observation has probability
/// zero under the predicted belief.
pub fn belief_update(
    pomdp: &FinitePomdp,
    belief: &Belief,
    action: usize,
    omega: usize,
) -> Result<Belief, PomdpError> {
    belief_update_at(pomdp, 0, belief, action, omega)
}

/// Conditions a belief on evidence supplied as one likelihood value per
/// successor state. This covers observation models that are not finite
/// tables, such as densities of continuous measurements evaluated at the
/// observed value.
///
/// # Errors
/// [`PomdpError::Shape`] when the likelihood vector has the wrong length,
/// [`PomdpError::ImpossibleEvidence`] when every successor with positive
/// predicted mass has likelihood zero.
pub fn belief_update_with_likelihood_at(
    base: &FiniteMdp,
    t: usize,
    belief: &Belief,
    action: usize,
    likelihood: &[f64],
) -> Result<Belief, PomdpError> {
    if likelihood.len() != base.n_states() {
        return Err(PomdpError::Shape(format!(
            "{} likelihood values for {} states",
            likelihood.len(),
            base.n_states()
        )));
    }
    let predicted = belief_predict_at(base, t, belief, action);
    let scores: Vec<f64> = predicted
        .iter()
        .zip(likelihood)
        .map(|(&p, &l)| p * l)
        .collect();
    Belief::normalized(
        scores,
        &format!("the evidence has likelihood zero after action {action}"),
    )
}

/// Stationary version of [`belief_update_with_likelihood_at`].
///
/// # Errors
/// Same as the stage-indexed variant.
pub fn belief_update_with_likelihood(
    base: &FiniteMdp,
    belief: &Belief,
    action: usize,
    likelihood: &[f64],
) -> Result<Belief, PomdpError> {
    belief_update_with_likelihood_at(base, 0, belief, action, likelihood)
}

/// Enumerates the possible one-step belief transitions at stage `t`: every
/// observation with positive probability, its probability given the current
/// belief and action, and the posterior belief it leads to.
///
/// The returned probabilities sum to one when the observation rows do.
pub fn belief_transition_at(
    pomdp: &FinitePomdp,
    t: usize,
    belief: &Belief,
    action: usize,
) -> Vec<(usize, f64, Belief)> {
    let predicted = belief_predict_at(&pomdp.base, t, belief, action);
    let mut branches = Vec::new();
    for omega in 0..pomdp.n_observations() {
        let scores: Vec<f64> = predicted
            .iter()
            .enumerate()
            .map(|(s2, &p)| p * pomdp.obs_prob(s2, action, omega))
            .collect();
        let mass: f64 = scores.iter().sum();
        if mass > 0.0 {
            let posterior = Belief::normalized(scores, "positive-mass branch")
                .expect("normalizing a positive-mass posterior");
            branches.push((omega, mass, posterior));
        }
    }
    branches
}

/// Stationary version of [`belief_transition_at`].
pub fn belief_transition(
    pomdp: &FinitePomdp,
    belief: &Belief,
    action: usize,
) -> Vec<(usize, f64, Belief)> {
    belief_transition_at(pomdp, 0, belief, action)
}

/// Expected stage cost of moving between two beliefs at stage `t`: the cost
/// table averaged over the current belief and, independently, the next one.
/// Per-pair cost tables ignore the successor, so only the current belief
/// enters.
pub fn belief_cost_at(
    pomdp: &FinitePomdp,
    t: usize,
    belief: &Belief,
    action: usize,
    next: &Belief,
) -> f64 {
    let base = &pomdp.base;
    if let mdp_core::CostModel::PerPair(c) = base.costs_at(t) {
        return belief.expect(|s| c[s][action]);
    }
    let mut total = 0.0;
    for (s, &w) in belief.weights().iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        for (s2, &w2) in next.weights().iter().enumerate() {
            if w2 > 0.0 {
                total += w * w2 * base.step_cost(t, s, action, s2);
            }
        }
    }
    total
}

/// Stationary version of [`belief_cost_at`].
pub fn belief_cost(pomdp: &FinitePomdp, belief: &Belief, action: usize, next: &Belief) -> f64 {
    belief_cost_at(pomdp, 0, belief, action, next)
}
