//! The Bellman optimality operator and greedy policy extraction.

use mdp_core::FiniteMdp;

use crate::error::DpError;

/// One synchronous sweep of the Bellman optimality operator at stage `t`:
/// for every state, the minimum over admissible actions of
/// `c̄_t(s,a) + γ Σ P_t(s'|s,a) v(s')`, together with the minimizing
/// action (lowest index on ties; constraint sets are kept sorted).
pub(crate) fn stage_greedy(
    mdp: &FiniteMdp,
    t: usize,
    gamma: f64,
    v: &[f64],
) -> (Vec<f64>, Vec<usize>) {
    let n = mdp.n_states();
    let mut values = vec![0.0; n];
    let mut actions = vec![0usize; n];
    for s in 0..n {
        let mut best = f64::INFINITY;
        let mut best_action = mdp.constraints[s][0];
        for &a in &mdp.constraints[s] {
            let q = mdp.expected_cost(t, s, a) + gamma * mdp.expected_value(t, s, a, v);
            if q < best {
                best = q;
                best_action = a;
            }
        }
        values[s] = best;
        actions[s] = best_action;
    }
    (values, actions)
}

/// Applies the discounted Bellman optimality operator once to `v` using
/// the stationary tables. Exposed so that tests and callers can replay the
/// exact sweep arithmetic of [`value_iteration`](crate::value_iteration).
///
/// # Errors
/// Requires a valid model without stage overrides and `v` of state length.
pub fn bellman_backup(mdp: &FiniteMdp, gamma: f64, v: &[f64]) -> Result<Vec<f64>, DpError> {
    check_stationary_input(mdp, v)?;
    Ok(stage_greedy(mdp, 0, gamma, v).0)
}

/// Greedy stationary deterministic decision rule with respect to `v`
/// under the discounted criterion, lowest action index on ties.
///
/// # Errors
/// As [`bellman_backup`].
pub fn greedy_policy(mdp: &FiniteMdp, gamma: f64, v: &[f64]) -> Result<Vec<usize>, DpError> {
    check_stationary_input(mdp, v)?;
    Ok(stage_greedy(mdp, 0, gamma, v).1)
}

/// Rejects models whose stage overrides would make a stationary sweep
/// ambiguous, plus basic shape mismatches.
pub(crate) fn check_stationary(mdp: &FiniteMdp) -> Result<(), DpError> {
    mdp.ensure_valid()?;
    if !mdp.stage_transitions.is_empty() || !mdp.stage_costs.is_empty() {
        return Err(DpError::InvalidArgument(
            "stationary solver on a model with stage overrides".into(),
        ));
    }
    Ok(())
}

fn check_stationary_input(mdp: &FiniteMdp, v: &[f64]) -> Result<(), DpError> {
    check_stationary(mdp)?;
    if v.len() != mdp.n_states() {
        return Err(DpError::InvalidArgument(format!(
            "value vector has {} entries for {} states",
            v.len(),
            mdp.n_states()
        )));
    }
    Ok(())
}
