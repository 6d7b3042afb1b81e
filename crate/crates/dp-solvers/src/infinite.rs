//! Value iteration and policy iteration for discounted infinite-horizon
//! models.

use mdp_core::{evaluate_policy_exact, FiniteMdp, Policy};

use crate::bellman::{check_stationary, stage_greedy};
use crate::error::DpError;
use crate::result::SolveResult;

/// Improvement-round cap after which policy iteration reports
/// non-termination. Exact policy iteration stabilizes in at most
/// `|A|^|S|` rounds; hitting the cap indicates a defect, not slowness.
pub const POLICY_ITERATION_CAP: usize = 1000;

/// Solves a discounted model by value iteration started from the zero
/// vector: synchronous Bellman sweeps until the max change drops to
/// `ε(1-γ)/γ`, then greedy policy extraction from the final iterate. The
/// returned residual is the last max change.
///
/// # Errors
/// Requires an infinite horizon, a valid model without stage overrides,
/// `γ ∈ (0, 1)`, and `ε > 0`.
pub fn value_iteration(mdp: &FiniteMdp, gamma: f64, epsilon: f64) -> Result<SolveResult, DpError> {
    value_iteration_warm(mdp, gamma, epsilon, vec![0.0; mdp.n_states()])
}

/// [`value_iteration`] with a caller-provided starting vector.
///
/// # Errors
/// As [`value_iteration`], plus a shape check on `v0`.
pub fn value_iteration_warm(
    mdp: &FiniteMdp,
    gamma: f64,
    epsilon: f64,
    v0: Vec<f64>,
) -> Result<SolveResult, DpError> {
    check_infinite_horizon(mdp)?;
    check_discount(gamma)?;
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(DpError::InvalidArgument(format!(
            "tolerance {epsilon} must be positive and finite"
        )));
    }
    if v0.len() != mdp.n_states() {
        return Err(DpError::InvalidArgument(format!(
            "start vector has {} entries for {} states",
            v0.len(),
            mdp.n_states()
        )));
    }

    let threshold = epsilon * (1.0 - gamma) / gamma;
    let mut v = v0;
    let mut delta = f64::INFINITY;
    let mut iterations = 0;
    while delta > threshold {
        let (next, _) = stage_greedy(mdp, 0, gamma, &v);
        delta = v
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        v = next;
        iterations += 1;
    }
    let (_, actions) = stage_greedy(mdp, 0, gamma, &v);

    Ok(SolveResult {
        values: vec![v],
        policy: Policy::StationaryDeterministic(actions),
        iterations,
        residual: delta,
    })
}

/// Solves a discounted model by policy iteration from `pi0`: exact
/// evaluation of the current policy alternating with greedy improvement,
/// until the policy stops changing. The returned residual is the max-norm
/// Bellman residual of the final values, bounded by the exact evaluator's
/// guarantee.
///
/// # Errors
/// As [`value_iteration`] for the model and discount;
/// [`DpError::Model`] for an inadmissible or non-deterministic `pi0`;
/// [`DpError::NoTermination`] after [`POLICY_ITERATION_CAP`] rounds.
pub fn policy_iteration(
    mdp: &FiniteMdp,
    gamma: f64,
    pi0: &Policy,
) -> Result<SolveResult, DpError> {
    check_infinite_horizon(mdp)?;
    check_discount(gamma)?;
    pi0.validate_for(mdp)?;
    let mut table = match pi0 {
        Policy::StationaryDeterministic(table) => table.clone(),
        _ => {
            return Err(DpError::InvalidArgument(
                "policy iteration needs a stationary deterministic start".into(),
            ))
        }
    };

    for round in 1..=POLICY_ITERATION_CAP {
        let policy = Policy::StationaryDeterministic(table.clone());
        let v = evaluate_policy_exact(mdp, &policy, gamma)?;
        let (backup, improved) = stage_greedy(mdp, 0, gamma, &v);
        if improved == table {
            let residual = v
                .iter()
                .zip(&backup)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            return Ok(SolveResult {
                values: vec![v],
                policy,
                iterations: round,
                residual,
            });
        }
        table = improved;
    }
    Err(DpError::NoTermination(POLICY_ITERATION_CAP))
}

fn check_infinite_horizon(mdp: &FiniteMdp) -> Result<(), DpError> {
    if mdp.horizon.finite().is_some() {
        return Err(DpError::InvalidArgument(
            "infinite-horizon solver on a finite-horizon model".into(),
        ));
    }
    check_stationary(mdp)
}

fn check_discount(gamma: f64) -> Result<(), DpError> {
    if gamma > 0.0 && gamma < 1.0 {
        Ok(())
    } else {
        Err(DpError::InvalidArgument(format!(
            "discount {gamma} outside (0, 1)"
        )))
    }
}
