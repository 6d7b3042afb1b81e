//! Policy evaluation: exact linear-system solution and Monte-Carlo
//! estimators for the three cost criteria.

use nalgebra::{DMatrix, DVector};
use rand::RngCore;

use crate::error::MdpError;
use crate::mdp::FiniteMdp;
use crate::policy::Policy;
use crate::simulate::run_steps;

/// Residual bound (max norm) guaranteed by [`evaluate_policy_exact`].
pub const POLICY_EVAL_RESIDUAL_TOL: f64 = 1e-10;

/// Solves `V = c_π + γ P_π V` for a stationary deterministic policy by LU
/// factorization of `I - γ P_π`, followed by one step of iterative
/// refinement.
///
/// # Errors
/// Requires a valid model, a stationary deterministic admissible policy,
/// and `γ ∈ (0, 1)`; fails with [`MdpError::ResidualTooLarge`] if the
/// refined solution still leaves a residual above
/// [`POLICY_EVAL_RESIDUAL_TOL`].
pub fn evaluate_policy_exact(
    mdp: &FiniteMdp,
    policy: &Policy,
    gamma: f64,
) -> Result<Vec<f64>, MdpError> {
    mdp.ensure_valid()?;
    policy.validate_for(mdp)?;
    let table = match policy {
        Policy::StationaryDeterministic(table) => table,
        _ => {
            return Err(MdpError::InvalidPolicy(
                "exact evaluation requires a stationary deterministic policy".into(),
            ))
        }
    };
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(MdpError::InvalidArgument(format!("discount {gamma} outside (0, 1)")));
    }
    let n = mdp.n_states();
    let mut a = DMatrix::<f64>::identity(n, n);
    let mut b = DVector::<f64>::zeros(n);
    for s in 0..n {
        let action = table[s];
        mdp.for_each_successor(0, s, action, |s2, p| {
            a[(s, s2)] -= gamma * p;
        });
        b[s] = mdp.expected_cost(0, s, action);
    }
    let lu = a.clone().lu();
    let mut v = lu.solve(&b).ok_or(MdpError::Singular)?;
    let r = &b - &a * &v;
    if let Some(d) = lu.solve(&r) {
        v += d;
    }
    let residual = (&b - &a * &v).amax();
    if residual > POLICY_EVAL_RESIDUAL_TOL {
        return Err(MdpError::ResidualTooLarge {
            residual,
            tolerance: POLICY_EVAL_RESIDUAL_TOL,
        });
    }
    Ok(v.iter().copied().collect())
}

/// Monte-Carlo estimate of the total (undiscounted) cost over the full
/// finite horizon, terminal cost included. Returns the sample mean and its
/// standard error.
///
/// # Errors
/// Requires a finite horizon, a valid model, an admissible policy, and
/// `n_sims ≥ 1`.
pub fn evaluate_total_cost_mc(
    mdp: &FiniteMdp,
    policy: &Policy,
    s0: usize,
    n_sims: usize,
    rng: &mut dyn RngCore,
) -> Result<(f64, f64), MdpError> {
    let h = mdp.horizon.finite().ok_or_else(|| {
        MdpError::InvalidArgument("total-cost criterion needs a finite horizon".into())
    })?;
    prepare(mdp, policy, s0, n_sims)?;
    let mut samples = Vec::with_capacity(n_sims);
    for _ in 0..n_sims {
        let traj = run_steps(mdp, policy, s0, h, true, rng)?;
        samples.push(traj.total_cost());
    }
    Ok(mean_and_se(&samples))
}

/// Monte-Carlo estimate of the discounted cost `E[Σ γ^t c_t]`, truncated
/// after `truncation` stages for infinite-horizon models (finite horizons
/// stop at the horizon and charge the terminal cost). Use
/// [`suggested_truncation`] to bound the truncation bias.
///
/// # Errors
/// Requires a valid model, an admissible policy, `γ ∈ [0, 1)`,
/// `truncation ≥ 1`, and `n_sims ≥ 1`.
pub fn evaluate_discounted_mc(
    mdp: &FiniteMdp,
    policy: &Policy,
    s0: usize,
    gamma: f64,
    n_sims: usize,
    truncation: usize,
    rng: &mut dyn RngCore,
) -> Result<(f64, f64), MdpError> {
    if !(0.0..1.0).contains(&gamma) {
        return Err(MdpError::InvalidArgument(format!("discount {gamma} outside [0, 1)")));
    }
    if truncation == 0 {
        return Err(MdpError::InvalidArgument("truncation must be positive".into()));
    }
    prepare(mdp, policy, s0, n_sims)?;
    let (steps, charge) = match mdp.horizon.finite() {
        Some(h) if h <= truncation => (h, true),
        _ => (truncation, false),
    };
    let mut samples = Vec::with_capacity(n_sims);
    for _ in 0..n_sims {
        let traj = run_steps(mdp, policy, s0, steps, charge, rng)?;
        samples.push(traj.discounted_cost(gamma));
    }
    Ok(mean_and_se(&samples))
}

/// Monte-Carlo estimate of the average cost `E[(1/T) Σ_{t<T} c_t]` over
/// `h_trunc` stages (capped at a finite horizon), without terminal cost.
/// The estimator reports the truncated average; no claim is made about the
/// long-run limit.
///
/// # Errors
/// Requires a valid model, an admissible policy, `h_trunc ≥ 1`, and
/// `n_sims ≥ 1`.
pub fn evaluate_average_mc(
    mdp: &FiniteMdp,
    policy: &Policy,
    s0: usize,
    h_trunc: usize,
    n_sims: usize,
    rng: &mut dyn RngCore,
) -> Result<(f64, f64), MdpError> {
    if h_trunc == 0 {
        return Err(MdpError::InvalidArgument("h_trunc must be positive".into()));
    }
    prepare(mdp, policy, s0, n_sims)?;
    let steps = match mdp.horizon.finite() {
        Some(h) => h.min(h_trunc),
        None => h_trunc,
    };
    let mut samples = Vec::with_capacity(n_sims);
    for _ in 0..n_sims {
        let traj = run_steps(mdp, policy, s0, steps, false, rng)?;
        samples.push(traj.total_cost() / steps as f64);
    }
    Ok(mean_and_se(&samples))
}

/// Smallest truncation `T` with `γ^T · max|c| ≤ tol`, bounding the bias of
/// the truncated discounted estimator by `tol / (1 - γ)`.
pub fn suggested_truncation(mdp: &FiniteMdp, gamma: f64, tol: f64) -> usize {
    assert!(gamma > 0.0 && gamma < 1.0, "discount {gamma} outside (0, 1)");
    assert!(tol > 0.0, "tolerance must be positive");
    let mut max_cost = 0.0f64;
    for s in 0..mdp.n_states() {
        for &a in &mdp.constraints[s] {
            max_cost = max_cost.max(mdp.expected_cost(0, s, a).abs());
        }
    }
    if max_cost == 0.0 {
        return 1;
    }
    ((tol / max_cost).ln() / gamma.ln()).ceil().max(1.0) as usize
}

/// Q-values from a value vector under the discounted criterion:
/// `Q(s,a) = c̄(s,a) + γ Σ P(s'|s,a) v(s')`. Entries of inadmissible
/// actions are `+∞` so that any argmin over a full row stays inside the
/// constraint set.
///
/// # Errors
/// Requires `v` of state length and `γ ∈ [0, 1)`.
pub fn q_from_v_discounted(
    mdp: &FiniteMdp,
    v: &[f64],
    gamma: f64,
) -> Result<Vec<Vec<f64>>, MdpError> {
    if !(0.0..1.0).contains(&gamma) {
        return Err(MdpError::InvalidArgument(format!("discount {gamma} outside [0, 1)")));
    }
    q_table(mdp, 0, v, gamma)
}

/// Stage-`t` Q-values for finite-horizon recursions:
/// `Q_t(s,a) = c̄_t(s,a) + Σ P_t(s'|s,a) v_next(s')` with `v_next` the
/// stage-`t+1` values. Inadmissible entries are `+∞`.
///
/// # Errors
/// Requires `v_next` of state length.
pub fn q_from_v_stage(mdp: &FiniteMdp, t: usize, v_next: &[f64]) -> Result<Vec<Vec<f64>>, MdpError> {
    q_table(mdp, t, v_next, 1.0)
}

fn q_table(mdp: &FiniteMdp, t: usize, v: &[f64], gamma: f64) -> Result<Vec<Vec<f64>>, MdpError> {
    if v.len() != mdp.n_states() {
        return Err(MdpError::InvalidArgument(format!(
            "value vector has {} entries for {} states",
            v.len(),
            mdp.n_states()
        )));
    }
    let mut q = vec![vec![f64::INFINITY; mdp.n_actions()]; mdp.n_states()];
    for s in 0..mdp.n_states() {
        for &a in &mdp.constraints[s] {
            q[s][a] = mdp.expected_cost(t, s, a) + gamma * mdp.expected_value(t, s, a, v);
        }
    }
    Ok(q)
}

fn prepare(mdp: &FiniteMdp, policy: &Policy, s0: usize, n_sims: usize) -> Result<(), MdpError> {
    if n_sims == 0 {
        return Err(MdpError::InvalidArgument("n_sims must be positive".into()));
    }
    if s0 >= mdp.n_states() {
        return Err(MdpError::InvalidArgument(format!(
            "start state {s0} of {} states",
            mdp.n_states()
        )));
    }
    mdp.ensure_valid()?;
    policy.validate_for(mdp)
}

/// Sample mean and standard error of the mean (zero for a single sample).
pub fn mean_and_se(samples: &[f64]) -> (f64, f64) {
    let n = samples.len();
    assert!(n > 0, "mean of an empty sample");
    let mean = samples.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}
