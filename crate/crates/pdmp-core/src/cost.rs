//! Monte-Carlo cost evaluation of impulse strategies.
//!
//! The cost of a controlled run is the discounted running-cost integral
//! along the path plus a discounted lump cost at every intervention, plus a
//! terminal cost at the horizon when the horizon is finite:
//!
//! ```text
//! integral_0^H exp(-gamma t) c_R(X_t) dt
//!   + sum_(tau_n < H) exp(-gamma tau_n) c_I(X_(tau_n), X_(tau_n+))
//!   + [H finite] c_T(X_H)
//! ```
//!
//! With an infinite horizon the discount rate must be positive and the
//! integral is truncated once the discount factor falls below a fixed
//! floor; the neglected tail is bounded by `floor * sup|c_R| / gamma`.

use std::sync::Arc;

use rand::RngCore;

use crate::control::{simulate_controlled, ImpulseStrategy};
use crate::error::PdmpError;
use crate::model::PdmpModel;
use crate::quad::adaptive_simpson;
use crate::state::HybridState;
use crate::trajectory::{JumpKind, Trajectory};

/// Discount factor below which an infinite-horizon integral is truncated.
pub const DISCOUNT_TRUNCATION_FLOOR: f64 = 1e-14;

/// Cost structure of an impulse-control problem.
#[derive(Clone)]
pub struct CostSpec {
    /// Running cost rate `c_R` (cost per unit time).
    pub running: Arc<dyn Fn(&HybridState) -> f64 + Send + Sync>,
    /// Lump intervention cost `c_I(pre, restart)`.
    pub impulse: Arc<dyn Fn(&HybridState, &HybridState) -> f64 + Send + Sync>,
    /// Terminal cost `c_T`, charged at a finite horizon only.
    pub terminal: Arc<dyn Fn(&HybridState) -> f64 + Send + Sync>,
    /// Continuous discount rate, in `[0, 1)`.
    pub discount: f64,
    /// Time horizon; `f64::INFINITY` for the infinite-horizon criterion.
    pub horizon: f64,
}

impl std::fmt::Debug for CostSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CostSpec(gamma={}, horizon={})", self.discount, self.horizon)
    }
}

impl CostSpec {
    /// Builds and validates a cost specification.
    ///
    /// # Errors
    /// Rejects a discount outside `[0, 1)`, a nonpositive horizon, and the
    /// undiscounted infinite-horizon combination (its integral diverges for
    /// any positive running cost).
    pub fn new(
        running: Arc<dyn Fn(&HybridState) -> f64 + Send + Sync>,
        impulse: Arc<dyn Fn(&HybridState, &HybridState) -> f64 + Send + Sync>,
        terminal: Arc<dyn Fn(&HybridState) -> f64 + Send + Sync>,
        discount: f64,
        horizon: f64,
    ) -> Result<Self, PdmpError> {
        if !(0.0..1.0).contains(&discount) {
            return Err(PdmpError::InvalidCostSpec(format!(
                "discount {discount} outside [0, 1)"
            )));
        }
        if !(horizon > 0.0) {
            return Err(PdmpError::InvalidCostSpec(format!("horizon {horizon} is not positive")));
        }
        if horizon.is_infinite() && discount == 0.0 {
            return Err(PdmpError::InvalidCostSpec(
                "infinite horizon requires a positive discount rate".into(),
            ));
        }
        Ok(Self { running, impulse, terminal, discount, horizon })
    }

    /// Common case: constant running and impulse costs, no terminal cost.
    pub fn constant_rates(
        running: f64,
        impulse: f64,
        discount: f64,
        horizon: f64,
    ) -> Result<Self, PdmpError> {
        Self::new(
            Arc::new(move |_| running),
            Arc::new(move |_, _| impulse),
            Arc::new(|_| 0.0),
            discount,
            horizon,
        )
    }

    /// Simulation horizon realizing this criterion: the horizon itself when
    /// finite, else the truncation time where the discount factor reaches
    /// the floor.
    fn effective_horizon(&self) -> f64 {
        if self.horizon.is_finite() {
            self.horizon
        } else {
            -DISCOUNT_TRUNCATION_FLOOR.ln() / self.discount
        }
    }
}

/// Discounted pathwise cost of one controlled trajectory.
///
/// Exposed so cost bookkeeping can be tested on hand-built trajectories;
/// the Monte-Carlo estimators below average this functional over
/// independent runs.
pub fn trajectory_cost(
    model: &PdmpModel,
    costs: &CostSpec,
    traj: &Trajectory,
) -> Result<f64, PdmpError> {
    let gamma = costs.discount;
    let mut total = 0.0;
    for seg in &traj.segments {
        if seg.duration == 0.0 {
            continue;
        }
        let dynamics_cost = |s: f64| -> f64 {
            let x = model
                .flow_at(&seg.start_state, s)
                .expect("segment flow within recorded duration");
            (-gamma * (seg.start_time + s)).exp() * (costs.running)(&x)
        };
        total += adaptive_simpson(&dynamics_cost, 0.0, seg.duration, model.config().quad_tol);
    }
    for jump in &traj.jumps {
        if jump.kind == JumpKind::Impulse && jump.time < costs.horizon {
            total += (-gamma * jump.time).exp() * (costs.impulse)(&jump.pre, &jump.post);
        }
    }
    if costs.horizon.is_finite() && traj.end_time() >= costs.horizon {
        let end = traj.state_at(model, costs.horizon)?;
        total += (-gamma * costs.horizon).exp() * (costs.terminal)(&end);
    }
    Ok(total)
}

/// Monte-Carlo estimate of a strategy's expected cost from `x0`.
///
/// Runs `n_sims` independent controlled trajectories and returns the sample
/// mean and its standard error (zero when `n_sims` is one). Trajectories
/// are simulated to the cost horizon, truncated as described in the module
/// documentation when the horizon is infinite.
///
/// # Errors
/// Invalid cost specifications and zero `n_sims` are rejected; simulation
/// errors propagate.
pub fn evaluate_strategy_cost(
    model: &PdmpModel,
    strategy: &ImpulseStrategy,
    costs: &CostSpec,
    x0: &HybridState,
    n_sims: usize,
    rng: &mut dyn RngCore,
) -> Result<(f64, f64), PdmpError> {
    if n_sims == 0 {
        return Err(PdmpError::InvalidCostSpec("n_sims must be positive".into()));
    }
    if costs.horizon.is_infinite() && costs.discount == 0.0 {
        return Err(PdmpError::InvalidCostSpec(
            "infinite horizon requires a positive discount rate".into(),
        ));
    }
    let horizon = costs.effective_horizon();
    let mut samples = Vec::with_capacity(n_sims);
    for _ in 0..n_sims {
        let traj = simulate_controlled(model, strategy, x0, usize::MAX, horizon, rng)?;
        samples.push(trajectory_cost(model, costs, &traj)?);
    }
    Ok(mean_and_se(&samples))
}

/// Monte-Carlo estimate of the cost when never intervening.
///
/// Identical to [`evaluate_strategy_cost`] under the never-intervening
/// strategy, drawing from the generator in the same order.
pub fn evaluate_no_impulse_cost(
    model: &PdmpModel,
    costs: &CostSpec,
    x0: &HybridState,
    n_sims: usize,
    rng: &mut dyn RngCore,
) -> Result<(f64, f64), PdmpError> {
    evaluate_strategy_cost(model, &ImpulseStrategy::no_impulse(), costs, x0, n_sims, rng)
}

/// Sample mean and standard error of the mean.
pub fn mean_and_se(samples: &[f64]) -> (f64, f64) {
    let n = samples.len();
    assert!(n > 0, "mean of an empty sample");
    let mean = samples.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = samples.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}
