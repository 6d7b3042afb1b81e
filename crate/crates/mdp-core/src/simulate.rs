//! Trajectory simulation under a policy.

use std::io;

use rand::distributions::{Distribution, Uniform};
use rand::RngCore;

use crate::error::MdpError;
use crate::mdp::{FiniteMdp, Horizon, Transitions};
use crate::policy::Policy;

/// One decision stage of a simulated trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryStep {
    /// Stage index.
    pub t: usize,
    /// State at the start of the stage.
    pub state: usize,
    /// Action taken.
    pub action: usize,
    /// Stage cost charged (expected stage cost under per-pair cost
    /// tables).
    pub cost: f64,
}

/// A simulated trajectory: the visited stages plus the terminal outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    /// Stages in order.
    pub steps: Vec<TrajectoryStep>,
    /// State after the last stage.
    pub terminal_state: usize,
    /// Terminal cost charged (zero when the run was truncated before the
    /// horizon or the horizon is infinite).
    pub terminal_cost: f64,
}

impl TrajectoryRecord {
    /// Sum of all stage costs plus the terminal cost.
    pub fn total_cost(&self) -> f64 {
        self.steps.iter().map(|s| s.cost).sum::<f64>() + self.terminal_cost
    }

    /// Discounted cost `Σ γ^t c_t + γ^H C` of the recorded run.
    pub fn discounted_cost(&self, gamma: f64) -> f64 {
        let mut total = 0.0;
        for step in &self.steps {
            total += gamma.powi(step.t as i32) * step.cost;
        }
        total + gamma.powi(self.steps.len() as i32) * self.terminal_cost
    }

    /// Writes the trajectory as CSV with columns `t,state,action,cost`,
    /// ending with a terminal row whose action column is empty.
    ///
    /// # Errors
    /// [`MdpError::Export`] on write failure.
    pub fn to_csv<W: io::Write>(&self, mdp: &FiniteMdp, writer: W) -> Result<(), MdpError> {
        let mut out = csv::Writer::from_writer(writer);
        let fail = |e: csv::Error| MdpError::Export(e.to_string());
        out.write_record(["t", "state", "action", "cost"]).map_err(fail)?;
        for step in &self.steps {
            out.write_record([
                step.t.to_string(),
                mdp.state_labels[step.state].clone(),
                mdp.action_labels[step.action].clone(),
                format!("{}", step.cost),
            ])
            .map_err(fail)?;
        }
        out.write_record([
            self.steps.len().to_string(),
            mdp.state_labels[self.terminal_state].clone(),
            String::new(),
            format!("{}", self.terminal_cost),
        ])
        .map_err(fail)?;
        out.flush().map_err(|e| MdpError::Export(e.to_string()))
    }
}

/// Simulates one trajectory of a finite-horizon MDP under a policy,
/// charging the terminal cost at the horizon.
///
/// # Errors
/// [`MdpError::InvalidArgument`] for an infinite horizon or an out-of-range
/// start state; [`MdpError::Invalid`] if the model fails validation;
/// [`MdpError::InvalidPolicy`] for an inadmissible policy.
pub fn simulate_policy(
    mdp: &FiniteMdp,
    policy: &Policy,
    s0: usize,
    rng: &mut dyn RngCore,
) -> Result<TrajectoryRecord, MdpError> {
    let h = mdp.horizon.finite().ok_or_else(|| {
        MdpError::InvalidArgument("simulate_policy needs a finite horizon; use simulate_policy_truncated".into())
    })?;
    mdp.ensure_valid()?;
    policy.validate_for(mdp)?;
    check_start(mdp, s0)?;
    run_steps(mdp, policy, s0, h, true, rng)
}

/// Simulates `steps` stages, or up to the horizon if that is sooner. The
/// terminal cost is charged only if a finite horizon is fully reached.
///
/// # Errors
/// As [`simulate_policy`], minus the finite-horizon requirement.
pub fn simulate_policy_truncated(
    mdp: &FiniteMdp,
    policy: &Policy,
    s0: usize,
    steps: usize,
    rng: &mut dyn RngCore,
) -> Result<TrajectoryRecord, MdpError> {
    mdp.ensure_valid()?;
    policy.validate_for(mdp)?;
    check_start(mdp, s0)?;
    let (n, charge) = match mdp.horizon {
        Horizon::Finite(h) if h <= steps => (h, true),
        _ => (steps, false),
    };
    run_steps(mdp, policy, s0, n, charge, rng)
}

fn check_start(mdp: &FiniteMdp, s0: usize) -> Result<(), MdpError> {
    if s0 >= mdp.n_states() {
        return Err(MdpError::InvalidArgument(format!(
            "start state {s0} of {} states",
            mdp.n_states()
        )));
    }
    Ok(())
}

/// Inner loop shared by the simulators and the Monte-Carlo evaluators; the
/// callers have already validated the model, policy, and start state.
pub(crate) fn run_steps(
    mdp: &FiniteMdp,
    policy: &Policy,
    s0: usize,
    n_steps: usize,
    charge_terminal: bool,
    rng: &mut dyn RngCore,
) -> Result<TrajectoryRecord, MdpError> {
    let mut steps = Vec::with_capacity(n_steps);
    let mut state = s0;
    for t in 0..n_steps {
        let action = policy.action(t, state, rng)?;
        if !mdp.constraints[state].contains(&action) {
            return Err(MdpError::InvalidPolicy(format!(
                "action {action} not admissible in state {state} at stage {t}"
            )));
        }
        let next = sample_successor(mdp, t, state, action, rng);
        let cost = mdp.step_cost(t, state, action, next);
        steps.push(TrajectoryStep { t, state, action, cost });
        state = next;
    }
    let terminal_cost = if charge_terminal { mdp.terminal_cost(state) } else { 0.0 };
    Ok(TrajectoryRecord { steps, terminal_state: state, terminal_cost })
}

/// Draws a successor state from the transition row of `(s, a)` at stage `t`.
///
/// Inverse-CDF draw along the transition row. Validation has bounded the
/// row-sum error by [`crate::mdp::ROW_SUM_TOL`], so falling back to the
/// last positive entry when the draw exceeds the accumulated mass
/// introduces no measurable bias.
pub fn sample_successor(
    mdp: &FiniteMdp,
    t: usize,
    s: usize,
    a: usize,
    rng: &mut dyn RngCore,
) -> usize {
    let u: f64 = Uniform::new(0.0, 1.0).sample(rng);
    let mut acc = 0.0;
    let mut chosen = s;
    let mut found = false;
    let mut scan = |s2: usize, p: f64| {
        if p > 0.0 && (!found || acc < u) {
            chosen = s2;
            found = true;
            acc += p;
        }
    };
    match mdp.transitions_at(t) {
        Transitions::Dense(rows) => {
            for (s2, &p) in rows[s][a].iter().enumerate() {
                scan(s2, p);
            }
        }
        Transitions::Sparse(rows) => {
            for &(s2, p) in &rows[s][a] {
                scan(s2, p);
            }
        }
    }
    chosen
}
