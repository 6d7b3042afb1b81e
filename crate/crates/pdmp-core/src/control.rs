//! Impulse control: punctual interventions that teleport the process to a
//! chosen restart state.
//!
//! A strategy is consulted at the start of the run and again after every
//! jump or intervention, so its decisions may use everything observed so
//! far but nothing beyond (non-anticipativity). Between interventions the
//! process follows its natural dynamics via the same sojourn sampler as the
//! iterative simulator.

use std::sync::Arc;

use rand::RngCore;

use crate::error::PdmpError;
use crate::model::{PdmpModel, Sojourn};
use crate::state::HybridState;
use crate::trajectory::{JumpKind, Trajectory, TrajectoryBuilder};

/// Next planned intervention: when, and which restart state to teleport to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Intervention {
    /// Absolute intervention time. Must not precede the consultation time
    /// and must strictly exceed every earlier intervention.
    pub time: f64,
    /// Index of the restart state in the strategy's control set.
    pub restart: usize,
}

/// Decision rule mapping the trajectory so far to the next intervention.
///
/// The schedule closure receives the trajectory up to now, the current
/// time, and the current state. Returning `None` plans no intervention
/// under current information; the schedule is consulted again after the
/// next jump.
#[derive(Clone)]
pub struct ImpulseStrategy {
    /// Admissible restart states.
    pub control_set: Vec<HybridState>,
    schedule: Arc<dyn Fn(&Trajectory, f64, &HybridState) -> Option<Intervention> + Send + Sync>,
}

impl std::fmt::Debug for ImpulseStrategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ImpulseStrategy({} restart states)", self.control_set.len())
    }
}

impl ImpulseStrategy {
    /// Strategy from an arbitrary schedule closure.
    pub fn new(
        control_set: Vec<HybridState>,
        schedule: Arc<dyn Fn(&Trajectory, f64, &HybridState) -> Option<Intervention> + Send + Sync>,
    ) -> Self {
        Self { control_set, schedule }
    }

    /// The strategy that never intervenes.
    pub fn no_impulse() -> Self {
        Self { control_set: Vec::new(), schedule: Arc::new(|_, _, _| None) }
    }

    /// Intervenes at the given times (strictly increasing), always
    /// teleporting to `control_set[restart]`. Times already consumed by an
    /// executed intervention are skipped on later consultations.
    pub fn fixed_times(control_set: Vec<HybridState>, times: Vec<f64>, restart: usize) -> Self {
        Self {
            control_set,
            schedule: Arc::new(move |traj, now, _| {
                times
                    .iter()
                    .copied()
                    .find(|&t| {
                        t >= now
                            && !traj
                                .jumps
                                .iter()
                                .any(|j| j.kind == JumpKind::Impulse && j.time == t)
                    })
                    .map(|time| Intervention { time, restart })
            }),
        }
    }

    /// Intervenes whenever the tracked component reaches `level`,
    /// teleporting to `control_set[restart]`. The crossing time under the
    /// current mode's flow is computed from the model; modes whose flow
    /// never reaches the level plan no intervention until the next jump.
    pub fn threshold(
        model: &PdmpModel,
        component: usize,
        level: f64,
        control_set: Vec<HybridState>,
        restart: usize,
    ) -> Self {
        let model = model.clone();
        Self {
            control_set,
            schedule: Arc::new(move |_, now, state| {
                if state.euclid[component] >= level {
                    return Some(Intervention { time: now, restart });
                }
                let hit = model.hitting_time(state, component, level);
                hit.is_finite().then(|| Intervention { time: now + hit, restart })
            }),
        }
    }

    pub(crate) fn consult(
        &self,
        traj: &Trajectory,
        now: f64,
        state: &HybridState,
    ) -> Option<Intervention> {
        (self.schedule)(traj, now, state)
    }
}

/// Simulates the process under an impulse strategy, stopping at the
/// `n_impulses`-th intervention or at the horizon, whichever comes first.
///
/// Between interventions the natural dynamics run unchanged. When the next
/// planned intervention time arrives before the next natural jump (ties go
/// to the intervention), the process is teleported to the planned restart
/// state and the move is recorded as an impulse jump. Interventions
/// scheduled at or after the horizon never execute.
///
/// # Errors
/// [`PdmpError::NonIncreasingIntervention`] when the schedule plans a time
/// in the past or not strictly after the previous intervention; an
/// invalid-state error for a zero `n_impulses`, an out-of-range restart
/// index, or an invalid restart state; otherwise as
/// [`crate::simulate::simulate_until`].
pub fn simulate_controlled(
    model: &PdmpModel,
    strategy: &ImpulseStrategy,
    x0: &HybridState,
    n_impulses: usize,
    horizon: f64,
    rng: &mut dyn RngCore,
) -> Result<Trajectory, PdmpError> {
    if !(horizon.is_finite() && horizon >= 0.0) {
        return Err(PdmpError::InvalidState(format!("horizon {horizon} is not finite and nonnegative")));
    }
    if n_impulses == 0 {
        return Err(PdmpError::InvalidState("n_impulses must be positive".into()));
    }
    model.validate_state(x0)?;
    for chi in &strategy.control_set {
        model.validate_state(chi)?;
    }
    let mut builder = TrajectoryBuilder::new(x0.clone());
    let mut impulses = 0usize;
    let mut last_impulse_time = f64::NEG_INFINITY;
    while builder.now() < horizon && impulses < n_impulses {
        if builder.jump_count() >= model.config().max_jumps {
            return Err(PdmpError::Explosion { jumps: builder.jump_count(), time: builder.now() });
        }
        let now = builder.now();
        let state = builder.current().clone();
        let planned = strategy.consult(&builder.snapshot(), now, &state);
        if let Some(iv) = planned {
            if iv.time < now {
                return Err(PdmpError::NonIncreasingIntervention { prev: now, next: iv.time });
            }
            if iv.time <= last_impulse_time {
                return Err(PdmpError::NonIncreasingIntervention {
                    prev: last_impulse_time,
                    next: iv.time,
                });
            }
            if iv.restart >= strategy.control_set.len() {
                return Err(PdmpError::InvalidState(format!(
                    "restart index {} outside control set of size {}",
                    iv.restart,
                    strategy.control_set.len()
                )));
            }
        }
        let tau = planned.map_or(f64::INFINITY, |iv| iv.time);
        // Natural dynamics run until the intervention or the horizon,
        // whichever limit is closer; a censored sojourn means the limit was
        // reached with no natural jump first.
        let cap = tau.min(horizon) - now;
        match model.sample_sojourn(&state, cap, rng)? {
            Sojourn::RandomJump(s) => {
                let pre = model.flow_at(&state, s)?;
                let post = model.sample_post_jump(&pre, rng)?;
                builder.advance(s, pre);
                builder.jump(JumpKind::Random, post);
            }
            Sojourn::BoundaryJump(s) if now + s < tau => {
                let pre = model.snap_to_boundary(model.flow_at(&state, s)?);
                let post = model.sample_post_jump(&pre, rng)?;
                builder.advance(s, pre);
                builder.jump(JumpKind::Boundary, post);
            }
            Sojourn::BoundaryJump(s) | Sojourn::Censored(s) => {
                let at_limit = model.flow_at(&state, s)?;
                builder.advance(s, at_limit);
                if tau < horizon && now + s >= tau {
                    let iv = planned.expect("finite intervention time implies a plan");
                    let post = strategy.control_set[iv.restart].clone();
                    builder.jump(JumpKind::Impulse, post);
                    impulses += 1;
                    last_impulse_time = tau;
                } else {
                    break;
                }
            }
        }
    }
    Ok(builder.finish())
}
