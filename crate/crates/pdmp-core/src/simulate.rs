//! Exact trajectory simulation.
//!
//! Two independent constructions are provided. The iterative construction
//! ([`simulate_iterative`], [`simulate_until`]) samples each sojourn by
//! inverting the cumulative hazard, truncating at the boundary time. The
//! thinning construction ([`simulate_ssa`]) proposes exponential times at a
//! global bounding rate and accepts each proposal with probability equal to
//! the local-to-bound intensity ratio. Both produce the same law; tests
//! compare their outputs as a cross-check, so the two code paths must stay
//! independent.

use rand::distributions::{Distribution, Uniform};
use rand::RngCore;
use rand_distr::Exp1;

use crate::error::PdmpError;
use crate::model::{PdmpModel, Sojourn};
use crate::state::HybridState;
use crate::trajectory::{JumpKind, Trajectory, TrajectoryBuilder};

/// Runs the iterative construction until exactly `n_jumps` jumps occurred.
///
/// Each sojourn `S` is drawn from the survival function
/// `exp(-Lambda(x, t)) 1(t < t*(x))`; draws landing at or beyond the
/// boundary time become boundary jumps.
///
/// # Errors
/// [`PdmpError::NoJumpReachable`] when the current mode admits no jump
/// mechanism (zero intensity and unreachable boundary);
/// [`PdmpError::Explosion`] when `n_jumps` exceeds the configured cap.
pub fn simulate_iterative(
    model: &PdmpModel,
    x0: &HybridState,
    n_jumps: usize,
    rng: &mut dyn RngCore,
) -> Result<Trajectory, PdmpError> {
    model.validate_state(x0)?;
    let mut builder = TrajectoryBuilder::new(x0.clone());
    while builder.jump_count() < n_jumps {
        if builder.jump_count() >= model.config().max_jumps {
            return Err(PdmpError::Explosion { jumps: builder.jump_count(), time: builder.now() });
        }
        step_iterative(model, &mut builder, f64::INFINITY, rng)?;
    }
    Ok(builder.finish())
}

/// Runs the iterative construction up to a time horizon.
///
/// # Errors
/// As [`simulate_iterative`], except that sojourns censored by the horizon
/// end the trajectory instead of erroring.
pub fn simulate_until(
    model: &PdmpModel,
    x0: &HybridState,
    horizon: f64,
    rng: &mut dyn RngCore,
) -> Result<Trajectory, PdmpError> {
    if !(horizon.is_finite() && horizon >= 0.0) {
        return Err(PdmpError::InvalidState(format!("horizon {horizon} is not finite and nonnegative")));
    }
    model.validate_state(x0)?;
    let mut builder = TrajectoryBuilder::new(x0.clone());
    while builder.now() < horizon {
        if builder.jump_count() >= model.config().max_jumps {
            return Err(PdmpError::Explosion { jumps: builder.jump_count(), time: builder.now() });
        }
        let cap = horizon - builder.now();
        if !step_iterative(model, &mut builder, cap, rng)? {
            break;
        }
    }
    Ok(builder.finish())
}

/// Advances the builder by one sojourn draw. Returns whether an event
/// occurred (false means the draw was censored at the cap).
fn step_iterative(
    model: &PdmpModel,
    builder: &mut TrajectoryBuilder,
    cap: f64,
    rng: &mut dyn RngCore,
) -> Result<bool, PdmpError> {
    let x = builder.current().clone();
    match model.sample_sojourn(&x, cap, rng)? {
        Sojourn::RandomJump(s) => {
            let pre = model.flow_at(&x, s)?;
            let post = model.sample_post_jump(&pre, rng)?;
            builder.advance(s, pre);
            builder.jump(JumpKind::Random, post);
            Ok(true)
        }
        Sojourn::BoundaryJump(s) => {
            let pre = model.snap_to_boundary(model.flow_at(&x, s)?);
            let post = model.sample_post_jump(&pre, rng)?;
            builder.advance(s, pre);
            builder.jump(JumpKind::Boundary, post);
            Ok(true)
        }
        Sojourn::Censored(s) => {
            let end = model.flow_at(&x, s)?;
            builder.advance(s, end);
            Ok(false)
        }
    }
}

/// Runs the thinning construction up to a time horizon.
///
/// Proposal times are exponential at the declared global intensity bound.
/// A proposal beyond the boundary time becomes a boundary jump (ties
/// included); otherwise it becomes a random jump with probability
/// `intensity / bound` and a plain advance along the flow otherwise.
/// Rejected proposals leave no trace in the trajectory.
///
/// # Errors
/// [`PdmpError::MissingIntensityBound`] when the model declares no bound;
/// [`PdmpError::IntensityBoundViolated`] when an intensity above the bound
/// is observed; [`PdmpError::Explosion`] past the configured jump cap.
pub fn simulate_ssa(
    model: &PdmpModel,
    x0: &HybridState,
    horizon: f64,
    rng: &mut dyn RngCore,
) -> Result<Trajectory, PdmpError> {
    if !(horizon.is_finite() && horizon >= 0.0) {
        return Err(PdmpError::InvalidState(format!("horizon {horizon} is not finite and nonnegative")));
    }
    let bound = model.intensity_bound().ok_or(PdmpError::MissingIntensityBound)?;
    if !(bound.is_finite() && bound >= 0.0) {
        return Err(PdmpError::InvalidState(format!("intensity bound {bound} is not finite and nonnegative")));
    }
    model.validate_state(x0)?;
    let unit = Uniform::new(0.0, 1.0);
    let mut builder = TrajectoryBuilder::new(x0.clone());
    while builder.now() < horizon {
        if builder.jump_count() >= model.config().max_jumps {
            return Err(PdmpError::Explosion { jumps: builder.jump_count(), time: builder.now() });
        }
        let x = builder.current().clone();
        let proposal = if bound > 0.0 {
            let e: f64 = Exp1.sample(rng);
            e / bound
        } else {
            f64::INFINITY
        };
        let t_star = model.boundary_time(&x);
        let remaining = horizon - builder.now();
        if t_star <= proposal && t_star <= remaining {
            let pre = model.snap_to_boundary(model.flow_at(&x, t_star)?);
            let post = model.sample_post_jump(&pre, rng)?;
            builder.advance(t_star, pre);
            builder.jump(JumpKind::Boundary, post);
            continue;
        }
        if proposal > remaining {
            let end = model.flow_at(&x, remaining)?;
            builder.advance(remaining, end);
            break;
        }
        let at_proposal = model.flow_at(&x, proposal)?;
        let local = model.intensity_at(&at_proposal);
        if local > bound {
            return Err(PdmpError::IntensityBoundViolated { observed: local, bound });
        }
        let u: f64 = unit.sample(rng);
        if u <= local / bound {
            let post = model.sample_post_jump(&at_proposal, rng)?;
            builder.advance(proposal, at_proposal);
            builder.jump(JumpKind::Random, post);
        } else {
            builder.advance(proposal, at_proposal);
        }
    }
    Ok(builder.finish())
}

/// Samples the process on a deterministic grid: one thinning trajectory is
/// simulated up to the last grid point and read off at each grid time
/// (right-continuously at jumps).
///
/// # Errors
/// Rejects empty, decreasing, or negative grids; otherwise as
/// [`simulate_ssa`].
pub fn skeleton_sample(
    model: &PdmpModel,
    x0: &HybridState,
    grid: &[f64],
    rng: &mut dyn RngCore,
) -> Result<Vec<HybridState>, PdmpError> {
    if grid.is_empty() {
        return Err(PdmpError::InvalidState("empty sampling grid".into()));
    }
    if grid[0] < 0.0 {
        return Err(PdmpError::InvalidState(format!("grid starts at {}", grid[0])));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(PdmpError::InvalidState("grid is not strictly increasing".into()));
    }
    let horizon = *grid.last().expect("grid checked non-empty");
    let traj = simulate_ssa(model, x0, horizon, rng)?;
    grid.iter().map(|&t| traj.state_at(model, t)).collect()
}
