//! Model definition: per-mode local characteristics and their evaluation.
//!
//! A model couples, for every mode, a deterministic flow, a jump intensity,
//! a post-jump kernel, a boundary-time map, and a region predicate. The
//! simulators consume models exclusively through the evaluation methods
//! here: [`PdmpModel::flow_at`], [`PdmpModel::boundary_time`],
//! [`PdmpModel::cumulative_hazard`], and the internal sojourn sampler.
//!
//! Closed-form families (constant and exponential flows, constant and
//! Weibull-in-elapsed-time intensities, threshold boundaries) are evaluated
//! analytically; the `Ode`, `Event`, and `Custom` variants fall back to
//! fixed-step integration, sign-change scanning, and bisection.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::distributions::{Distribution, Uniform};
use rand::RngCore;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use crate::error::PdmpError;
use crate::quad::{adaptive_simpson, bisect_monotone};
use crate::state::HybridState;

/// Deterministic motion of the Euclidean coordinates within one mode.
///
/// The elapsed-time clock of time-augmented models is not part of the flow;
/// it always advances at speed one and is handled by [`PdmpModel::flow_at`].
#[derive(Clone)]
pub enum Flow {
    /// Coordinates stay put.
    Constant,
    /// Componentwise exponential scaling `x_i e^(rate t)`.
    ExponentialScale {
        /// Growth rate when positive, decay rate when negative (1/time).
        rate: f64,
    },
    /// Straight-line motion `x + velocity t`.
    Linear {
        /// Per-component velocity (model units/time).
        velocity: Vec<f64>,
    },
    /// Right-hand side `dx/dt = rhs(x)` of an autonomous ODE, integrated
    /// with a fixed-step fourth-order Runge-Kutta scheme.
    Ode(Arc<dyn Fn(&[f64], &mut [f64]) + Send + Sync>),
    /// Arbitrary closed-form flow `(x, t) -> x_t`. Must satisfy the
    /// semigroup property.
    Custom(Arc<dyn Fn(&[f64], f64) -> Vec<f64> + Send + Sync>),
}

impl Flow {
    pub(crate) fn eval(&self, x: &[f64], t: f64, cfg: &SimConfig) -> Vec<f64> {
        match self {
            Flow::Constant => x.to_vec(),
            Flow::ExponentialScale { rate } => {
                let s = (rate * t).exp();
                x.iter().map(|&c| c * s).collect()
            }
            Flow::Linear { velocity } => {
                x.iter().zip(velocity).map(|(&c, &v)| c + v * t).collect()
            }
            Flow::Ode(rhs) => rk4(rhs.as_ref(), x, t, cfg),
            Flow::Custom(f) => f(x, t),
        }
    }
}

impl fmt::Debug for Flow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Flow::Constant => write!(f, "Flow::Constant"),
            Flow::ExponentialScale { rate } => write!(f, "Flow::ExponentialScale({rate})"),
            Flow::Linear { velocity } => write!(f, "Flow::Linear({velocity:?})"),
            Flow::Ode(_) => write!(f, "Flow::Ode(..)"),
            Flow::Custom(_) => write!(f, "Flow::Custom(..)"),
        }
    }
}

/// Fixed-step classical Runge-Kutta integration of `dx/dt = rhs(x)`.
fn rk4(rhs: &(dyn Fn(&[f64], &mut [f64]) + Send + Sync), x: &[f64], t: f64, cfg: &SimConfig) -> Vec<f64> {
    if t == 0.0 {
        return x.to_vec();
    }
    let h_target = cfg.ode_step_cap.min(t / cfg.ode_min_steps as f64);
    let n = (t / h_target).ceil().max(1.0) as usize;
    let h = t / n as f64;
    let d = x.len();
    let mut y = x.to_vec();
    let mut k1 = vec![0.0; d];
    let mut k2 = vec![0.0; d];
    let mut k3 = vec![0.0; d];
    let mut k4 = vec![0.0; d];
    let mut tmp = vec![0.0; d];
    for _ in 0..n {
        rhs(&y, &mut k1);
        for i in 0..d {
            tmp[i] = y[i] + 0.5 * h * k1[i];
        }
        rhs(&tmp, &mut k2);
        for i in 0..d {
            tmp[i] = y[i] + 0.5 * h * k2[i];
        }
        rhs(&tmp, &mut k3);
        for i in 0..d {
            tmp[i] = y[i] + h * k3[i];
        }
        rhs(&tmp, &mut k4);
        for i in 0..d {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    y
}

/// Jump intensity of one mode, as a function of the full hybrid state.
#[derive(Clone)]
pub enum Intensity {
    /// No random jumps.
    Zero,
    /// Constant rate (1/time).
    Constant(f64),
    /// Rate `beta u^alpha` in the elapsed-time coordinate `u`. Requires a
    /// time-augmented model. `alpha > -1` keeps the hazard integrable at
    /// `u = 0`.
    WeibullElapsed {
        /// Shape exponent.
        alpha: f64,
        /// Scale factor (1/time^(alpha+1)).
        beta: f64,
    },
    /// Arbitrary nonnegative rate map.
    Custom(Arc<dyn Fn(&HybridState) -> f64 + Send + Sync>),
}

impl Intensity {
    pub(crate) fn eval(&self, x: &HybridState) -> f64 {
        match self {
            Intensity::Zero => 0.0,
            Intensity::Constant(l) => *l,
            Intensity::WeibullElapsed { alpha, beta } => {
                let u = x
                    .elapsed
                    .expect("elapsed-time intensity evaluated on a state without an elapsed clock");
                beta * u.powf(*alpha)
            }
            Intensity::Custom(f) => f(x),
        }
    }
}

impl fmt::Debug for Intensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Intensity::Zero => write!(f, "Intensity::Zero"),
            Intensity::Constant(l) => write!(f, "Intensity::Constant({l})"),
            Intensity::WeibullElapsed { alpha, beta } => {
                write!(f, "Intensity::WeibullElapsed(alpha={alpha}, beta={beta})")
            }
            Intensity::Custom(_) => write!(f, "Intensity::Custom(..)"),
        }
    }
}

/// Post-jump kernel of one mode.
///
/// Built-in variants reset the elapsed-time clock to zero on time-augmented
/// models; `Custom` kernels manage the clock themselves. A kernel must never
/// reproduce its input state.
#[derive(Clone)]
pub enum Kernel {
    /// Switch to `target` mode, keeping the Euclidean coordinates.
    SwitchMode {
        /// Destination mode label.
        target: i32,
    },
    /// Teleport to a fixed mode and position.
    Reset {
        /// Destination mode label.
        mode: i32,
        /// Destination coordinates.
        euclid: Vec<f64>,
    },
    /// Pick a branch with the given weights, then apply that branch.
    /// Weights must be nonnegative and sum to one.
    Mixture(Vec<(f64, Kernel)>),
    /// Arbitrary sampler.
    Custom(Arc<dyn Fn(&HybridState, &mut dyn RngCore) -> HybridState + Send + Sync>),
}

impl Kernel {
    fn sample(&self, x: &HybridState, augmented: bool, rng: &mut dyn RngCore) -> HybridState {
        match self {
            Kernel::SwitchMode { target } => HybridState {
                mode: *target,
                euclid: x.euclid.clone(),
                elapsed: augmented.then_some(0.0),
            },
            Kernel::Reset { mode, euclid } => HybridState {
                mode: *mode,
                euclid: euclid.clone(),
                elapsed: augmented.then_some(0.0),
            },
            Kernel::Mixture(branches) => {
                let u: f64 = Uniform::new(0.0, 1.0).sample(rng);
                let mut acc = 0.0;
                for (w, k) in branches {
                    acc += w;
                    if u < acc {
                        return k.sample(x, augmented, rng);
                    }
                }
                let (_, last) = branches.last().expect("mixture kernel has no branches");
                last.sample(x, augmented, rng)
            }
            Kernel::Custom(f) => f(x, rng),
        }
    }

    fn validate(&self) -> Result<(), PdmpError> {
        if let Kernel::Mixture(branches) = self {
            if branches.is_empty() {
                return Err(PdmpError::InvalidConfig("mixture kernel has no branches".into()));
            }
            let mut sum = 0.0;
            for (w, k) in branches {
                if !w.is_finite() || *w < 0.0 {
                    return Err(PdmpError::InvalidConfig(format!(
                        "mixture weight {w} is not a finite nonnegative number"
                    )));
                }
                sum += w;
                k.validate()?;
            }
            if (sum - 1.0).abs() > 1e-9 {
                return Err(PdmpError::InvalidConfig(format!(
                    "mixture weights sum to {sum}, expected 1"
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kernel::SwitchMode { target } => write!(f, "Kernel::SwitchMode({target})"),
            Kernel::Reset { mode, euclid } => write!(f, "Kernel::Reset({mode}, {euclid:?})"),
            Kernel::Mixture(b) => write!(f, "Kernel::Mixture({} branches)", b.len()),
            Kernel::Custom(_) => write!(f, "Kernel::Custom(..)"),
        }
    }
}

/// Deterministic exit time of one mode: how long the flow may run before
/// hitting the boundary of the mode's region.
#[derive(Clone)]
pub enum Boundary {
    /// The flow never reaches the boundary.
    None,
    /// Exit time of `x e^(rate t)` through `level` on one component.
    ExponentialHit {
        /// Flow rate, matching the mode's exponential flow.
        rate: f64,
        /// Threshold level.
        level: f64,
        /// Euclidean component the threshold applies to.
        component: usize,
    },
    /// Exit time of straight-line motion through `level` on one component.
    LinearHit {
        /// Component velocity, matching the mode's linear flow.
        velocity: f64,
        /// Threshold level.
        level: f64,
        /// Euclidean component the threshold applies to.
        component: usize,
    },
    /// Boundary reached when `guard(x_t)` changes sign along the flow;
    /// detected by scanning and refined by bisection.
    Event(Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>),
    /// Arbitrary exit-time map. Return `f64::INFINITY` when unreachable.
    Custom(Arc<dyn Fn(&HybridState) -> f64 + Send + Sync>),
}

impl fmt::Debug for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Boundary::None => write!(f, "Boundary::None"),
            Boundary::ExponentialHit { rate, level, component } => {
                write!(f, "Boundary::ExponentialHit(rate={rate}, level={level}, c={component})")
            }
            Boundary::LinearHit { velocity, level, component } => {
                write!(f, "Boundary::LinearHit(v={velocity}, level={level}, c={component})")
            }
            Boundary::Event(_) => write!(f, "Boundary::Event(..)"),
            Boundary::Custom(_) => write!(f, "Boundary::Custom(..)"),
        }
    }
}

/// Region predicate of one mode: which Euclidean points belong to the mode.
#[derive(Clone)]
pub enum Region {
    /// Every point belongs to the mode.
    All,
    /// Interval constraint on one component.
    Interval {
        /// Euclidean component the constraint applies to.
        component: usize,
        /// Lower endpoint.
        lo: f64,
        /// Upper endpoint.
        hi: f64,
        /// Whether the lower endpoint is excluded.
        lo_open: bool,
        /// Whether the upper endpoint is excluded.
        hi_open: bool,
    },
    /// Single point up to an absolute tolerance.
    Point {
        /// The point.
        euclid: Vec<f64>,
        /// Componentwise tolerance.
        tol: f64,
    },
    /// Arbitrary membership predicate.
    Custom(Arc<dyn Fn(&[f64]) -> bool + Send + Sync>),
}

impl Region {
    /// Membership with an absolute slack on interval endpoints, so that
    /// states carrying accumulated floating error from long flows still
    /// validate.
    pub(crate) fn contains(&self, x: &[f64], tol: f64) -> bool {
        match self {
            Region::All => true,
            Region::Interval { component, lo, hi, lo_open, hi_open } => {
                let c = x[*component];
                let above = if *lo_open { c > *lo - tol } else { c >= *lo - tol };
                let below = if *hi_open { c < *hi + tol } else { c <= *hi + tol };
                above && below
            }
            Region::Point { euclid, tol } => {
                x.len() == euclid.len()
                    && x.iter().zip(euclid).all(|(a, b)| (a - b).abs() <= *tol)
            }
            Region::Custom(f) => f(x),
        }
    }
}

impl fmt::Debug for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::All => write!(f, "Region::All"),
            Region::Interval { component, lo, hi, lo_open, hi_open } => {
                let l = if *lo_open { '(' } else { '[' };
                let r = if *hi_open { ')' } else { ']' };
                write!(f, "Region::Interval(c={component}, {l}{lo}, {hi}{r})")
            }
            Region::Point { euclid, tol } => write!(f, "Region::Point({euclid:?} +- {tol})"),
            Region::Custom(_) => write!(f, "Region::Custom(..)"),
        }
    }
}

/// Local characteristics of a single mode.
#[derive(Debug, Clone)]
pub struct ModeDynamics {
    /// Deterministic motion.
    pub flow: Flow,
    /// Random-jump rate along the flow.
    pub intensity: Intensity,
    /// Post-jump distribution.
    pub kernel: Kernel,
    /// Deterministic exit time.
    pub boundary: Boundary,
    /// Membership predicate for the mode's Euclidean region.
    pub region: Region,
}

/// Numerical policy knobs shared by the simulators.
///
/// Every tolerance used by this crate is pinned here once; tests reference
/// these fields rather than re-declaring their own copies.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimConfig {
    /// Hard cap on jumps per trajectory (explosion guard).
    pub max_jumps: usize,
    /// Search window for sojourn sampling when neither a boundary nor a
    /// caller horizon bounds it.
    pub no_jump_guard: f64,
    /// Step-size cap for fixed-step ODE integration.
    pub ode_step_cap: f64,
    /// An ODE integration span is resolved with at least this many steps.
    pub ode_min_steps: u32,
    /// Scan horizon for event-function boundary detection.
    pub event_scan_horizon: f64,
    /// Bisection tolerance (in time) for event-function boundaries.
    pub boundary_tol: f64,
    /// Bisection tolerance (in time) for inverse-hazard sampling.
    pub inverse_hazard_tol: f64,
    /// Absolute tolerance for adaptive quadrature.
    pub quad_tol: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            max_jumps: 1_000_000,
            no_jump_guard: 1e12,
            ode_step_cap: 0.01,
            ode_min_steps: 100,
            event_scan_horizon: 1e4,
            boundary_tol: 1e-9,
            inverse_hazard_tol: 1e-10,
            quad_tol: 1e-10,
        }
    }
}

/// Outcome of one sojourn draw: where the next event lands relative to the
/// boundary time and the caller's time cap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Sojourn {
    /// Random jump strictly before both the boundary and the cap.
    RandomJump(f64),
    /// Deterministic boundary hit at the contained time (ties with the cap
    /// are classified as boundary hits by the caller's convention).
    BoundaryJump(f64),
    /// No event up to the cap; the flow simply advances that far.
    Censored(f64),
}

/// A piecewise-deterministic process given by its local characteristics.
///
/// Immutable after construction and safe to share across threads; every
/// simulation call owns its generator state.
#[derive(Debug, Clone)]
pub struct PdmpModel {
    modes: BTreeMap<i32, ModeDynamics>,
    time_augmented: bool,
    intensity_bound: Option<f64>,
    config: SimConfig,
}

impl PdmpModel {
    /// Builds a model from per-mode dynamics.
    ///
    /// Validates mixture-kernel weights and intensity parameters. Set
    /// `time_augmented` when states carry an elapsed-time clock that the
    /// flow advances at speed one and jumps reset to zero.
    pub fn new(modes: BTreeMap<i32, ModeDynamics>, time_augmented: bool) -> Result<Self, PdmpError> {
        if modes.is_empty() {
            return Err(PdmpError::InvalidConfig("model has no modes".into()));
        }
        for (label, dynamics) in &modes {
            dynamics.kernel.validate()?;
            match &dynamics.intensity {
                Intensity::Constant(l) if !(l.is_finite() && *l >= 0.0) => {
                    return Err(PdmpError::InvalidConfig(format!(
                        "mode {label}: constant intensity {l} is not finite and nonnegative"
                    )));
                }
                Intensity::WeibullElapsed { alpha, beta } => {
                    if !time_augmented {
                        return Err(PdmpError::InvalidConfig(format!(
                            "mode {label}: elapsed-time intensity on a model without elapsed clock"
                        )));
                    }
                    if *alpha <= -1.0 || !beta.is_finite() || *beta < 0.0 {
                        return Err(PdmpError::InvalidConfig(format!(
                            "mode {label}: Weibull intensity needs alpha > -1 and beta >= 0"
                        )));
                    }
                }
                _ => {}
            }
        }
        Ok(Self { modes, time_augmented, intensity_bound: None, config: SimConfig::default() })
    }

    /// Declares a global intensity bound for thinning-based simulation.
    pub fn with_intensity_bound(mut self, bound: f64) -> Self {
        self.intensity_bound = Some(bound);
        self
    }

    /// Replaces the numerical policy.
    pub fn with_config(mut self, config: SimConfig) -> Self {
        self.config = config;
        self
    }

    /// Numerical policy in effect.
    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    /// Declared global intensity bound, if any.
    pub fn intensity_bound(&self) -> Option<f64> {
        self.intensity_bound
    }

    /// Whether states carry an elapsed-time clock.
    pub fn time_augmented(&self) -> bool {
        self.time_augmented
    }

    /// Mode labels in ascending order.
    pub fn mode_labels(&self) -> impl Iterator<Item = i32> + '_ {
        self.modes.keys().copied()
    }

    pub(crate) fn dynamics(&self, mode: i32) -> Result<&ModeDynamics, PdmpError> {
        self.modes
            .get(&mode)
            .ok_or_else(|| PdmpError::InvalidState(format!("unknown mode {mode}")))
    }

    /// Places a state that has flowed to its boundary time exactly onto the
    /// threshold for the closed-form hit families, removing the floating
    /// error accumulated along the flow. Other boundary families pass
    /// through unchanged.
    pub(crate) fn snap_to_boundary(&self, mut x: HybridState) -> HybridState {
        if let Ok(dynamics) = self.dynamics(x.mode) {
            match dynamics.boundary {
                Boundary::ExponentialHit { level, component, .. }
                | Boundary::LinearHit { level, component, .. } => {
                    if component < x.euclid.len() {
                        x.euclid[component] = level;
                    }
                }
                _ => {}
            }
        }
        x
    }

    /// Checks that a state is well formed for this model: known mode,
    /// elapsed clock present iff the model is time-augmented, and Euclidean
    /// coordinates inside the mode's region.
    pub fn validate_state(&self, x: &HybridState) -> Result<(), PdmpError> {
        let dynamics = self.dynamics(x.mode)?;
        match (self.time_augmented, x.elapsed) {
            (true, None) => {
                return Err(PdmpError::InvalidState(format!(
                    "{x} lacks the elapsed clock of a time-augmented model"
                )));
            }
            (false, Some(_)) => {
                return Err(PdmpError::InvalidState(format!(
                    "{x} carries an elapsed clock but the model is not time-augmented"
                )));
            }
            (true, Some(u)) if !(u.is_finite() && u >= 0.0) => {
                return Err(PdmpError::InvalidState(format!("{x} has a negative elapsed clock")));
            }
            _ => {}
        }
        if x.euclid.iter().any(|c| !c.is_finite()) {
            return Err(PdmpError::InvalidState(format!("{x} has non-finite coordinates")));
        }
        if !dynamics.region.contains(&x.euclid, self.config.boundary_tol) {
            return Err(PdmpError::InvalidState(format!(
                "{x} lies outside the region of mode {}",
                x.mode
            )));
        }
        Ok(())
    }

    /// Moves `x` along its mode's flow for `t` time units.
    ///
    /// The mode never changes; on time-augmented models the elapsed clock
    /// advances by `t`.
    ///
    /// # Errors
    /// [`PdmpError::BoundaryOverrun`] when `t` exceeds the boundary time
    /// `t*(x)`; callers must stop at the boundary and jump there.
    pub fn flow_at(&self, x: &HybridState, t: f64) -> Result<HybridState, PdmpError> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(PdmpError::InvalidState(format!("flow duration {t} is not finite and nonnegative")));
        }
        let t_star = self.boundary_time(x);
        if t > t_star {
            return Err(PdmpError::BoundaryOverrun { t, t_star });
        }
        let dynamics = self.dynamics(x.mode)?;
        Ok(self.flow_unchecked(dynamics, x, t))
    }

    /// Flow evaluation without the boundary check, for callers that already
    /// know `t <= t*(x)`.
    pub(crate) fn flow_unchecked(&self, dynamics: &ModeDynamics, x: &HybridState, t: f64) -> HybridState {
        HybridState {
            mode: x.mode,
            euclid: dynamics.flow.eval(&x.euclid, t, &self.config),
            elapsed: x.elapsed.map(|u| u + t),
        }
    }

    /// Time the flow takes from `x` to reach the boundary of its mode's
    /// region; `f64::INFINITY` when the boundary is unreachable.
    ///
    /// # Panics
    /// Panics when the state's mode is unknown to the model.
    pub fn boundary_time(&self, x: &HybridState) -> f64 {
        let dynamics = self
            .modes
            .get(&x.mode)
            .unwrap_or_else(|| panic!("unknown mode {} in boundary_time", x.mode));
        match &dynamics.boundary {
            Boundary::None => f64::INFINITY,
            Boundary::ExponentialHit { rate, level, component } => {
                let c = x.euclid[*component];
                if c == *level {
                    return 0.0;
                }
                if *rate == 0.0 || c == 0.0 {
                    return f64::INFINITY;
                }
                let ratio = level / c;
                if ratio <= 0.0 {
                    return f64::INFINITY;
                }
                let t = ratio.ln() / rate;
                if t.is_finite() && t >= 0.0 {
                    t
                } else {
                    f64::INFINITY
                }
            }
            Boundary::LinearHit { velocity, level, component } => {
                let c = x.euclid[*component];
                if c == *level {
                    return 0.0;
                }
                if *velocity == 0.0 {
                    return f64::INFINITY;
                }
                let t = (level - c) / velocity;
                if t >= 0.0 {
                    t
                } else {
                    f64::INFINITY
                }
            }
            Boundary::Event(guard) => self.event_boundary_time(dynamics, x, guard.as_ref()),
            Boundary::Custom(f) => f(x),
        }
    }

    /// Scans the flow for a sign change of the guard function, then refines
    /// the crossing time by bisection.
    fn event_boundary_time(
        &self,
        dynamics: &ModeDynamics,
        x: &HybridState,
        guard: &(dyn Fn(&[f64]) -> f64 + Send + Sync),
    ) -> f64 {
        let g0 = guard(&x.euclid);
        if g0 == 0.0 {
            return 0.0;
        }
        let sign0 = g0.signum();
        let step = self.config.ode_step_cap;
        let mut t_prev = 0.0;
        let mut t = step;
        while t_prev < self.config.event_scan_horizon {
            let g = guard(&dynamics.flow.eval(&x.euclid, t, &self.config));
            if g == 0.0 {
                return t;
            }
            if g.signum() != sign0 {
                let h = |s: f64| -> f64 {
                    sign0 * -guard(&dynamics.flow.eval(&x.euclid, s, &self.config))
                };
                return bisect_monotone(&h, t_prev, t, self.config.boundary_tol);
            }
            t_prev = t;
            t += step;
        }
        f64::INFINITY
    }

    /// Jump intensity at a state.
    ///
    /// # Panics
    /// Panics when the state's mode is unknown to the model.
    pub fn intensity_at(&self, x: &HybridState) -> f64 {
        let dynamics = self
            .modes
            .get(&x.mode)
            .unwrap_or_else(|| panic!("unknown mode {} in intensity_at", x.mode));
        dynamics.intensity.eval(x)
    }

    /// Cumulative hazard along the flow from `x` over `[0, t]`.
    ///
    /// Closed forms cover the constant and Weibull-in-elapsed-time
    /// intensity families; other intensities are integrated by adaptive
    /// quadrature along the flow. Requires finite `t` with `t <= t*(x)`.
    ///
    /// # Panics
    /// Panics when `t` is not finite and nonnegative, or the mode is
    /// unknown.
    pub fn cumulative_hazard(&self, x: &HybridState, t: f64) -> f64 {
        assert!(t.is_finite() && t >= 0.0, "cumulative hazard needs finite t >= 0, got {t}");
        let dynamics = self
            .modes
            .get(&x.mode)
            .unwrap_or_else(|| panic!("unknown mode {} in cumulative_hazard", x.mode));
        match &dynamics.intensity {
            Intensity::Zero => 0.0,
            Intensity::Constant(l) => l * t,
            Intensity::WeibullElapsed { alpha, beta } => {
                let u0 = x
                    .elapsed
                    .expect("elapsed-time intensity evaluated on a state without an elapsed clock");
                weibull_hazard(*alpha, *beta, u0, t)
            }
            Intensity::Custom(f) => {
                let integrand =
                    |s: f64| -> f64 { f(&self.flow_unchecked(dynamics, x, s)) };
                adaptive_simpson(&integrand, 0.0, t, self.config.quad_tol)
            }
        }
    }

    /// Draws the post-jump state from the mode's kernel at the pre-jump
    /// state `pre`, which sits at the jump location.
    ///
    /// # Errors
    /// [`PdmpError::KernelSelfTransition`] when the sampled state equals
    /// `pre` (jump kernels never reproduce their input), or an invalid-state
    /// error when the sample falls outside the model.
    pub fn sample_post_jump(
        &self,
        pre: &HybridState,
        rng: &mut dyn RngCore,
    ) -> Result<HybridState, PdmpError> {
        let dynamics = self.dynamics(pre.mode)?;
        let post = dynamics.kernel.sample(pre, self.time_augmented, rng);
        if post == *pre {
            return Err(PdmpError::KernelSelfTransition);
        }
        self.validate_state(&post)?;
        Ok(post)
    }

    /// Draws the next event along the flow from `x`, looking no further
    /// than `cap` time units ahead (`cap` may be infinite).
    ///
    /// The sojourn `S` follows the survival function
    /// `exp(-Lambda(x, t)) 1(t < t*(x))`: an exponential level `E ~ Exp(1)`
    /// is drawn and inverted through the cumulative hazard, in closed form
    /// for the analytic intensity families and by bisection otherwise. Ties
    /// `S = t*(x)` are classified as boundary hits.
    ///
    /// # Errors
    /// [`PdmpError::NoJumpReachable`] when `cap` is infinite, the boundary
    /// is unreachable, and the hazard never attains the drawn level within
    /// the configured guard window.
    pub(crate) fn sample_sojourn(
        &self,
        x: &HybridState,
        cap: f64,
        rng: &mut dyn RngCore,
    ) -> Result<Sojourn, PdmpError> {
        let dynamics = self.dynamics(x.mode)?;
        let e: f64 = Exp1.sample(rng);
        let t_star = self.boundary_time(x);
        let t_lim = t_star.min(cap);
        let t_jump = match &dynamics.intensity {
            Intensity::Zero => f64::INFINITY,
            Intensity::Constant(l) => {
                if *l > 0.0 {
                    e / l
                } else {
                    f64::INFINITY
                }
            }
            Intensity::WeibullElapsed { alpha, beta } => {
                if *beta > 0.0 {
                    let u0 = x.elapsed.expect(
                        "elapsed-time intensity evaluated on a state without an elapsed clock",
                    );
                    inverse_weibull_hazard(*alpha, *beta, u0, e)
                } else {
                    f64::INFINITY
                }
            }
            Intensity::Custom(_) => self.inverse_hazard_numeric(x, e, t_lim),
        };
        if t_jump < t_lim {
            Ok(Sojourn::RandomJump(t_jump))
        } else if t_star <= cap && t_star.is_finite() {
            Ok(Sojourn::BoundaryJump(t_star))
        } else if cap.is_finite() {
            Ok(Sojourn::Censored(cap))
        } else {
            Err(PdmpError::NoJumpReachable { guard: self.config.no_jump_guard })
        }
    }

    /// Inverts the cumulative hazard numerically: smallest `t` with
    /// `Lambda(x, t) = e`, or infinity when the hazard saturates below `e`
    /// within the search window.
    fn inverse_hazard_numeric(&self, x: &HybridState, e: f64, t_lim: f64) -> f64 {
        let hazard = |t: f64| -> f64 { self.cumulative_hazard(x, t) };
        let hi = if t_lim.is_finite() {
            if hazard(t_lim) < e {
                return f64::INFINITY;
            }
            t_lim
        } else {
            let mut hi = 1.0;
            while hazard(hi) < e {
                hi *= 2.0;
                if hi > self.config.no_jump_guard {
                    return f64::INFINITY;
                }
            }
            hi
        };
        bisect_monotone(&|t| hazard(t) - e, 0.0, hi, self.config.inverse_hazard_tol)
    }

    /// First time the flow from `x` carries `component` to `level`, or
    /// infinity when the level is not reached before the mode's boundary.
    ///
    /// Analytic flows are inverted in closed form; other flows are scanned
    /// for a crossing and refined by bisection.
    ///
    /// # Panics
    /// Panics when the state's mode is unknown to the model.
    pub fn hitting_time(&self, x: &HybridState, component: usize, level: f64) -> f64 {
        let dynamics = self
            .modes
            .get(&x.mode)
            .unwrap_or_else(|| panic!("unknown mode {} in hitting_time", x.mode));
        let t_star = self.boundary_time(x);
        let t_hit = match &dynamics.flow {
            Flow::Constant => {
                if x.euclid[component] == level {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            Flow::ExponentialScale { rate } => {
                let c = x.euclid[component];
                if c == level {
                    0.0
                } else if *rate == 0.0 || c == 0.0 || level / c <= 0.0 {
                    f64::INFINITY
                } else {
                    let t = (level / c).ln() / rate;
                    if t >= 0.0 {
                        t
                    } else {
                        f64::INFINITY
                    }
                }
            }
            Flow::Linear { velocity } => {
                let c = x.euclid[component];
                let v = velocity[component];
                if c == level {
                    0.0
                } else if v == 0.0 {
                    f64::INFINITY
                } else {
                    let t = (level - c) / v;
                    if t >= 0.0 {
                        t
                    } else {
                        f64::INFINITY
                    }
                }
            }
            Flow::Ode(_) | Flow::Custom(_) => {
                let guard = move |e: &[f64]| e[component] - level;
                self.event_boundary_time(dynamics, x, &guard)
            }
        };
        if t_hit <= t_star {
            t_hit
        } else {
            f64::INFINITY
        }
    }
}

/// Closed-form cumulative hazard of the `beta u^alpha` intensity over
/// `[u0, u0 + t]`.
fn weibull_hazard(alpha: f64, beta: f64, u0: f64, t: f64) -> f64 {
    let p = alpha + 1.0;
    beta * ((u0 + t).powf(p) - u0.powf(p)) / p
}

/// Inverse of [`weibull_hazard`] in `t` at level `e`.
fn inverse_weibull_hazard(alpha: f64, beta: f64, u0: f64, e: f64) -> f64 {
    let p = alpha + 1.0;
    (u0.powf(p) + p * e / beta).powf(1.0 / p) - u0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weibull_hazard_inverts() {
        for &(alpha, beta, u0) in &[(2.0, 0.5, 0.0), (0.7, 1.3, 2.0), (-0.5, 0.9, 0.0)] {
            for &e in &[0.1, 1.0, 5.0] {
                let t = inverse_weibull_hazard(alpha, beta, u0, e);
                let back = weibull_hazard(alpha, beta, u0, t);
                assert!(
                    (back - e).abs() < 1e-9,
                    "alpha={alpha} beta={beta} u0={u0} e={e}: hazard({t}) = {back}"
                );
            }
        }
    }

    #[test]
    fn rk4_matches_exponential_decay() {
        let cfg = SimConfig::default();
        let rhs = |x: &[f64], dx: &mut [f64]| {
            dx[0] = -0.05 * x[0];
        };
        let got = rk4(&rhs, &[2.0], 10.0, &cfg);
        let want = 2.0 * (-0.5f64).exp();
        assert!((got[0] - want).abs() < 1e-9, "got {}, want {want}", got[0]);
    }

    #[test]
    fn interval_region_respects_openness() {
        let open = Region::Interval { component: 0, lo: 1.0, hi: 2.0, lo_open: true, hi_open: false };
        assert!(!open.contains(&[1.0], 0.0));
        assert!(open.contains(&[1.5], 0.0));
        assert!(open.contains(&[2.0], 0.0));
        assert!(open.contains(&[1.0 - 1e-12], 1e-9), "slack admits near-boundary states");
    }

    #[test]
    fn mixture_weights_must_sum_to_one() {
        let kernel = Kernel::Mixture(vec![
            (0.5, Kernel::SwitchMode { target: 1 }),
            (0.3, Kernel::SwitchMode { target: 2 }),
        ]);
        assert!(kernel.validate().is_err());
    }
}
