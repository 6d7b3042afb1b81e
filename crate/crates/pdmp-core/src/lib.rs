//! Piecewise-deterministic Markov processes: definition, exact simulation,
//! embedded chains, and impulse control.
//!
//! A piecewise-deterministic process alternates deterministic motion along
//! a per-mode flow with isolated jumps. Jumps arrive either randomly,
//! driven by a state-dependent intensity, or deterministically when the
//! flow reaches the boundary of the active mode's region; a post-jump
//! kernel then relocates the state. The tuple (flow, intensity, kernel)
//! together with the per-mode regions fully determines the law of the
//! process.
//!
//! The crate provides:
//!
//! - model definition from per-mode local characteristics, programmatically
//!   ([`model`]) or from JSON naming built-in families ([`config`]);
//! - exact simulation by inverse-hazard sampling
//!   ([`simulate_iterative`], [`simulate_until`]) and independently by
//!   thinning against a global intensity bound ([`simulate_ssa`]), plus
//!   grid sampling ([`skeleton_sample`]);
//! - the embedded post-jump chain and trajectory reconstruction from it
//!   ([`canonical_chain`], [`reconstruct_trajectory`]);
//! - impulse control, where a strategy teleports the process to restart
//!   states at chosen times ([`simulate_controlled`]), with Monte-Carlo
//!   evaluation of discounted running/intervention/terminal costs
//!   ([`evaluate_strategy_cost`], [`evaluate_no_impulse_cost`]).
//!
//! # Example
//!
//! A patient marker that decays exponentially under treatment until it
//! reaches a remission level, holds there until a random relapse, then
//! grows again:
//!
//! ```
//! use std::collections::BTreeMap;
//! use pdmp_core::{
//!     simulate_until, Boundary, Flow, HybridState, Intensity, Kernel, ModeDynamics,
//!     PdmpModel, Region,
//! };
//! use rand::SeedableRng;
//!
//! let remission_level = 1.0;
//! let modes = BTreeMap::from([
//!     (-1, ModeDynamics {
//!         flow: Flow::ExponentialScale { rate: -0.05 },
//!         intensity: Intensity::Zero,
//!         kernel: Kernel::SwitchMode { target: 0 },
//!         boundary: Boundary::ExponentialHit { rate: -0.05, level: remission_level, component: 0 },
//!         region: Region::Interval { component: 0, lo: remission_level, hi: f64::INFINITY, lo_open: true, hi_open: true },
//!     }),
//!     (0, ModeDynamics {
//!         flow: Flow::Constant,
//!         intensity: Intensity::Constant(0.1),
//!         kernel: Kernel::SwitchMode { target: 1 },
//!         boundary: Boundary::None,
//!         region: Region::Point { euclid: vec![remission_level], tol: 1e-9 },
//!     }),
//!     (1, ModeDynamics {
//!         flow: Flow::ExponentialScale { rate: 0.07 },
//!         intensity: Intensity::Zero,
//!         kernel: Kernel::SwitchMode { target: 0 },
//!         boundary: Boundary::None,
//!         region: Region::Interval { component: 0, lo: remission_level, hi: f64::INFINITY, lo_open: false, hi_open: true },
//!     }),
//! ]);
//! let model = PdmpModel::new(modes, false).unwrap();
//!
//! let x0 = HybridState::scalar(-1, 2.0);
//! let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
//! let traj = simulate_until(&model, &x0, 50.0, &mut rng).unwrap();
//!
//! // The first jump is the deterministic remission hit.
//! assert_eq!(traj.jumps[0].post.mode, 0);
//! assert!((traj.jumps[0].time - (0.5f64.ln() / -0.05)).abs() < 1e-12);
//! ```
//!
//! Models are immutable after construction and safe for concurrent
//! read-only use; every simulation call owns its generator state, so batch
//! Monte-Carlo runs may fan out across workers with independently derived
//! seeds and reduce associatively.

pub mod config;
pub mod control;
pub mod cost;
pub mod error;
pub mod model;
pub mod quad;
pub mod simulate;
pub mod state;
pub mod trajectory;

pub use config::ModelConfig;
pub use control::{simulate_controlled, ImpulseStrategy, Intervention};
pub use cost::{
    evaluate_no_impulse_cost, evaluate_strategy_cost, mean_and_se, trajectory_cost, CostSpec,
    DISCOUNT_TRUNCATION_FLOOR,
};
pub use error::PdmpError;
pub use model::{
    Boundary, Flow, Intensity, Kernel, ModeDynamics, PdmpModel, Region, SimConfig,
};
pub use simulate::{simulate_iterative, simulate_ssa, simulate_until, skeleton_sample};
pub use state::HybridState;
pub use trajectory::{
    canonical_chain, reconstruct_trajectory, JumpKind, JumpRecord, Segment, Trajectory,
};
