//! Finite Markov decision processes with explicit admissibility
//! constraints, trajectory simulation, and policy evaluation.
//!
//! A model couples a finite state and action set with per-state
//! admissible-action constraints, stationary (optionally stage-overridden)
//! transition tables in dense or sparse form, and per-pair or per-triple
//! stage costs plus a terminal cost vector. Policies come in the four
//! combinations of deterministic/stochastic and stationary/Markov, and
//! every simulator and evaluator checks admissibility before running.
//!
//! ```
//! use mdp_core::{CostModel, FiniteMdp, Horizon, Policy, Transitions};
//! use mdp_core::evaluate_policy_exact;
//!
//! // Two states: 0 drifts to the absorbing state 1 and pays 1 per stage.
//! let mdp = FiniteMdp::unconstrained(
//!     Horizon::Infinite,
//!     Transitions::Dense(vec![
//!         vec![vec![0.5, 0.5]],
//!         vec![vec![0.0, 1.0]],
//!     ]),
//!     CostModel::PerPair(vec![vec![1.0], vec![0.0]]),
//!     vec![0.0, 0.0],
//! )?;
//! let policy = Policy::StationaryDeterministic(vec![0, 0]);
//! let v = evaluate_policy_exact(&mdp, &policy, 0.5)?;
//! // V(0) = 1 + 0.5 * 0.5 * V(0), so V(0) = 4/3.
//! assert!((v[0] - 4.0 / 3.0).abs() <= 1e-12);
//! assert!(v[1].abs() <= 1e-12);
//! # Ok::<(), mdp_core::MdpError>(())
//! ```

mod error;
mod evaluate;
mod mdp;
mod policy;
mod simulate;

pub use error::MdpError;
pub use evaluate::{
    evaluate_average_mc, evaluate_discounted_mc, evaluate_policy_exact, evaluate_total_cost_mc,
    mean_and_se, q_from_v_discounted, q_from_v_stage, suggested_truncation,
    POLICY_EVAL_RESIDUAL_TOL,
};
pub use mdp::{CostModel, Diagnostic, FiniteMdp, Horizon, Transitions, ROW_SUM_TOL};
pub use policy::{Policy, WEIGHT_SUM_TOL};
pub use simulate::{
    sample_successor, simulate_policy, simulate_policy_truncated, TrajectoryRecord, TrajectoryStep,
};
