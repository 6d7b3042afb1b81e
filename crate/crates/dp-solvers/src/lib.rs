//! Exact dynamic-programming solvers for the finite MDPs of `mdp-core`:
//! backward induction for finite horizons, value iteration and policy
//! iteration for discounted infinite horizons, and a brute-force policy
//! enumeration oracle for cross-checking on small instances.
//!
//! All solvers break argmin ties toward the lowest action index and only
//! ever pick admissible actions, so their outputs are reproducible and
//! pass `Policy::validate_for` on the solved model.
//!
//! ```
//! use dp_solvers::value_iteration;
//! use mdp_core::{CostModel, FiniteMdp, Horizon, Transitions};
//!
//! // Paying 1 forever at discount 0.5 is worth 2; a free exit is worth 0.
//! let mdp = FiniteMdp::unconstrained(
//!     Horizon::Infinite,
//!     Transitions::Dense(vec![
//!         vec![vec![1.0, 0.0], vec![0.0, 1.0]],
//!         vec![vec![0.0, 1.0], vec![0.0, 1.0]],
//!     ]),
//!     CostModel::PerPair(vec![vec![1.0, 1.0], vec![0.0, 0.0]]),
//!     vec![0.0, 0.0],
//! )?;
//! let result = value_iteration(&mdp, 0.5, 1e-9)?;
//! let v = result.stationary_values().unwrap();
//! // Switching out of the sticky state pays 1 once: V(0) = 1.
//! assert!((v[0] - 1.0).abs() <= 1e-9);
//! assert!(v[1].abs() <= 1e-9);
//! # Ok::<(), dp_solvers::DpError>(())
//! ```

mod backward;
mod bellman;
mod brute;
mod error;
mod infinite;
mod result;

pub use backward::backward_induction;
pub use bellman::{bellman_backup, greedy_policy};
pub use brute::{brute_force_optimal, BRUTE_FORCE_LIMIT};
pub use error::DpError;
pub use infinite::{
    policy_iteration, value_iteration, value_iteration_warm, POLICY_ITERATION_CAP,
};
pub use result::SolveResult;
