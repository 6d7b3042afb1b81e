//! Partially observed planning over finite models.
//!
//! The state of the base model is hidden. After each action the agent sees
//! an observation whose law depends on the state just entered, so decisions
//! must be made from a belief, a probability distribution over the hidden
//! states. The belief is a sufficient statistic for the history: this crate
//! filters it with exact Bayes updates, expands the beliefs reachable within
//! a horizon into a layered graph with per-stage deduplication, and solves
//! that graph by backward induction.
//!
//! - [`FinitePomdp`] pairs a base model with an observation table and an
//!   initial belief.
//! - [`belief_update`] and its variants implement the Bayes filter; the
//!   likelihood form handles evidence that is not a finite table, such as
//!   densities of continuous measurements.
//! - [`build_belief_mdp`] expands the reachable belief graph under a node
//!   cap; [`solve_pomdp`] adds the backward pass and yields a
//!   [`BeliefPolicy`].
//! - [`pomdp_simulate`] rolls a policy against the hidden chain.
//!
//! # Example
//!
//! A machine is either fine or broken, and only a noisy rattle gives it
//! away. Keeping a broken machine running is expensive, repairing costs a
//! flat rate either way:
//!
//! ```
//! use mdp_core::{CostModel, FiniteMdp, Horizon, Transitions};
//! use pomdp_core::{belief_update, solve_pomdp, Belief, FinitePomdp};
//!
//! let base = FiniteMdp::new(
//!     vec!["fine".into(), "broken".into()],
//!     vec!["run".into(), "repair".into()],
//!     Horizon::Finite(3),
//!     vec![vec![0, 1], vec![0, 1]],
//!     Transitions::Dense(vec![
//!         vec![vec![0.9, 0.1], vec![1.0, 0.0]],
//!         vec![vec![0.0, 1.0], vec![1.0, 0.0]],
//!     ]),
//!     CostModel::PerPair(vec![vec![0.0, 1.0], vec![4.0, 1.0]]),
//!     vec![0.0, 0.0],
//! )?;
//! let pomdp = FinitePomdp::new(
//!     base,
//!     vec!["hum".into(), "rattle".into()],
//!     vec![
//!         vec![vec![0.9, 0.1], vec![0.9, 0.1]],
//!         vec![vec![0.2, 0.8], vec![0.2, 0.8]],
//!     ],
//!     Belief::dirac(2, 0)?,
//! )?;
//!
//! let rattled = belief_update(&pomdp, &pomdp.initial_belief, 0, 1)?;
//! assert!(rattled.weight(1) > 0.4);
//!
//! let solution = solve_pomdp(&pomdp, 3)?;
//! let policy = solution.policy();
//! assert_eq!(policy.action(0, &pomdp.initial_belief), Some(0));
//! assert!(solution.value() < 1.0);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

mod belief;
mod error;
mod graph;
mod pomdp;
mod simulate;
mod update;

pub use belief::{Belief, BELIEF_SUM_TOL};
pub use error::PomdpError;
pub use graph::{
    build_belief_mdp, build_belief_mdp_with_cap, history_key, solve_belief_mdp, solve_pomdp,
    BeliefEdge, BeliefMdp, BeliefNode, BeliefPolicy, PolicyEntry, PomdpSolution,
    DEFAULT_NODE_CAP,
};
pub use pomdp::{FinitePomdp, OBS_ROW_TOL};
pub use simulate::{pomdp_simulate, sample_observation, PomdpTrajectory};
pub use update::{
    belief_cost, belief_cost_at, belief_predict, belief_predict_at, belief_transition,
    belief_transition_at, belief_update, belief_update_at, belief_update_with_likelihood,
    belief_update_with_likelihood_at,
};
