//! Bayes-adaptive decision processes: finite MDPs whose unknown
//! transition rows carry Dirichlet successor counts, plus the matching
//! count model for observation probabilities.
//!
//! A [`BayesAdaptiveMdp`] pairs a base model with declared unknown rows
//! and prior pseudo-counts. A [`HyperState`] couples the base state with
//! the counts seen so far, so acting optimally trades off exploring the
//! unknown rows against exploiting the current estimates.
//! [`build_bamdp`] expands every reachable hyperstate into an explicit
//! finite MDP for exact solvers; [`BamdpModel`] exposes the same process
//! generatively for sampling planners when the expansion is too large.
//! [`ObsCounts`] applies the counting scheme to observation
//! probabilities and exports a point-estimate observation table for
//! belief filters.
//!
//! ```
//! use bamdp::{build_bamdp, BayesAdaptiveMdp, UnknownRow};
//! use mdp_core::{CostModel, FiniteMdp, Horizon, Transitions};
//!
//! // A machine keeps running (state 0) or wears out (state 1); how often
//! // it wears out is unknown, with three stays and one wear-out seen so
//! // far. Wear traps the machine and a repair fee falls due at the end.
//! let base = FiniteMdp::unconstrained(
//!     Horizon::Finite(2),
//!     Transitions::Dense(vec![
//!         vec![vec![0.9, 0.1]],
//!         vec![vec![0.0, 1.0]],
//!     ]),
//!     CostModel::PerPair(vec![vec![1.0], vec![0.0]]),
//!     vec![0.0, 5.0],
//! )?;
//! let row = UnknownRow { state: 0, action: 0, successors: vec![0, 1] };
//! let model = BayesAdaptiveMdp::new(base, vec![row], vec![vec![3, 1]])?;
//!
//! // Staying is 3:1 against wearing out, and seeing a stay makes it 4:1.
//! let start = model.initial_hyperstate(0)?;
//! let moves = model.bamdp_transition(&start, 0)?;
//! assert_eq!(moves.len(), 2);
//! assert!((moves[0].1 - 0.75).abs() <= 1e-12);
//! assert_eq!(moves[0].0.counts, vec![vec![4, 1]]);
//!
//! // Two stages reach the root, two one-step, and two two-step states.
//! let expanded = build_bamdp(&model, 0, 2)?;
//! assert_eq!(expanded.n_states(), 5);
//! assert_eq!(expanded.states()[0].key(), "s0|3,1");
//! # Ok::<(), bamdp::BamdpError>(())
//! ```

mod build;
mod error;
mod generative;
mod hyper;
mod obs;

pub use build::{build_bamdp, build_bamdp_with_cap, HyperstateMdp, DEFAULT_HYPERSTATE_CAP};
pub use error::BamdpError;
pub use generative::BamdpModel;
pub use hyper::{BayesAdaptiveMdp, HyperState, UnknownRow};
pub use obs::{bapomdp_count_update, bapomdp_obs_prob, ObsCounts};
