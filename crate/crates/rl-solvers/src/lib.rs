//! Sampling-based solvers that only need a generative model: tabular
//! Q-learning and UCT-style Monte-Carlo tree search, both phrased for cost
//! minimization.
//!
//! Neither solver reads transition probabilities. Everything goes through
//! the [`GenerativeModel`] trait, which samples one transition at a time;
//! [`FiniteMdpModel`] adapts a stationary `mdp_core::FiniteMdp` to that
//! interface so the exact solvers in `dp-solvers` can serve as oracles.
//!
//! ```
//! use mdp_core::{CostModel, FiniteMdp, Horizon, Transitions};
//! use rand::SeedableRng;
//! use rand_chacha::ChaCha8Rng;
//! use rl_solvers::{mcts_plan, FiniteMdpModel, DEFAULT_C_UCT};
//!
//! // Action 0 loops at cost 1 per step; action 1 exits for free into an
//! // absorbing room. The search must recommend the exit.
//! let mdp = FiniteMdp::unconstrained(
//!     Horizon::Finite(6),
//!     Transitions::Dense(vec![
//!         vec![vec![1.0, 0.0], vec![0.0, 1.0]],
//!         vec![vec![0.0, 1.0], vec![0.0, 1.0]],
//!     ]),
//!     CostModel::PerPair(vec![vec![1.0, 0.0], vec![0.0, 0.0]]),
//!     vec![0.0, 0.0],
//! )?;
//! let model = FiniteMdpModel::new(&mdp, vec![0])?;
//!
//! let mut rng = ChaCha8Rng::seed_from_u64(1);
//! let action = mcts_plan(&model, &0, 128, DEFAULT_C_UCT, 1.0, 6, &mut rng)?;
//! assert_eq!(action, 1);
//! # Ok::<(), rl_solvers::RlError>(())
//! ```

mod error;
mod generative;
mod mcts;
mod qlearning;

pub use error::RlError;
pub use generative::{suggested_rollout_depth, FiniteMdpModel, GenerativeModel};
pub use mcts::{
    mcts_plan, mcts_search, uct_score, BackupRule, MctsConfig, SearchNode, SearchOutcome,
    DEFAULT_C_UCT,
};
pub use qlearning::{q_learning, QTable};
