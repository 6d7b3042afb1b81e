//! Tabular Q-learning with an epsilon-greedy behavior policy.

use std::collections::HashMap;
use std::hash::Hash;

use rand::{Rng, RngCore};

use crate::error::RlError;
use crate::generative::GenerativeModel;

/// Action-value estimates keyed by state-action pairs.
///
/// Absent pairs read as zero, the tabular initialization, so the table
/// holds exactly the pairs that learning has touched; those are admissible
/// by construction because the behavior policy only plays admissible
/// actions.
#[derive(Debug, Clone)]
pub struct QTable<S, A> {
    values: HashMap<S, HashMap<A, f64>>,
}

impl<S, A> Default for QTable<S, A> {
    fn default() -> Self {
        Self { values: HashMap::new() }
    }
}

impl<S: Clone + Eq + Hash, A: Clone + Eq + Hash> QTable<S, A> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Current estimate for `(state, action)`, zero if never updated.
    pub fn get(&self, state: &S, action: &A) -> f64 {
        self.values
            .get(state)
            .and_then(|row| row.get(action))
            .copied()
            .unwrap_or(0.0)
    }

    /// Overwrites the estimate for `(state, action)`.
    pub fn set(&mut self, state: S, action: A, value: f64) {
        self.values.entry(state).or_default().insert(action, value);
    }

    /// Smallest estimate over `actions`, reading absent pairs as zero.
    /// `None` when `actions` is empty.
    pub fn min_over(&self, state: &S, actions: &[A]) -> Option<f64> {
        actions
            .iter()
            .map(|a| self.get(state, a))
            .fold(None, |best, q| match best {
                Some(b) if b <= q => Some(b),
                _ => Some(q),
            })
    }

    /// Greedy action over `actions`, first minimizer on ties. `None` when
    /// `actions` is empty.
    pub fn greedy(&self, state: &S, actions: &[A]) -> Option<A> {
        let mut best: Option<(f64, &A)> = None;
        for a in actions {
            let q = self.get(state, a);
            if best.map_or(true, |(b, _)| q < b) {
                best = Some((q, a));
            }
        }
        best.map(|(_, a)| a.clone())
    }

    /// Number of stored state-action pairs.
    pub fn len(&self) -> usize {
        self.values.values().map(HashMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Iterates over all stored `(state, action, estimate)` triples in
    /// arbitrary order.
    pub fn iter(&self) -> impl Iterator<Item = (&S, &A, f64)> {
        self.values
            .iter()
            .flat_map(|(s, row)| row.iter().map(move |(a, &q)| (s, a, q)))
    }
}

/// Learns action values by stochastic approximation of the Bellman
/// optimality operator.
///
/// Each step chooses the greedy action (smallest estimate, first on ties)
/// with probability `1 - epsilon` and a uniform admissible action
/// otherwise, then applies
/// `Q(s,a) += alpha * (c + gamma * min_a' Q(s',a') - Q(s,a))`,
/// with a zero continuation at terminal states. Episodes start at
/// [`GenerativeModel::reset`] and end at a terminal state or after
/// `episode_len` steps.
///
/// # Errors
/// [`RlError::InvalidArgument`] unless `gamma` and `alpha` lie in (0, 1),
/// `epsilon` in [0, 1], and both episode counts are positive.
pub fn q_learning<G>(
    gen: &G,
    gamma: f64,
    alpha: f64,
    epsilon: f64,
    n_episodes: usize,
    episode_len: usize,
    rng: &mut dyn RngCore,
) -> Result<QTable<G::State, G::Action>, RlError>
where
    G: GenerativeModel,
    G::State: Eq + Hash,
    G::Action: Eq + Hash,
{
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(RlError::InvalidArgument(format!(
            "discount factor {gamma} outside (0, 1)"
        )));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(RlError::InvalidArgument(format!(
            "learning rate {alpha} outside (0, 1)"
        )));
    }
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(RlError::InvalidArgument(format!(
            "exploration rate {epsilon} outside [0, 1]"
        )));
    }
    if n_episodes == 0 || episode_len == 0 {
        return Err(RlError::InvalidArgument(
            "episode count and length must be positive".into(),
        ));
    }

    let mut q = QTable::new();
    for _ in 0..n_episodes {
        let mut state = gen.reset(rng);
        for _ in 0..episode_len {
            if gen.is_terminal(&state) {
                break;
            }
            let actions = gen.admissible(&state);
            let Some(greedy) = q.greedy(&state, &actions) else {
                break;
            };
            let action = if rng.gen_bool(epsilon) {
                actions[rng.gen_range(0..actions.len())].clone()
            } else {
                greedy
            };
            let (next, cost) = gen.step(&state, &action, rng);
            let continuation = if gen.is_terminal(&next) {
                0.0
            } else {
                q.min_over(&next, &gen.admissible(&next)).unwrap_or(0.0)
            };
            let old = q.get(&state, &action);
            q.set(
                state.clone(),
                action,
                old + alpha * (cost + gamma * continuation - old),
            );
            state = next;
        }
    }
    Ok(q)
}
