//! Shared fixtures: small MDPs with known exact solutions and seeded RNG
//! helpers.
#![allow(dead_code)]

use mdp_core::{CostModel, FiniteMdp, Horizon, Transitions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Deterministic ring over `n` states with unit costs: action 0 stays,
/// action 1 advances. Every discounted action value equals
/// `1 / (1 - gamma)`, so the table has a closed-form limit while the
/// trajectory still has to mix through all states.
pub fn unit_cost_ring(n: usize) -> FiniteMdp {
    let mut rows = vec![vec![Vec::new(); 2]; n];
    for s in 0..n {
        rows[s][0] = vec![(s, 1.0)];
        rows[s][1] = vec![((s + 1) % n, 1.0)];
    }
    FiniteMdp::unconstrained(
        Horizon::Infinite,
        Transitions::Sparse(rows),
        CostModel::PerPair(vec![vec![1.0, 1.0]; n]),
        vec![0.0; n],
    )
    .unwrap()
}

/// Dense random model with all actions admissible, uniform random costs,
/// and zero terminal costs, so generative planning and exact
/// finite-horizon solving optimize the same objective.
pub fn random_planning_mdp(
    n_states: usize,
    n_actions: usize,
    horizon: usize,
    rng: &mut ChaCha8Rng,
) -> FiniteMdp {
    let transitions: Vec<Vec<Vec<f64>>> = (0..n_states)
        .map(|_| (0..n_actions).map(|_| random_row(n_states, rng)).collect())
        .collect();
    let costs: Vec<Vec<f64>> = (0..n_states)
        .map(|_| (0..n_actions).map(|_| rng.gen::<f64>()).collect())
        .collect();
    FiniteMdp::unconstrained(
        Horizon::Finite(horizon),
        Transitions::Dense(transitions),
        CostModel::PerPair(costs),
        vec![0.0; n_states],
    )
    .unwrap()
}

/// Like [`random_planning_mdp`] but with a random non-empty admissible
/// subset per state and an infinite horizon.
pub fn random_constrained_mdp(
    n_states: usize,
    n_actions: usize,
    rng: &mut ChaCha8Rng,
) -> FiniteMdp {
    let mut mdp = random_planning_mdp(n_states, n_actions, 1, rng);
    mdp.horizon = Horizon::Infinite;
    mdp.constraints = (0..n_states)
        .map(|_| {
            let mut set: Vec<usize> = (0..n_actions).filter(|_| rng.gen_bool(0.6)).collect();
            if set.is_empty() {
                set.push(rng.gen_range(0..n_actions));
            }
            set
        })
        .collect();
    mdp
}

pub fn test_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Distinct seeds for repeated runs.
pub fn seeds(base: u64, n: usize) -> Vec<u64> {
    (0..n as u64).map(|k| base.wrapping_add(k)).collect()
}

fn random_row(n_states: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let raw: Vec<f64> = (0..n_states).map(|_| rng.gen::<f64>() + 1e-3).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}
