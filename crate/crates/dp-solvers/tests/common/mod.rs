//! Shared fixtures: the disease-progression model, random model
//! generators, and seeded RNG helpers.
#![allow(dead_code)]

use mdp_core::{CostModel, FiniteMdp, Horizon, Policy, Transitions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Remission state index of the medical fixture.
pub const REMISSION: usize = 0;
/// Death state index of the medical fixture.
pub const DEATH: usize = 81;
/// No-treatment action index.
pub const WAIT: usize = 0;
/// Treatment action index.
pub const TREAT: usize = 1;

/// Index of the relapse state with condition `m` (1 slow, 2 aggressive)
/// and marker value `zeta` in `0..40`.
pub fn relapse(m: usize, zeta: usize) -> usize {
    assert!((1..=2).contains(&m) && zeta < 40);
    1 + (m - 1) * 40 + zeta
}

/// Disease-progression model over 82 states `(condition, marker)` and a
/// 160-visit horizon; see the identical fixture in the `mdp-core` tests
/// for the transition rules.
pub fn medical_mdp(p_stay: f64, p_slow: f64, p_aggressive: f64) -> FiniteMdp {
    assert!((p_stay + p_slow + p_aggressive - 1.0).abs() <= 1e-12);
    let n = 82;
    let mut rows = vec![vec![Vec::new(); 2]; n];
    let mut stage = vec![vec![0.0f64; 2]; n];
    let mut terminal = vec![0.0f64; n];

    rows[REMISSION][WAIT] = vec![
        (REMISSION, p_stay),
        (relapse(1, 0), p_slow),
        (relapse(2, 0), p_aggressive),
    ];
    rows[REMISSION][TREAT] = vec![(REMISSION, 1.0)];
    stage[REMISSION][TREAT] = 2.0;

    for m in 1..=2 {
        for zeta in 0..40 {
            let s = relapse(m, zeta);
            let next = zeta + m;
            rows[s][WAIT] = if next < 40 {
                vec![(relapse(m, next), 1.0)]
            } else {
                vec![(DEATH, 1.0)]
            };
            rows[s][TREAT] = if zeta > 1 {
                vec![(relapse(m, zeta - 1), 1.0)]
            } else {
                vec![(REMISSION, 1.0)]
            };
            let sick = if m == 1 { 2.0 } else { 3.0 };
            stage[s][WAIT] = sick;
            stage[s][TREAT] = sick + 2.0;
        }
    }

    rows[DEATH][WAIT] = vec![(DEATH, 1.0)];
    rows[DEATH][TREAT] = vec![(DEATH, 1.0)];
    terminal[DEATH] = 200.0;

    FiniteMdp::unconstrained(
        Horizon::Finite(160),
        Transitions::Sparse(rows),
        CostModel::PerPair(stage),
        terminal,
    )
    .unwrap()
}

/// Random model with dense normalized rows, uniform `[0, 1)` costs, and a
/// non-empty random constraint set per state.
pub fn random_mdp(
    n_states: usize,
    n_actions: usize,
    horizon: Horizon,
    rng: &mut ChaCha8Rng,
) -> FiniteMdp {
    let mut probs = vec![vec![vec![0.0f64; n_states]; n_actions]; n_states];
    let mut costs = vec![vec![0.0f64; n_actions]; n_states];
    for s in 0..n_states {
        for a in 0..n_actions {
            let row = &mut probs[s][a];
            let mut total = 0.0;
            for p in row.iter_mut() {
                *p = rng.gen::<f64>() + 1e-3;
                total += *p;
            }
            for p in row.iter_mut() {
                *p /= total;
            }
            costs[s][a] = rng.gen();
        }
    }
    let constraints = (0..n_states)
        .map(|_| {
            let mut actions: Vec<usize> =
                (0..n_actions).filter(|_| rng.gen_bool(0.5)).collect();
            if actions.is_empty() {
                actions.push(rng.gen_range(0..n_actions));
            }
            actions
        })
        .collect();
    let terminal = (0..n_states).map(|_| rng.gen()).collect();
    FiniteMdp::new(
        (0..n_states).map(|s| format!("s{s}")).collect(),
        (0..n_actions).map(|a| format!("a{a}")).collect(),
        horizon,
        constraints,
        Transitions::Dense(probs),
        CostModel::PerPair(costs),
        terminal,
    )
    .unwrap()
}

/// Uniformly random deterministic stationary policy over the admissible
/// actions.
pub fn random_det_policy(mdp: &FiniteMdp, rng: &mut ChaCha8Rng) -> Policy {
    Policy::StationaryDeterministic(
        mdp.constraints
            .iter()
            .map(|k| k[rng.gen_range(0..k.len())])
            .collect(),
    )
}

/// Seeded generator for reproducible randomized tests.
pub fn test_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
