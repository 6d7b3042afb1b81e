//! Q-learning against exact dynamic-programming oracles.

mod common;

use common::{random_constrained_mdp, test_rng, unit_cost_ring};
use dp_solvers::value_iteration;
use mdp_core::q_from_v_discounted;
use proptest::prelude::*;
use rl_solvers::{q_learning, FiniteMdpModel, QTable};

const GAMMA: f64 = 0.9;

/// Largest gap between learned estimates and the exact action values over
/// all admissible pairs.
fn sup_gap(mdp: &mdp_core::FiniteMdp, learned: &QTable<usize, usize>, exact: &[Vec<f64>]) -> f64 {
    let mut gap: f64 = 0.0;
    for (s, actions) in mdp.constraints.iter().enumerate() {
        for &a in actions {
            gap = gap.max((learned.get(&s, &a) - exact[s][a]).abs());
        }
    }
    gap
}

#[test]
fn ring_estimates_match_value_iteration() {
    let mdp = unit_cost_ring(4);
    let solved = value_iteration(&mdp, GAMMA, 1e-9).unwrap();
    let exact = q_from_v_discounted(&mdp, solved.stationary_values().unwrap(), GAMMA).unwrap();

    let model = FiniteMdpModel::new(&mdp, vec![0, 1, 2, 3]).unwrap();
    let mut rng = test_rng(20);
    // 500 episodes of 100 steps: 5e4 updates.
    let learned = q_learning(&model, GAMMA, 0.5, 0.3, 500, 100, &mut rng).unwrap();

    assert!(sup_gap(&mdp, &learned, &exact) <= 0.05);
}

#[test]
fn pure_exploration_converges_with_more_steps() {
    let mdp = unit_cost_ring(4);
    let solved = value_iteration(&mdp, GAMMA, 1e-9).unwrap();
    let exact = q_from_v_discounted(&mdp, solved.stationary_values().unwrap(), GAMMA).unwrap();

    let model = FiniteMdpModel::new(&mdp, vec![0, 1, 2, 3]).unwrap();
    let mut rng = test_rng(21);
    // 2000 episodes of 100 steps: 2e5 updates under epsilon = 1.
    let learned = q_learning(&model, GAMMA, 0.5, 1.0, 2000, 100, &mut rng).unwrap();

    assert!(sup_gap(&mdp, &learned, &exact) <= 0.05);
}

#[test]
fn learned_entries_cover_only_admissible_pairs() {
    for seed in [0, 1, 2] {
        let mdp = random_constrained_mdp(5, 3, &mut test_rng(300 + seed));
        let starts: Vec<usize> = (0..mdp.n_states()).collect();
        let model = FiniteMdpModel::new(&mdp, starts).unwrap();
        let mut rng = test_rng(400 + seed);
        let learned = q_learning(&model, GAMMA, 0.4, 1.0, 200, 40, &mut rng).unwrap();

        assert!(!learned.is_empty());
        for (s, a, q) in learned.iter() {
            assert!(mdp.constraints[*s].contains(a));
            assert!(q.is_finite());
        }
    }
}

#[test]
fn greedy_actions_agree_with_the_exact_policy_where_the_gap_is_clear() {
    let mdp = random_constrained_mdp(4, 3, &mut test_rng(77));
    let solved = value_iteration(&mdp, GAMMA, 1e-9).unwrap();
    let exact = q_from_v_discounted(&mdp, solved.stationary_values().unwrap(), GAMMA).unwrap();

    let starts: Vec<usize> = (0..mdp.n_states()).collect();
    let model = FiniteMdpModel::new(&mdp, starts).unwrap();
    let mut rng = test_rng(78);
    let learned = q_learning(&model, GAMMA, 0.3, 0.5, 3000, 60, &mut rng).unwrap();

    for (s, actions) in mdp.constraints.iter().enumerate() {
        let best = actions
            .iter()
            .copied()
            .min_by(|&a, &b| exact[s][a].total_cmp(&exact[s][b]))
            .unwrap();
        let runner_up = actions
            .iter()
            .filter(|&&a| a != best)
            .map(|&a| exact[s][a])
            .fold(f64::INFINITY, f64::min);
        // Skip states whose top two actions are too close to call.
        if runner_up - exact[s][best] < 0.05 {
            continue;
        }
        assert_eq!(learned.greedy(&s, actions), Some(best), "state {s}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// With stage costs in [0, 1] every update is a convex combination of
    /// values inside [0, 1/(1-gamma)], so estimates can never escape that
    /// envelope no matter how exploration and the model interleave.
    #[test]
    fn estimates_stay_inside_the_cost_envelope(
        model_seed in 0u64..1_000,
        run_seed in 0u64..1_000,
        n_states in 2usize..6,
        epsilon in 0.0f64..=1.0,
    ) {
        let mdp = random_constrained_mdp(n_states, 3, &mut test_rng(model_seed));
        let starts: Vec<usize> = (0..n_states).collect();
        let model = FiniteMdpModel::new(&mdp, starts).unwrap();
        let mut rng = test_rng(run_seed);
        let learned = q_learning(&model, GAMMA, 0.5, epsilon, 30, 30, &mut rng).unwrap();

        let envelope = 1.0 / (1.0 - GAMMA);
        for (_, _, q) in learned.iter() {
            prop_assert!((0.0..=envelope + 1e-9).contains(&q), "estimate {q}");
        }
    }
}
