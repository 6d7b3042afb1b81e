//! Expansion of the reachable hyperstates into an explicit model, checked
//! against a direct stage-indexed recursion and the true-row optimum.

mod common;

use std::collections::{HashMap, VecDeque};

use bamdp::{
    build_bamdp, build_bamdp_with_cap, BamdpError, BayesAdaptiveMdp, HyperState, UnknownRow,
};
use common::*;
use dp_solvers::backward_induction;
use mdp_core::{CostModel, FiniteMdp, Horizon, Policy, Transitions};

fn wear_chain() -> FiniteMdp {
    let transitions = Transitions::Dense(vec![
        vec![vec![0.9, 0.1], vec![1.0, 0.0]],
        vec![vec![0.0, 1.0], vec![1.0, 0.0]],
    ]);
    let costs = CostModel::PerPair(vec![vec![1.0, 3.0], vec![4.0, 6.0]]);
    FiniteMdp::unconstrained(Horizon::Finite(5), transitions, costs, vec![0.0, 2.0]).unwrap()
}

/// Optimal cost-to-go by direct recursion over the decision tree,
/// memoized on (stage, hyperstate); independent of the flat expansion and
/// its solver.
fn tree_optimal_value(
    model: &BayesAdaptiveMdp,
    hyper: &HyperState,
    t: usize,
    horizon: usize,
    memo: &mut HashMap<(usize, HyperState), f64>,
) -> f64 {
    if t == horizon {
        return model.base.terminal_cost(hyper.state);
    }
    if let Some(&v) = memo.get(&(t, hyper.clone())) {
        return v;
    }
    let mut best = f64::INFINITY;
    for &action in &model.base.constraints[hyper.state] {
        let mut q = 0.0;
        for (next, p) in model.bamdp_transition(hyper, action).unwrap() {
            q += p
                * (model.base.step_cost(0, hyper.state, action, next.state)
                    + tree_optimal_value(model, &next, t + 1, horizon, memo));
        }
        best = best.min(q);
    }
    memo.insert((t, hyper.clone()), best);
    best
}

#[test]
fn backward_induction_on_the_expansion_matches_the_direct_recursion() {
    let horizon = 8;
    let medical = medical_bamdp(0.6, 0.25, 0.15, [5, 1, 0]);
    let wear = BayesAdaptiveMdp::new(
        wear_chain(),
        vec![UnknownRow { state: 0, action: 0, successors: vec![0, 1] }],
        vec![vec![3, 1]],
    )
    .unwrap();

    for (model, start) in [(medical, REMISSION), (wear, 0)] {
        let expanded = build_bamdp(&model, start, horizon).unwrap();
        let solved = backward_induction(expanded.mdp()).unwrap();

        let mut memo = HashMap::new();
        let root = model.initial_hyperstate(start).unwrap();
        let direct = tree_optimal_value(&model, &root, 0, horizon, &mut memo);
        assert!((solved.values[0][0] - direct).abs() <= 1e-12);

        for ((t, hyper), v) in &memo {
            let i = expanded.index_of(hyper).expect("recursion visits only expanded states");
            assert!(
                (solved.values[*t][i] - v).abs() <= 1e-12,
                "stage {t}, hyperstate {}",
                hyper.key()
            );
        }
    }
}

#[test]
fn the_known_model_limit_matches_planning_with_the_true_row() {
    let horizon = 16;
    let model = medical_bamdp(0.6, 0.25, 0.15, [600_000, 250_000, 150_000]);
    let expanded = build_bamdp(&model, REMISSION, horizon).unwrap();
    let adaptive = backward_induction(expanded.mdp()).unwrap().values[0][0];

    let truth = truncated(medical_mdp(0.6, 0.25, 0.15), horizon);
    let known = backward_induction(&truth).unwrap().values[0][REMISSION];

    assert!(
        (adaptive - known).abs() <= 1e-3,
        "adaptive {adaptive}, known {known}"
    );
}

#[test]
fn a_dirac_prior_freezes_the_learned_row() {
    let horizon = 12;
    let model = medical_bamdp(0.6, 0.25, 0.15, [1, 0, 0]);
    let expanded = build_bamdp(&model, REMISSION, horizon).unwrap();
    let adaptive = backward_induction(expanded.mdp()).unwrap().values[0][0];

    let frozen = truncated(medical_mdp(1.0, 0.0, 0.0), horizon);
    let known = backward_induction(&frozen).unwrap().values[0][REMISSION];

    assert!((adaptive - known).abs() <= 1e-12);
}

#[test]
fn with_no_unknown_rows_the_expansion_is_the_reachable_base_model() {
    let base = wear_chain();
    let model = BayesAdaptiveMdp::new(base.clone(), Vec::new(), Vec::new()).unwrap();
    let expanded = build_bamdp(&model, 0, 5).unwrap();

    assert_eq!(expanded.n_states(), 2);
    assert_eq!(expanded.states()[0], HyperState { state: 0, counts: Vec::new() });

    let flat = backward_induction(expanded.mdp()).unwrap();
    let direct = backward_induction(&base).unwrap();
    assert!((flat.values[0][0] - direct.values[0][0]).abs() <= 1e-12);
}

#[test]
fn every_expanded_edge_conserves_count_mass() {
    let horizon = 6;
    let model = medical_bamdp(0.6, 0.25, 0.15, [5, 1, 0]);
    let expanded = build_bamdp(&model, REMISSION, horizon).unwrap();
    let mdp = expanded.mdp();

    let total = |h: &HyperState| h.counts.iter().flatten().sum::<u64>() as i64;

    let mut depth = vec![usize::MAX; expanded.n_states()];
    depth[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for &action in &mdp.constraints[i] {
            mdp.for_each_successor(0, i, action, |j, _| {
                if depth[j] == usize::MAX {
                    depth[j] = depth[i] + 1;
                    queue.push_back(j);
                }
            });
        }
    }

    for i in 0..expanded.n_states() {
        assert!(depth[i] <= horizon, "unreachable state in the expansion");
        if depth[i] == horizon {
            continue;
        }
        let here = &expanded.states()[i];
        for &action in &mdp.constraints[i] {
            let grows = model.row_index(here.state, action).is_some() as i64;
            mdp.for_each_successor(0, i, action, |j, _| {
                assert_eq!(total(&expanded.states()[j]) - total(here), grows);
            });
        }
    }
}

#[test]
fn the_cap_error_names_the_generative_fallback() {
    let model = medical_bamdp(0.6, 0.25, 0.15, [5, 1, 0]);
    let err = build_bamdp_with_cap(&model, REMISSION, FOLLOW_UP_HORIZON, 200).unwrap_err();

    assert!(matches!(err, BamdpError::CapExceeded { cap: 200 }));
    assert!(err.to_string().contains("generative"));
}

#[test]
fn solved_policies_export_keyed_by_counts() {
    let horizon = 4;
    let model = medical_bamdp(0.6, 0.25, 0.15, [5, 1, 0]);
    let expanded = build_bamdp(&model, REMISSION, horizon).unwrap();
    let solved = backward_induction(expanded.mdp()).unwrap();

    let json = expanded.policy_json(&solved.policy).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(doc["horizon"], serde_json::json!(horizon));

    let root = doc["actions"]["s0|5,1,0"].as_array().expect("per-stage actions");
    assert_eq!(root.len(), horizon);
    assert!(root.iter().all(|a| a == 0 || a == 1));

    assert!(matches!(solved.policy, Policy::MarkovDeterministic(_)));
}
