//! Shared fixtures: a disease-progression model with two relapse speeds,
//! plus generators for random models and random admissible policies used
//! by the property tests.
#![allow(dead_code)]

use mdp_core::{CostModel, FiniteMdp, Horizon, Policy, Transitions};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Biomarker value at which the patient dies.
pub const DEATH_MARKER: usize = 40;
/// Number of follow-up visits.
pub const FOLLOW_UP_HORIZON: usize = 160;
/// Terminal cost charged when the patient has died.
pub const DEATH_COST: f64 = 200.0;

/// Remission state index.
pub const REMISSION: usize = 0;
/// Death state index.
pub const DEATH: usize = 81;
/// No-treatment action index.
pub const WAIT: usize = 0;
/// Treatment action index.
pub const TREAT: usize = 1;

/// Index of the relapse state with condition `m` (1 slow, 2 aggressive)
/// and marker value `zeta` in `0..40`.
pub fn relapse(m: usize, zeta: usize) -> usize {
    assert!((1..=2).contains(&m) && zeta < DEATH_MARKER);
    1 + (m - 1) * DEATH_MARKER + zeta
}

/// Disease-progression model over 82 states `(condition, marker)`.
///
/// Condition 0 is remission (marker pinned at 0), conditions 1 and 2 are
/// slow and aggressive relapses whose markers rise by 1 and 2 per visit
/// when untreated, and condition 3 is absorbing death, reached when the
/// marker hits 40. Treatment lowers the marker by 1 per visit and returns
/// the patient to remission from marker 1 or 0. From remission without
/// treatment the patient stays put with probability `p_stay` or enters a
/// slow or aggressive relapse at marker 0 with probabilities `p_slow` and
/// `p_aggressive`; under treatment remission is certain to persist.
///
/// Stage costs are 2 per treatment plus 2 during a slow and 3 during an
/// aggressive relapse; dying costs 200 at the horizon of 160 visits.
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
        for zeta in 0..DEATH_MARKER {
            let s = relapse(m, zeta);
            let next = zeta + m;
            rows[s][WAIT] = if next < DEATH_MARKER {
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
    terminal[DEATH] = DEATH_COST;

    let mut mdp = FiniteMdp::unconstrained(
        Horizon::Finite(FOLLOW_UP_HORIZON),
        Transitions::Sparse(rows),
        CostModel::PerPair(stage),
        terminal,
    )
    .unwrap();
    mdp.state_labels = (0..n).map(med_label).collect();
    mdp.action_labels = vec!["wait".into(), "treat".into()];
    mdp
}

fn med_label(s: usize) -> String {
    match s {
        REMISSION => "(0,0)".into(),
        DEATH => format!("(3,{DEATH_MARKER})"),
        _ => {
            let m = 1 + (s - 1) / DEATH_MARKER;
            format!("({m},{})", (s - 1) % DEATH_MARKER)
        }
    }
}

/// Random model with dense normalized rows, uniform `[0, 1)` stage costs
/// and terminal costs, and a non-empty random constraint set per state.
pub fn random_mdp(n_states: usize, n_actions: usize, horizon: Horizon, rng: &mut ChaCha8Rng) -> FiniteMdp {
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

/// Random admissible policy of any of the four kinds. Markov variants get
/// tables covering `stages` decision epochs.
pub fn random_policy(mdp: &FiniteMdp, stages: usize, rng: &mut ChaCha8Rng) -> Policy {
    let det_rule = |rng: &mut ChaCha8Rng| -> Vec<usize> {
        (0..mdp.n_states())
            .map(|s| {
                let k = &mdp.constraints[s];
                k[rng.gen_range(0..k.len())]
            })
            .collect()
    };
    let stoch_rule = |rng: &mut ChaCha8Rng| -> Vec<Vec<(usize, f64)>> {
        (0..mdp.n_states())
            .map(|s| {
                let k = &mdp.constraints[s];
                let raw: Vec<f64> = k.iter().map(|_| rng.gen::<f64>() + 1e-3).collect();
                let total: f64 = raw.iter().sum();
                k.iter().zip(&raw).map(|(&a, w)| (a, w / total)).collect()
            })
            .collect()
    };
    match rng.gen_range(0..4) {
        0 => Policy::StationaryDeterministic(det_rule(rng)),
        1 => Policy::StationaryStochastic(stoch_rule(rng)),
        2 => Policy::MarkovDeterministic((0..stages).map(|_| det_rule(rng)).collect()),
        _ => Policy::MarkovStochastic((0..stages).map(|_| stoch_rule(rng)).collect()),
    }
}

/// Seeded generator for reproducible randomized tests.
pub fn test_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Draws a seed stream for multi-replication tests.
pub fn seeds(base: u64, n: usize) -> Vec<u64> {
    let mut rng = test_rng(base);
    (0..n).map(|_| rng.next_u64()).collect()
}
