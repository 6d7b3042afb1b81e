//! Shared fixtures: the disease-progression model with a noisy marker
//! readout, a perfectly observed wrapper, and random POMDP generators for
//! the oracle tests.
#![allow(dead_code)]

use mdp_core::{CostModel, FiniteMdp, Horizon, Transitions};
use pomdp_core::{Belief, FinitePomdp};
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

/// Smallest observable marker reading: the true marker minus the noise cap.
pub const READ_MIN: i64 = -2;
/// Largest observable marker reading.
pub const READ_MAX: i64 = 42;
/// Number of `(reading, death flag)` observation pairs.
pub const N_READINGS: usize = (READ_MAX - READ_MIN + 1) as usize * 2;

/// Index of the relapse state with condition `m` (1 slow, 2 aggressive)
/// and marker value `zeta` in `0..40`.
pub fn relapse(m: usize, zeta: usize) -> usize {
    assert!((1..=2).contains(&m) && zeta < DEATH_MARKER);
    1 + (m - 1) * DEATH_MARKER + zeta
}

/// Observation index of marker reading `y` with death flag `z`.
pub fn reading(y: i64, z: usize) -> usize {
    assert!((READ_MIN..=READ_MAX).contains(&y) && z < 2);
    (y - READ_MIN) as usize * 2 + z
}

/// Marker value reported by state `s`.
fn marker_of(s: usize) -> i64 {
    match s {
        REMISSION => 0,
        DEATH => DEATH_MARKER as i64,
        _ => ((s - 1) % DEATH_MARKER) as i64,
    }
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

/// Observation table of the noisy marker readout: alive states report their
/// marker plus uniform integer noise in `[-2, 2]` with death flag 0, the
/// death state reports a reading in `[38, 42]` with death flag 1. Rows do
/// not depend on the action.
pub fn medical_observation_table() -> Vec<Vec<Vec<f64>>> {
    let mut table = vec![vec![vec![0.0f64; N_READINGS]; 2]; 82];
    for (s, per_action) in table.iter_mut().enumerate() {
        let marker = marker_of(s);
        let z = usize::from(s == DEATH);
        for row in per_action.iter_mut() {
            for y in marker - 2..=marker + 2 {
                row[reading(y, z)] = 0.2;
            }
        }
    }
    table
}

/// The disease-progression model observed through the noisy marker
/// readout, starting from certain remission.
pub fn medical_pomdp(p_stay: f64, p_slow: f64, p_aggressive: f64) -> FinitePomdp {
    let base = medical_mdp(p_stay, p_slow, p_aggressive);
    let labels = (0..N_READINGS)
        .map(|o| format!("(y={},z={})", READ_MIN + (o / 2) as i64, o % 2))
        .collect();
    FinitePomdp::new(
        base,
        labels,
        medical_observation_table(),
        Belief::dirac(82, REMISSION).unwrap(),
    )
    .unwrap()
}

/// Wraps a base model with observations that reveal the successor state
/// exactly.
pub fn perfectly_observed(base: FiniteMdp, start: usize) -> FinitePomdp {
    let n = base.n_states();
    let n_actions = base.n_actions();
    let mut table = vec![vec![vec![0.0f64; n]; n_actions]; n];
    for (s, per_action) in table.iter_mut().enumerate() {
        for row in per_action.iter_mut() {
            row[s] = 1.0;
        }
    }
    let labels = (0..n).map(|s| format!("saw{s}")).collect();
    let b0 = Belief::dirac(n, start).unwrap();
    FinitePomdp::new(base, labels, table, b0).unwrap()
}

/// Random POMDP with dense normalized dynamics, per-pair uniform `[0, 1)`
/// stage and terminal costs, random observation rows, and a random initial
/// belief. All actions are admissible everywhere so that every belief has
/// a common action.
pub fn random_pomdp(
    n_states: usize,
    n_actions: usize,
    n_obs: usize,
    horizon: usize,
    rng: &mut ChaCha8Rng,
) -> FinitePomdp {
    let normalized_row = |len: usize, rng: &mut ChaCha8Rng| -> Vec<f64> {
        let mut row: Vec<f64> = (0..len).map(|_| rng.gen::<f64>() + 1e-3).collect();
        let total: f64 = row.iter().sum();
        for p in &mut row {
            *p /= total;
        }
        row
    };

    let mut probs = vec![vec![Vec::new(); n_actions]; n_states];
    let mut costs = vec![vec![0.0f64; n_actions]; n_states];
    for s in 0..n_states {
        for a in 0..n_actions {
            probs[s][a] = normalized_row(n_states, rng);
            costs[s][a] = rng.gen();
        }
    }
    let terminal = (0..n_states).map(|_| rng.gen()).collect();
    let base = FiniteMdp::unconstrained(
        Horizon::Finite(horizon),
        Transitions::Dense(probs),
        CostModel::PerPair(costs),
        terminal,
    )
    .unwrap();

    let observation = (0..n_states)
        .map(|_| (0..n_actions).map(|_| normalized_row(n_obs, rng)).collect())
        .collect();
    let labels = (0..n_obs).map(|o| format!("o{o}")).collect();
    let b0 = Belief::new(normalized_row(n_states, rng)).unwrap();
    FinitePomdp::new(base, labels, observation, b0).unwrap()
}

/// Replaces the observation table with one that carries no information:
/// every state emits the same uniform distribution over readings.
pub fn make_uninformative(pomdp: &mut FinitePomdp) {
    let n_obs = pomdp.n_observations();
    let uniform = vec![1.0 / n_obs as f64; n_obs];
    for per_action in &mut pomdp.observation {
        for row in per_action.iter_mut() {
            *row = uniform.clone();
        }
    }
}

/// Random belief over `n_states` states.
pub fn random_belief(n_states: usize, rng: &mut ChaCha8Rng) -> Belief {
    let mut row: Vec<f64> = (0..n_states).map(|_| rng.gen::<f64>() + 1e-3).collect();
    let total: f64 = row.iter().sum();
    for p in &mut row {
        *p /= total;
    }
    Belief::new(row).unwrap()
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
