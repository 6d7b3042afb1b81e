//! Shared fixtures: the disease-progression model with its single learned
//! relapse row, and seeded RNG helpers.
#![allow(dead_code)]

use bamdp::{BayesAdaptiveMdp, UnknownRow};
use mdp_core::{CostModel, FiniteMdp, Horizon, Transitions};
use rand::SeedableRng;
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

    FiniteMdp::unconstrained(
        Horizon::Finite(FOLLOW_UP_HORIZON),
        Transitions::Sparse(rows),
        CostModel::PerPair(stage),
        terminal,
    )
    .unwrap()
}

/// The medical model with the remission wait row declared unknown, over
/// the successors stay, slow entry, and aggressive entry.
pub fn medical_bamdp(
    p_stay: f64,
    p_slow: f64,
    p_aggressive: f64,
    prior: [u64; 3],
) -> BayesAdaptiveMdp {
    let base = medical_mdp(p_stay, p_slow, p_aggressive);
    let row = UnknownRow {
        state: REMISSION,
        action: WAIT,
        successors: vec![REMISSION, relapse(1, 0), relapse(2, 0)],
    };
    BayesAdaptiveMdp::new(base, vec![row], vec![prior.to_vec()]).unwrap()
}

/// Shortens a model's horizon, keeping dynamics and costs.
pub fn truncated(mut mdp: FiniteMdp, visits: usize) -> FiniteMdp {
    mdp.horizon = Horizon::Finite(visits);
    mdp
}

/// Deterministically seeded RNG for reproducible tests.
pub fn test_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A block of consecutive seeds for repeated-trial tests.
pub fn seeds(base: u64, n: usize) -> Vec<u64> {
    (0..n as u64).map(|i| base + i).collect()
}
