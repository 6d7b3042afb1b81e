//! Exhaustive expansion of the reachable hyperstates into an explicit
//! finite MDP.

use std::collections::{BTreeMap, HashMap};

use mdp_core::{CostModel, FiniteMdp, Horizon, Policy, Transitions};
use serde_json::json;

use crate::error::BamdpError;
use crate::hyper::{BayesAdaptiveMdp, HyperState};

/// Default bound on the number of expanded hyperstates.
pub const DEFAULT_HYPERSTATE_CAP: usize = 1_000_000;

/// An explicit finite MDP over reachable hyperstates, with the dictionary
/// between hyperstates and flat state indices.
///
/// The flat model is stationary: moving to a successor re-encodes the
/// grown counts as a different state. Hyperstates first reached at the
/// final stage keep zero-cost self-loop rows, so backward induction is
/// exact at every pair of a stage and a hyperstate reachable by that
/// stage, in particular at the initial hyperstate and stage 0.
#[derive(Debug, Clone)]
pub struct HyperstateMdp {
    mdp: FiniteMdp,
    states: Vec<HyperState>,
    index: HashMap<HyperState, usize>,
}

impl HyperstateMdp {
    /// The flat model; state `i` encodes [`states`](Self::states)`[i]`.
    pub fn mdp(&self) -> &FiniteMdp {
        &self.mdp
    }

    /// Hyperstates by flat index; index 0 is the initial hyperstate.
    pub fn states(&self) -> &[HyperState] {
        &self.states
    }

    /// Number of reachable hyperstates.
    pub fn n_states(&self) -> usize {
        self.states.len()
    }

    /// Flat index of a hyperstate, if it is reachable.
    pub fn index_of(&self, hyper: &HyperState) -> Option<usize> {
        self.index.get(hyper).copied()
    }

    /// Serializes a solved policy as JSON keyed by hyperstate: one action
    /// per key for a stationary rule, one action list per key (indexed by
    /// stage) for a stage-dependent rule.
    ///
    /// # Errors
    /// [`BamdpError::Shape`] when the policy does not cover this state
    /// space and [`BamdpError::Export`] for stochastic policies.
    pub fn policy_json(&self, policy: &Policy) -> Result<String, BamdpError> {
        let actions = match policy {
            Policy::StationaryDeterministic(rule) => {
                if rule.len() != self.n_states() {
                    return Err(BamdpError::Shape(format!(
                        "{} rules for {} hyperstates",
                        rule.len(),
                        self.n_states()
                    )));
                }
                let map: BTreeMap<String, serde_json::Value> = self
                    .states
                    .iter()
                    .zip(rule)
                    .map(|(hyper, &a)| (hyper.key(), json!(a)))
                    .collect();
                map
            }
            Policy::MarkovDeterministic(rules) => {
                if rules.iter().any(|r| r.len() != self.n_states()) {
                    return Err(BamdpError::Shape(format!(
                        "stage rules do not all cover {} hyperstates",
                        self.n_states()
                    )));
                }
                self.states
                    .iter()
                    .enumerate()
                    .map(|(i, hyper)| {
                        let per_stage: Vec<usize> = rules.iter().map(|r| r[i]).collect();
                        (hyper.key(), json!(per_stage))
                    })
                    .collect()
            }
            _ => {
                return Err(BamdpError::Export(
                    "only deterministic policies are exported".into(),
                ))
            }
        };
        let doc = json!({
            "horizon": self.mdp.horizon.finite(),
            "actions": actions,
        });
        serde_json::to_string_pretty(&doc).map_err(|e| BamdpError::Export(e.to_string()))
    }
}

/// Expands all hyperstates reachable from `(start, prior)` within
/// `horizon` steps into an explicit MDP, under the default state cap.
///
/// # Errors
/// See [`build_bamdp_with_cap`].
pub fn build_bamdp(
    model: &BayesAdaptiveMdp,
    start: usize,
    horizon: usize,
) -> Result<HyperstateMdp, BamdpError> {
    build_bamdp_with_cap(model, start, horizon, DEFAULT_HYPERSTATE_CAP)
}

/// [`build_bamdp`] with an explicit bound on the number of hyperstates.
///
/// # Errors
/// [`BamdpError::CapExceeded`] when more than `cap` hyperstates are
/// reachable, [`BamdpError::InvalidArgument`] for a zero cap or an
/// out-of-range start state, plus anything
/// [`BayesAdaptiveMdp::ensure_valid`] raises.
pub fn build_bamdp_with_cap(
    model: &BayesAdaptiveMdp,
    start: usize,
    horizon: usize,
    cap: usize,
) -> Result<HyperstateMdp, BamdpError> {
    model.ensure_valid()?;
    if cap == 0 {
        return Err(BamdpError::InvalidArgument("state cap must be positive".into()));
    }
    let root = model.initial_hyperstate(start)?;
    let n_actions = model.base.n_actions();

    let mut states = vec![root.clone()];
    let mut index = HashMap::from([(root, 0)]);
    let mut depth = vec![0usize];
    let mut rows = vec![vec![vec![(0, 1.0)]; n_actions]];
    let mut costs = vec![vec![0.0; n_actions]];

    let mut head = 0;
    while head < states.len() {
        let i = head;
        head += 1;
        if depth[i] >= horizon {
            continue;
        }
        let hyper = states[i].clone();
        for &action in &model.base.constraints[hyper.state] {
            let moves = model.bamdp_transition(&hyper, action)?;
            let mut entries = Vec::with_capacity(moves.len());
            let mut expected = 0.0;
            for (next, p) in moves {
                expected += p * model.base.step_cost(0, hyper.state, action, next.state);
                let j = match index.get(&next) {
                    Some(&j) => j,
                    None => {
                        if states.len() >= cap {
                            return Err(BamdpError::CapExceeded { cap });
                        }
                        let j = states.len();
                        states.push(next.clone());
                        index.insert(next, j);
                        depth.push(depth[i] + 1);
                        rows.push(vec![vec![(j, 1.0)]; n_actions]);
                        costs.push(vec![0.0; n_actions]);
                        j
                    }
                };
                entries.push((j, p));
            }
            rows[i][action] = entries;
            costs[i][action] = expected;
        }
    }

    let labels = states.iter().map(HyperState::key).collect();
    let constraints = states.iter().map(|h| model.base.constraints[h.state].clone()).collect();
    let terminal = states.iter().map(|h| model.base.terminal_cost(h.state)).collect();
    let mdp = FiniteMdp::new(
        labels,
        model.base.action_labels.clone(),
        Horizon::Finite(horizon),
        constraints,
        Transitions::Sparse(rows),
        CostModel::PerPair(costs),
        terminal,
    )?;
    Ok(HyperstateMdp { mdp, states, index })
}
