//! Reachable belief graph and exact finite-horizon solving.
//!
//! Starting from the initial belief, every admissible action and every
//! observation with positive probability spawns a successor belief. Beliefs
//! that agree to twelve decimals are merged per stage, so the expansion is a
//! layered directed acyclic graph rather than a tree. Backward induction
//! over the layers gives the optimal expected total cost and one action per
//! reachable belief.

use std::collections::{BTreeMap, HashMap};

use mdp_core::{CostModel, FiniteMdp, Horizon, Transitions};
use serde_json::json;

use crate::belief::Belief;
use crate::error::PomdpError;
use crate::pomdp::FinitePomdp;
use crate::update::{belief_cost_at, belief_transition_at};

/// Default bound on the total number of belief nodes across all stages.
pub const DEFAULT_NODE_CAP: usize = 1_000_000;

/// One reachable belief, its admissible actions, and its outgoing branches.
#[derive(Debug, Clone)]
pub struct BeliefNode {
    /// Distribution over hidden states at this node.
    pub belief: Belief,
    /// First `(action, observation)` path that discovered this node.
    pub history: Vec<(usize, usize)>,
    /// Actions admissible at every state in the belief's support; empty at
    /// the last stage, where no action is taken.
    pub actions: Vec<usize>,
    /// `edges[k]` holds the observation branches of `actions[k]`.
    pub edges: Vec<Vec<BeliefEdge>>,
    /// Expected terminal cost under this belief, charged at the last stage.
    pub terminal_cost: f64,
}

/// One observation branch out of a belief node.
#[derive(Debug, Clone)]
pub struct BeliefEdge {
    /// Observation index that selects this branch.
    pub observation: usize,
    /// Probability of the observation given the node's belief and action.
    pub probability: f64,
    /// Expected stage cost of the move to the posterior belief.
    pub cost: f64,
    /// Index of the successor node in the next stage.
    pub next: usize,
}

/// The reachable belief graph of a POMDP, layered by stage.
#[derive(Debug, Clone)]
pub struct BeliefMdp {
    stages: Vec<Vec<BeliefNode>>,
    action_labels: Vec<String>,
}

impl BeliefMdp {
    /// Number of acting stages; the graph has `depth + 1` layers.
    pub fn depth(&self) -> usize {
        self.stages.len() - 1
    }

    /// Number of base actions.
    pub fn n_actions(&self) -> usize {
        self.action_labels.len()
    }

    /// Total number of belief nodes across all stages.
    pub fn n_nodes(&self) -> usize {
        self.stages.iter().map(Vec::len).sum()
    }

    /// Nodes of stage `t` in discovery order.
    pub fn stage(&self, t: usize) -> &[BeliefNode] {
        &self.stages[t]
    }

    /// Node counts per stage.
    pub fn stage_sizes(&self) -> Vec<usize> {
        self.stages.iter().map(Vec::len).collect()
    }

    /// The initial-belief node.
    pub fn root(&self) -> &BeliefNode {
        &self.stages[0][0]
    }

    /// Index of node `i` of stage `t` in the flattened state space used by
    /// [`Self::to_finite_mdp`].
    pub fn flat_index(&self, t: usize, i: usize) -> usize {
        self.stages[..t].iter().map(Vec::len).sum::<usize>() + i
    }

    /// Exports the graph as an ordinary finite-horizon MDP over node
    /// indices. Last-stage nodes absorb at zero cost and carry the expected
    /// terminal cost, so backward induction on the export reproduces the
    /// values of [`solve_belief_mdp`] exactly.
    ///
    /// # Errors
    /// [`PomdpError::Model`] when the assembled tables fail validation.
    pub fn to_finite_mdp(&self) -> Result<FiniteMdp, PomdpError> {
        let n = self.n_nodes();
        let n_actions = self.n_actions();
        let mut labels = Vec::with_capacity(n);
        let mut constraints = Vec::with_capacity(n);
        let mut rows: Vec<Vec<Vec<(usize, f64)>>> = Vec::with_capacity(n);
        let mut costs = vec![vec![0.0; n_actions]; n];
        let mut terminal = Vec::with_capacity(n);

        let mut offset = 0;
        for (t, stage) in self.stages.iter().enumerate() {
            let next_offset = offset + stage.len();
            for (i, node) in stage.iter().enumerate() {
                let flat = offset + i;
                labels.push(format!("t{t}.{i}"));
                terminal.push(node.terminal_cost);
                let mut per_action = vec![vec![(flat, 1.0)]; n_actions];
                if node.edges.is_empty() {
                    constraints.push(vec![0]);
                } else {
                    for (k, &a) in node.actions.iter().enumerate() {
                        let mut merged: BTreeMap<usize, f64> = BTreeMap::new();
                        let mut expected = 0.0;
                        for edge in &node.edges[k] {
                            *merged.entry(next_offset + edge.next).or_insert(0.0) +=
                                edge.probability;
                            expected += edge.probability * edge.cost;
                        }
                        per_action[a] = merged.into_iter().collect();
                        costs[flat][a] = expected;
                    }
                    constraints.push(node.actions.clone());
                }
                rows.push(per_action);
            }
            offset = next_offset;
        }

        let mdp = FiniteMdp::new(
            labels,
            self.action_labels.clone(),
            Horizon::Finite(self.depth()),
            constraints,
            Transitions::Sparse(rows),
            CostModel::PerPair(costs),
            terminal,
        )?;
        Ok(mdp)
    }
}

/// Actions admissible at every state in the belief's support.
fn admissible_at(base: &FiniteMdp, belief: &Belief) -> Vec<usize> {
    let mut support = belief.support().into_iter();
    let first = support.next().expect("a belief has non-empty support");
    let mut actions = base.constraints[first].clone();
    for s in support {
        let allowed = &base.constraints[s];
        actions.retain(|a| allowed.binary_search(a).is_ok());
    }
    actions
}

/// Expands the reachable belief graph to `depth` acting stages with the
/// default node cap of [`DEFAULT_NODE_CAP`].
///
/// # Errors
/// See [`build_belief_mdp_with_cap`].
pub fn build_belief_mdp(pomdp: &FinitePomdp, depth: usize) -> Result<BeliefMdp, PomdpError> {
    build_belief_mdp_with_cap(pomdp, depth, DEFAULT_NODE_CAP)
}

/// Expands the reachable belief graph to `depth` acting stages, merging
/// beliefs per stage as described on [`BeliefMdp`], and fails once the total
/// node count would exceed `cap`.
///
/// # Errors
/// [`PomdpError::Model`] or [`PomdpError::Invalid`] when the POMDP fails
/// validation or some reachable belief admits no common action,
/// [`PomdpError::CapExceeded`] when the graph outgrows `cap`.
pub fn build_belief_mdp_with_cap(
    pomdp: &FinitePomdp,
    depth: usize,
    cap: usize,
) -> Result<BeliefMdp, PomdpError> {
    pomdp.ensure_valid()?;
    if cap == 0 {
        return Err(PomdpError::InvalidArgument("node cap must be positive".into()));
    }
    let base = &pomdp.base;
    let expected_terminal = |b: &Belief| b.expect(|s| base.terminal_cost(s));

    let root = BeliefNode {
        terminal_cost: expected_terminal(&pomdp.initial_belief),
        belief: pomdp.initial_belief.clone(),
        history: Vec::new(),
        actions: Vec::new(),
        edges: Vec::new(),
    };
    let mut stages = vec![vec![root]];
    let mut total = 1usize;

    for t in 0..depth {
        let mut next_nodes: Vec<BeliefNode> = Vec::new();
        let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
        for i in 0..stages[t].len() {
            let belief = stages[t][i].belief.clone();
            let history = stages[t][i].history.clone();
            let actions = admissible_at(base, &belief);
            if actions.is_empty() {
                return Err(PomdpError::Invalid(format!(
                    "no action is admissible at every support state of a stage-{t} belief"
                )));
            }
            let mut edges = Vec::with_capacity(actions.len());
            for &a in &actions {
                let mut branches = Vec::new();
                for (omega, probability, posterior) in belief_transition_at(pomdp, t, &belief, a) {
                    let key = posterior.quantized_key();
                    let next = match index.get(&key) {
                        Some(&j) => j,
                        None => {
                            if total == cap {
                                return Err(PomdpError::CapExceeded { cap });
                            }
                            total += 1;
                            let j = next_nodes.len();
                            let mut found_by = history.clone();
                            found_by.push((a, omega));
                            next_nodes.push(BeliefNode {
                                terminal_cost: expected_terminal(&posterior),
                                belief: posterior.clone(),
                                history: found_by,
                                actions: Vec::new(),
                                edges: Vec::new(),
                            });
                            index.insert(key, j);
                            j
                        }
                    };
                    let cost = belief_cost_at(pomdp, t, &belief, a, &posterior);
                    branches.push(BeliefEdge {
                        observation: omega,
                        probability,
                        cost,
                        next,
                    });
                }
                edges.push(branches);
            }
            stages[t][i].actions = actions;
            stages[t][i].edges = edges;
        }
        stages.push(next_nodes);
    }

    Ok(BeliefMdp {
        stages,
        action_labels: base.action_labels.clone(),
    })
}

/// An exact solution of a belief graph: cost-to-go per node and the
/// minimizing action per non-leaf node.
#[derive(Debug, Clone)]
pub struct PomdpSolution {
    /// The solved graph.
    pub graph: BeliefMdp,
    /// `values[t][i]` is the optimal cost-to-go of node `i` at stage `t`.
    pub values: Vec<Vec<f64>>,
    /// `rules[t][i]` is a minimizing action of node `i` at stage `t`; ties
    /// keep the lowest action index.
    pub rules: Vec<Vec<usize>>,
}

impl PomdpSolution {
    /// Optimal expected total cost from the initial belief.
    pub fn value(&self) -> f64 {
        self.values[0][0]
    }

    /// Extracts the solution as a lookup table from beliefs to actions.
    pub fn policy(&self) -> BeliefPolicy {
        let mut stages = Vec::with_capacity(self.rules.len());
        for (t, rule) in self.rules.iter().enumerate() {
            let mut entries = Vec::new();
            let mut index = HashMap::new();
            for (i, node) in self.graph.stage(t).iter().enumerate() {
                index.insert(node.belief.quantized_key(), entries.len());
                entries.push(PolicyEntry {
                    history: node.history.clone(),
                    belief: node.belief.clone(),
                    action: rule[i],
                });
            }
            stages.push(PolicyStage { entries, index });
        }
        BeliefPolicy { stages }
    }

    /// Serializes the solution to pretty JSON: the optimal value plus one
    /// record per node, keyed by the history that first discovered it.
    ///
    /// # Errors
    /// [`PomdpError::Export`] on serialization failure.
    pub fn to_json(&self) -> Result<String, PomdpError> {
        let mut nodes = Vec::new();
        for (t, stage) in (0..=self.graph.depth()).map(|t| (t, self.graph.stage(t))) {
            for (i, node) in stage.iter().enumerate() {
                let action = self.rules.get(t).map(|rule| rule[i]);
                nodes.push(json!({
                    "stage": t,
                    "history": history_key(&node.history),
                    "belief": node.belief.weights(),
                    "value": self.values[t][i],
                    "action": action,
                }));
            }
        }
        let doc = json!({
            "depth": self.graph.depth(),
            "value": self.value(),
            "nodes": nodes,
        });
        serde_json::to_string_pretty(&doc).map_err(|e| PomdpError::Export(e.to_string()))
    }
}

/// Runs backward induction over the layers of a belief graph.
pub fn solve_belief_mdp(graph: BeliefMdp) -> PomdpSolution {
    let depth = graph.depth();
    let mut values = vec![Vec::new(); depth + 1];
    values[depth] = graph.stage(depth).iter().map(|n| n.terminal_cost).collect();
    let mut rules = vec![Vec::new(); depth];
    for t in (0..depth).rev() {
        let stage = graph.stage(t);
        let mut stage_values = Vec::with_capacity(stage.len());
        let mut stage_rule = Vec::with_capacity(stage.len());
        for node in stage {
            let mut best = f64::INFINITY;
            let mut best_action = node.actions[0];
            for (k, &a) in node.actions.iter().enumerate() {
                let mut q = 0.0;
                for edge in &node.edges[k] {
                    q += edge.probability * (edge.cost + values[t + 1][edge.next]);
                }
                if q < best {
                    best = q;
                    best_action = a;
                }
            }
            stage_values.push(best);
            stage_rule.push(best_action);
        }
        values[t] = stage_values;
        rules[t] = stage_rule;
    }
    PomdpSolution { graph, values, rules }
}

/// Expands the reachable belief graph to `depth` acting stages and solves it
/// by backward induction.
///
/// # Errors
/// Same as [`build_belief_mdp`].
pub fn solve_pomdp(pomdp: &FinitePomdp, depth: usize) -> Result<PomdpSolution, PomdpError> {
    Ok(solve_belief_mdp(build_belief_mdp(pomdp, depth)?))
}

/// One belief-to-action assignment of a [`BeliefPolicy`].
#[derive(Debug, Clone)]
pub struct PolicyEntry {
    /// Path that first discovered the belief.
    pub history: Vec<(usize, usize)>,
    /// The belief itself.
    pub belief: Belief,
    /// Action the policy takes there.
    pub action: usize,
}

struct PolicyStage {
    entries: Vec<PolicyEntry>,
    index: HashMap<Vec<u64>, usize>,
}

/// A stage-indexed lookup table from beliefs to actions, matched up to
/// twelve decimals per weight.
pub struct BeliefPolicy {
    stages: Vec<PolicyStage>,
}

impl BeliefPolicy {
    /// Number of acting stages the policy covers.
    pub fn n_stages(&self) -> usize {
        self.stages.len()
    }

    /// The action assigned to `belief` at stage `t`, or `None` when the
    /// stage is out of range or the belief was never reached during solving.
    pub fn action(&self, t: usize, belief: &Belief) -> Option<usize> {
        let stage = self.stages.get(t)?;
        let &i = stage.index.get(&belief.quantized_key())?;
        Some(stage.entries[i].action)
    }

    /// Entries of stage `t` in discovery order.
    pub fn entries(&self, t: usize) -> &[PolicyEntry] {
        &self.stages[t].entries
    }

    /// Serializes the policy to pretty JSON as a map from history keys to
    /// actions.
    ///
    /// # Errors
    /// [`PomdpError::Export`] on serialization failure.
    pub fn to_json(&self) -> Result<String, PomdpError> {
        let mut actions = serde_json::Map::new();
        for stage in &self.stages {
            for entry in &stage.entries {
                actions.insert(history_key(&entry.history), json!(entry.action));
            }
        }
        let doc = json!({ "stages": self.stages.len(), "actions": actions });
        serde_json::to_string_pretty(&doc).map_err(|e| PomdpError::Export(e.to_string()))
    }
}

/// Renders a history as a stable string key: `(a, omega)` steps become
/// `a{a}:o{omega}` joined by `/`, and the empty history becomes `""`.
pub fn history_key(history: &[(usize, usize)]) -> String {
    history
        .iter()
        .map(|(a, omega)| format!("a{a}:o{omega}"))
        .collect::<Vec<_>>()
        .join("/")
}
