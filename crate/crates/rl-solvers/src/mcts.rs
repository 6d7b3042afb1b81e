//! Monte-Carlo tree search with a UCT tree policy, for cost minimization.
//!
//! Each iteration runs four phases. Selection descends while every
//! admissible action of the current node already has a child, scoring
//! actions by [`uct_score`] and resampling the successor; a successor never
//! seen under the chosen action triggers Expansion, which adds exactly one
//! node. Simulation estimates the new node's value with a uniform-random
//! rollout, and Backpropagation refreshes the ancestors on the way back to
//! the root.

use rand::{Rng, RngCore};
use serde::Serialize;

use crate::error::RlError;
use crate::generative::GenerativeModel;

/// Exploration constant used when the caller has no domain-specific
/// tuning; it matches the bandit-regret choice for rewards in [0, 1],
/// which the score normalization emulates.
pub const DEFAULT_C_UCT: f64 = std::f64::consts::SQRT_2;

/// How Backpropagation refreshes the value estimate of an ancestor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BackupRule {
    /// Recompute the value as the minimum over actions of the
    /// visit-weighted average of `cost + gamma * value` across that
    /// action's children, a sampled Bellman backup.
    BellmanWeighted,
    /// Track the running mean of the discounted returns observed through
    /// the node, the classical UCT backup.
    RolloutAverage,
}

/// One node of the search tree: the state reached, the action that led
/// here from the parent, the visit count, the value estimate of the state,
/// and the expanded successors.
#[derive(Debug, Clone, Serialize)]
pub struct SearchNode<S, A> {
    pub state: S,
    /// Action played in the parent; `None` at the root.
    pub action: Option<A>,
    pub visits: u64,
    /// Estimated cost-to-go from `state`.
    pub value: f64,
    /// Cost observed when this node was first reached. The cost model is
    /// assumed deterministic given the transition, so later traversals
    /// observe the same value.
    pub edge_cost: f64,
    /// Empirical cost of playing `action` in the parent and continuing
    /// from here: `edge_cost + gamma * value`, kept in sync with `value`.
    pub mean_cost: f64,
    pub children: Vec<SearchNode<S, A>>,
}

impl<S, A> SearchNode<S, A> {
    fn new(state: S, action: Option<A>, edge_cost: f64, value: f64, gamma: f64) -> Self {
        let mut node = Self {
            state,
            action,
            visits: 1,
            value,
            edge_cost,
            mean_cost: 0.0,
            children: Vec::new(),
        };
        node.refresh_mean(gamma);
        node
    }

    fn refresh_mean(&mut self, gamma: f64) {
        self.mean_cost = self.edge_cost + gamma * self.value;
    }

    /// Number of nodes in this subtree, including the node itself.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(SearchNode::size).sum::<usize>()
    }
}

/// Tuning knobs for [`mcts_search`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MctsConfig {
    /// Number of search iterations.
    pub budget: usize,
    /// Exploration constant applied to normalized mean costs.
    pub c_uct: f64,
    /// Discount factor, 1 for total-cost objectives.
    pub gamma: f64,
    /// Depth at which both the tree and rollouts stop.
    pub max_depth: usize,
    pub backup: BackupRule,
}

impl MctsConfig {
    /// Defaults: exploration constant [`DEFAULT_C_UCT`] and the Bellman
    /// backup.
    pub fn new(budget: usize, gamma: f64, max_depth: usize) -> Self {
        Self {
            budget,
            c_uct: DEFAULT_C_UCT,
            gamma,
            max_depth,
            backup: BackupRule::BellmanWeighted,
        }
    }
}

/// A finished search: the recommended action, the full tree for
/// inspection, and the number of iterations run.
#[derive(Debug, Clone, Serialize)]
pub struct SearchOutcome<S, A> {
    pub action: A,
    pub root: SearchNode<S, A>,
    pub iterations: usize,
}

impl<S: Serialize, A: Serialize> SearchOutcome<S, A> {
    /// Pretty-printed JSON of the recommendation and the root statistics.
    ///
    /// # Errors
    /// [`RlError::Export`] when serialization fails.
    pub fn to_json(&self) -> Result<String, RlError> {
        serde_json::to_string_pretty(self).map_err(|e| RlError::Export(e.to_string()))
    }
}

/// Optimistic selection score: the child's empirical mean cost minus an
/// exploration bonus that shrinks as the child absorbs more visits.
/// Selection descends to the minimizer.
///
/// `child.visits` must be at least 1, which holds for every created node.
pub fn uct_score<S, A>(parent_visits: u64, child: &SearchNode<S, A>, c_uct: f64) -> f64 {
    child.mean_cost - c_uct * ((parent_visits as f64).ln() / child.visits as f64).sqrt()
}

/// Runs the four-phase search from `s0` and returns the action whose root
/// children have the smallest visit-weighted mean cost.
///
/// # Errors
/// [`RlError::InvalidArgument`] when `s0` is terminal or has no admissible
/// action, the budget is below the number of admissible root actions,
/// `gamma` lies outside (0, 1], `c_uct` is negative, or `max_depth` is 0.
pub fn mcts_search<G>(
    gen: &G,
    s0: &G::State,
    config: &MctsConfig,
    rng: &mut dyn RngCore,
) -> Result<SearchOutcome<G::State, G::Action>, RlError>
where
    G: GenerativeModel,
{
    if !(config.gamma > 0.0 && config.gamma <= 1.0) {
        return Err(RlError::InvalidArgument(format!(
            "discount factor {} outside (0, 1]",
            config.gamma
        )));
    }
    if !(config.c_uct >= 0.0 && config.c_uct.is_finite()) {
        return Err(RlError::InvalidArgument(format!(
            "exploration constant {} must be finite and non-negative",
            config.c_uct
        )));
    }
    if config.max_depth == 0 {
        return Err(RlError::InvalidArgument("search depth must be positive".into()));
    }
    let root_actions = gen.admissible(s0);
    if gen.is_terminal(s0) || root_actions.is_empty() {
        return Err(RlError::InvalidArgument(
            "root state is terminal or has no admissible action".into(),
        ));
    }
    if config.budget < root_actions.len() {
        return Err(RlError::InvalidArgument(format!(
            "budget {} cannot try all {} root actions once",
            config.budget,
            root_actions.len()
        )));
    }

    let mut root = SearchNode::new(s0.clone(), None, 0.0, 0.0, config.gamma);
    let mut scale = 0.0;
    for _ in 0..config.budget {
        visit(gen, &mut root, 0, config, &mut scale, rng);
    }
    let action = best_root_action(&root)?;
    Ok(SearchOutcome { action, root, iterations: config.budget })
}

/// Convenience front end to [`mcts_search`] with the Bellman backup,
/// returning only the recommended action.
#[allow(clippy::too_many_arguments)]
pub fn mcts_plan<G>(
    gen: &G,
    s0: &G::State,
    budget: usize,
    c_uct: f64,
    gamma: f64,
    max_depth: usize,
    rng: &mut dyn RngCore,
) -> Result<G::Action, RlError>
where
    G: GenerativeModel,
{
    let config = MctsConfig {
        budget,
        c_uct,
        gamma,
        max_depth,
        backup: BackupRule::BellmanWeighted,
    };
    Ok(mcts_search(gen, s0, &config, rng)?.action)
}

/// One iteration below `node`, returning the discounted return observed
/// from `node.state` so that ancestors can fold it into their averages.
fn visit<G>(
    gen: &G,
    node: &mut SearchNode<G::State, G::Action>,
    depth: usize,
    config: &MctsConfig,
    scale: &mut f64,
    rng: &mut dyn RngCore,
) -> f64
where
    G: GenerativeModel,
{
    node.visits += 1;
    if depth >= config.max_depth || gen.is_terminal(&node.state) {
        backup(node, 0.0, depth, config, scale);
        return 0.0;
    }
    let actions = gen.admissible(&node.state);
    if actions.is_empty() {
        backup(node, 0.0, depth, config, scale);
        return 0.0;
    }

    // Condition I: an admissible action without a child is played first.
    let untried = actions
        .iter()
        .find(|a| node.children.iter().all(|ch| ch.action.as_ref() != Some(*a)));
    let observed = if let Some(action) = untried {
        expand(gen, node, action.clone(), depth, config, scale, rng)
    } else {
        // Condition II: every action has been tried; descend by UCT score
        // and resample the successor, expanding when it is new.
        let action = select_action::<G>(node, &actions, config, *scale);
        let (next, cost) = gen.step(&node.state, &action, rng);
        let known = node
            .children
            .iter_mut()
            .find(|ch| ch.action.as_ref() == Some(&action) && ch.state == next);
        match known {
            Some(child) => cost + config.gamma * visit(gen, child, depth + 1, config, scale, rng),
            None => {
                let value = rollout(gen, next.clone(), depth + 1, config, rng);
                attach(node, SearchNode::new(next, Some(action), cost, value, config.gamma), scale)
            }
        }
    };
    backup(node, observed, depth, config, scale);
    observed
}

/// Expansion for condition I: plays `action` once, rolls out from the
/// sampled successor, and attaches the new leaf.
fn expand<G>(
    gen: &G,
    node: &mut SearchNode<G::State, G::Action>,
    action: G::Action,
    depth: usize,
    config: &MctsConfig,
    scale: &mut f64,
    rng: &mut dyn RngCore,
) -> f64
where
    G: GenerativeModel,
{
    let (next, cost) = gen.step(&node.state, &action, rng);
    let same = node
        .children
        .iter_mut()
        .find(|ch| ch.action.as_ref() == Some(&action) && ch.state == next);
    debug_assert!(same.is_none(), "condition I only fires for untried actions");
    let value = rollout(gen, next.clone(), depth + 1, config, rng);
    attach(node, SearchNode::new(next, Some(action), cost, value, config.gamma), scale)
}

fn attach<S, A>(node: &mut SearchNode<S, A>, child: SearchNode<S, A>, scale: &mut f64) -> f64 {
    let observed = child.mean_cost;
    *scale = scale.max(observed.abs());
    node.children.push(child);
    observed
}

/// Uniform-random default policy from `state` down to the depth cap,
/// accumulating discounted cost.
fn rollout<G>(
    gen: &G,
    state: G::State,
    depth: usize,
    config: &MctsConfig,
    rng: &mut dyn RngCore,
) -> f64
where
    G: GenerativeModel,
{
    let mut state = state;
    let mut total = 0.0;
    let mut discount = 1.0;
    for _ in depth..config.max_depth {
        if gen.is_terminal(&state) {
            break;
        }
        let actions = gen.admissible(&state);
        if actions.is_empty() {
            break;
        }
        let action = &actions[rng.gen_range(0..actions.len())];
        let (next, cost) = gen.step(&state, action, rng);
        total += discount * cost;
        discount *= config.gamma;
        state = next;
    }
    total
}

/// Scores every admissible action by pooling its children into one summary
/// node, so the exploration bonus sees the action's total visit count and
/// its visit-weighted mean cost; means are normalized by the largest
/// magnitude observed so far to keep `c_uct` scale-free.
fn select_action<G>(
    node: &SearchNode<G::State, G::Action>,
    actions: &[G::Action],
    config: &MctsConfig,
    scale: f64,
) -> G::Action
where
    G: GenerativeModel,
{
    let norm = if scale > 0.0 { scale } else { 1.0 };
    let mut best: Option<(f64, &G::Action)> = None;
    for action in actions {
        let mut weighted = 0.0;
        let mut visits = 0u64;
        for child in &node.children {
            if child.action.as_ref() == Some(action) {
                weighted += child.visits as f64 * child.mean_cost;
                visits += child.visits;
            }
        }
        debug_assert!(visits > 0, "condition I has tried every admissible action");
        let summary = SearchNode {
            state: node.state.clone(),
            action: Some(action.clone()),
            visits,
            value: 0.0,
            edge_cost: 0.0,
            mean_cost: weighted / visits as f64 / norm,
            children: Vec::new(),
        };
        let score = uct_score(node.visits, &summary, config.c_uct);
        if best.map_or(true, |(b, _)| score < b) {
            best = Some((score, action));
        }
    }
    best.expect("admissible set is non-empty").1.clone()
}

/// Refreshes `node.value` after an iteration touched its subtree.
fn backup<S, A: PartialEq>(
    node: &mut SearchNode<S, A>,
    observed: f64,
    depth: usize,
    config: &MctsConfig,
    scale: &mut f64,
) {
    match config.backup {
        BackupRule::BellmanWeighted => {
            if !node.children.is_empty() {
                node.value = bellman_value(node);
            }
        }
        BackupRule::RolloutAverage => {
            // The root is created with one phantom visit and no return;
            // every other node's first visit carries its rollout.
            let samples = if depth == 0 { node.visits - 1 } else { node.visits };
            node.value += (observed - node.value) / samples as f64;
        }
    }
    node.refresh_mean(config.gamma);
    *scale = scale.max(node.mean_cost.abs());
}

/// Minimum over actions of the visit-weighted average of `mean_cost` over
/// that action's children. Ties keep the action whose child came first,
/// which follows the admissible ordering.
fn bellman_value<S, A: PartialEq>(node: &SearchNode<S, A>) -> f64 {
    let mut best = f64::INFINITY;
    for (i, head) in node.children.iter().enumerate() {
        if node.children[..i].iter().any(|ch| ch.action == head.action) {
            continue;
        }
        let mut weighted = 0.0;
        let mut visits = 0.0;
        for child in &node.children[i..] {
            if child.action == head.action {
                weighted += child.visits as f64 * child.mean_cost;
                visits += child.visits as f64;
            }
        }
        let average = weighted / visits;
        if average < best {
            best = average;
        }
    }
    best
}

fn best_root_action<S, A>(root: &SearchNode<S, A>) -> Result<A, RlError>
where
    A: Clone + PartialEq,
{
    let mut best: Option<(f64, &A)> = None;
    for (i, head) in root.children.iter().enumerate() {
        if root.children[..i].iter().any(|ch| ch.action == head.action) {
            continue;
        }
        let mut weighted = 0.0;
        let mut visits = 0.0;
        for child in &root.children[i..] {
            if child.action == head.action {
                weighted += child.visits as f64 * child.mean_cost;
                visits += child.visits as f64;
            }
        }
        let average = weighted / visits;
        let action = head.action.as_ref().expect("non-root nodes carry an action");
        if best.as_ref().map_or(true, |&(b, _)| average < b) {
            best = Some((average, action));
        }
    }
    best.map(|(_, a)| a.clone())
        .ok_or_else(|| RlError::InvalidArgument("search produced no root children".into()))
}
