//! The finite MDP representation and its validation diagnostics.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::MdpError;

/// Tolerance on transition-row sums.
pub const ROW_SUM_TOL: f64 = 1e-12;

/// Planning horizon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Horizon {
    /// Fixed number of decision stages; stage indices run `0..h`.
    Finite(usize),
    /// Unbounded run, controlled by a discounted or average criterion.
    Infinite,
}

impl Horizon {
    /// The stage count when finite.
    pub fn finite(&self) -> Option<usize> {
        match self {
            Horizon::Finite(h) => Some(*h),
            Horizon::Infinite => None,
        }
    }
}

/// Transition probabilities, indexed by state then action.
///
/// The sparse form stores each row as `(successor, probability)` pairs and
/// is the representation of choice for the large derived models (belief
/// MDPs, hyperstate MDPs) whose rows touch a handful of successors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Transitions {
    /// `rows[s][a][s']` is the probability of moving to `s'`.
    Dense(Vec<Vec<Vec<f64>>>),
    /// `rows[s][a]` lists the successors with positive probability.
    Sparse(Vec<Vec<Vec<(usize, f64)>>>),
}

impl Transitions {
    fn shape_ok(&self, n_states: usize, n_actions: usize) -> Result<(), MdpError> {
        let check = |s: usize, len: usize| {
            if len != n_actions {
                return Err(MdpError::Shape(format!(
                    "state {s} has {len} action rows, expected {n_actions}"
                )));
            }
            Ok(())
        };
        match self {
            Transitions::Dense(rows) => {
                if rows.len() != n_states {
                    return Err(MdpError::Shape(format!(
                        "{} transition blocks for {n_states} states",
                        rows.len()
                    )));
                }
                for (s, per_action) in rows.iter().enumerate() {
                    check(s, per_action.len())?;
                    for (a, row) in per_action.iter().enumerate() {
                        if row.len() != n_states {
                            return Err(MdpError::Shape(format!(
                                "row ({s},{a}) has {} entries, expected {n_states}",
                                row.len()
                            )));
                        }
                    }
                }
            }
            Transitions::Sparse(rows) => {
                if rows.len() != n_states {
                    return Err(MdpError::Shape(format!(
                        "{} transition blocks for {n_states} states",
                        rows.len()
                    )));
                }
                for (s, per_action) in rows.iter().enumerate() {
                    check(s, per_action.len())?;
                    for (a, row) in per_action.iter().enumerate() {
                        if let Some(&(s2, _)) = row.iter().find(|(s2, _)| *s2 >= n_states) {
                            return Err(MdpError::Shape(format!(
                                "row ({s},{a}) references successor {s2} of {n_states} states"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Stage costs.
///
/// The per-triple form charges `c(s, a, s')`; the per-pair form stores the
/// expectation `c̄(s, a) = Σ_s' P(s'|s,a) c(s,a,s')` directly. All criteria
/// in this crate are expectations of sums of stage costs, so the two forms
/// induce identical values; per-pair trajectory records carry the expected
/// stage cost instead of a realized one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CostModel {
    /// `c[s][a][s']`.
    PerTriple(Vec<Vec<Vec<f64>>>),
    /// `c[s][a]`, already averaged over successors.
    PerPair(Vec<Vec<f64>>),
}

impl CostModel {
    fn shape_ok(&self, n_states: usize, n_actions: usize) -> Result<(), MdpError> {
        let (blocks, label) = match self {
            CostModel::PerTriple(c) => (c.len(), "per-triple"),
            CostModel::PerPair(c) => (c.len(), "per-pair"),
        };
        if blocks != n_states {
            return Err(MdpError::Shape(format!(
                "{label} cost table has {blocks} state blocks, expected {n_states}"
            )));
        }
        match self {
            CostModel::PerTriple(c) => {
                for (s, per_action) in c.iter().enumerate() {
                    if per_action.len() != n_actions {
                        return Err(MdpError::Shape(format!(
                            "cost block {s} has {} rows, expected {n_actions}",
                            per_action.len()
                        )));
                    }
                    for (a, row) in per_action.iter().enumerate() {
                        if row.len() != n_states {
                            return Err(MdpError::Shape(format!(
                                "cost row ({s},{a}) has {} entries, expected {n_states}",
                                row.len()
                            )));
                        }
                    }
                }
            }
            CostModel::PerPair(c) => {
                for (s, row) in c.iter().enumerate() {
                    if row.len() != n_actions {
                        return Err(MdpError::Shape(format!(
                            "cost row {s} has {} entries, expected {n_actions}",
                            row.len()
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// One finding from [`FiniteMdp::validate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Diagnostic {
    /// A transition row does not sum to one within [`ROW_SUM_TOL`].
    RowSum {
        /// State index.
        state: usize,
        /// Action index.
        action: usize,
        /// Observed sum.
        sum: f64,
    },
    /// A transition entry is negative or non-finite.
    BadProbability {
        /// State index.
        state: usize,
        /// Action index.
        action: usize,
        /// Successor index.
        next: usize,
        /// Offending entry.
        prob: f64,
    },
    /// A state admits no action at all.
    EmptyConstraint {
        /// State index.
        state: usize,
    },
    /// No transition from any other state enters this state; it can occur
    /// only as a start state. Warning severity.
    Unreachable {
        /// State index.
        state: usize,
    },
    /// An infinite cost entry. Warning severity: constraints are the
    /// supported way to forbid actions, infinite costs merely emulate them.
    InfiniteCost {
        /// State index.
        state: usize,
        /// Action index.
        action: usize,
    },
    /// A NaN cost entry.
    NanCost {
        /// State index.
        state: usize,
        /// Action index.
        action: usize,
    },
}

impl Diagnostic {
    /// Whether this finding invalidates the model (as opposed to a
    /// warning).
    pub fn is_error(&self) -> bool {
        !matches!(self, Diagnostic::Unreachable { .. } | Diagnostic::InfiniteCost { .. })
    }
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Diagnostic::RowSum { state, action, sum } => {
                write!(f, "transition row ({state},{action}) sums to {sum}")
            }
            Diagnostic::BadProbability { state, action, next, prob } => {
                write!(f, "transition ({state},{action})->{next} has probability {prob}")
            }
            Diagnostic::EmptyConstraint { state } => {
                write!(f, "state {state} admits no action")
            }
            Diagnostic::Unreachable { state } => {
                write!(f, "state {state} has no incoming transition from another state")
            }
            Diagnostic::InfiniteCost { state, action } => {
                write!(f, "cost at ({state},{action}) is infinite; prefer constraints")
            }
            Diagnostic::NanCost { state, action } => {
                write!(f, "cost at ({state},{action}) is NaN")
            }
        }
    }
}

/// A finite Markov decision process.
///
/// States and actions are integer indices into the label tables.
/// Transitions and costs are stationary by default; stage-indexed overrides
/// replace the stationary table at specific stages for non-stationary
/// problems. The terminal cost applies to finite-horizon criteria only.
///
/// Construction via [`FiniteMdp::new`] checks table shapes; semantic checks
/// (stochastic rows, non-empty constraints) are reported by
/// [`FiniteMdp::validate`] so that deliberately broken instances can still
/// be built and inspected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteMdp {
    /// Display names of the states.
    pub state_labels: Vec<String>,
    /// Display names of the actions.
    pub action_labels: Vec<String>,
    /// Planning horizon.
    pub horizon: Horizon,
    /// Admissible actions per state, sorted and deduplicated.
    pub constraints: Vec<Vec<usize>>,
    /// Stationary transition law.
    pub transitions: Transitions,
    /// Stationary stage costs.
    pub costs: CostModel,
    /// Terminal cost per state (finite horizon only).
    pub terminal: Vec<f64>,
    /// Stage-indexed transition overrides.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub stage_transitions: BTreeMap<usize, Transitions>,
    /// Stage-indexed cost overrides.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub stage_costs: BTreeMap<usize, CostModel>,
}

impl FiniteMdp {
    /// Builds an MDP after checking that every table matches the declared
    /// state and action counts. Constraint lists are sorted and
    /// deduplicated.
    ///
    /// # Errors
    /// [`MdpError::Shape`] on any dimension mismatch or out-of-range index.
    pub fn new(
        state_labels: Vec<String>,
        action_labels: Vec<String>,
        horizon: Horizon,
        constraints: Vec<Vec<usize>>,
        transitions: Transitions,
        costs: CostModel,
        terminal: Vec<f64>,
    ) -> Result<Self, MdpError> {
        let n_states = state_labels.len();
        let n_actions = action_labels.len();
        if n_states == 0 {
            return Err(MdpError::Shape("no states".into()));
        }
        if n_actions == 0 {
            return Err(MdpError::Shape("no actions".into()));
        }
        if constraints.len() != n_states {
            return Err(MdpError::Shape(format!(
                "{} constraint sets for {n_states} states",
                constraints.len()
            )));
        }
        let mut constraints = constraints;
        for (s, k) in constraints.iter_mut().enumerate() {
            if let Some(&a) = k.iter().find(|&&a| a >= n_actions) {
                return Err(MdpError::Shape(format!(
                    "constraint set of state {s} references action {a} of {n_actions}"
                )));
            }
            k.sort_unstable();
            k.dedup();
        }
        transitions.shape_ok(n_states, n_actions)?;
        costs.shape_ok(n_states, n_actions)?;
        if terminal.len() != n_states {
            return Err(MdpError::Shape(format!(
                "{} terminal costs for {n_states} states",
                terminal.len()
            )));
        }
        Ok(Self {
            state_labels,
            action_labels,
            horizon,
            constraints,
            transitions,
            costs,
            terminal,
            stage_transitions: BTreeMap::new(),
            stage_costs: BTreeMap::new(),
        })
    }

    /// Convenience constructor with numbered labels and all actions
    /// admissible everywhere.
    pub fn unconstrained(
        horizon: Horizon,
        transitions: Transitions,
        costs: CostModel,
        terminal: Vec<f64>,
    ) -> Result<Self, MdpError> {
        let n_states = match &transitions {
            Transitions::Dense(rows) => rows.len(),
            Transitions::Sparse(rows) => rows.len(),
        };
        let n_actions = match &transitions {
            Transitions::Dense(rows) => rows.first().map_or(0, Vec::len),
            Transitions::Sparse(rows) => rows.first().map_or(0, Vec::len),
        };
        let all: Vec<usize> = (0..n_actions).collect();
        Self::new(
            (0..n_states).map(|s| format!("s{s}")).collect(),
            (0..n_actions).map(|a| format!("a{a}")).collect(),
            horizon,
            vec![all; n_states],
            transitions,
            costs,
            terminal,
        )
    }

    /// Installs a transition table used at stage `t` instead of the
    /// stationary one.
    ///
    /// # Errors
    /// [`MdpError::Shape`] when the table shape does not match.
    pub fn with_stage_transitions(mut self, t: usize, table: Transitions) -> Result<Self, MdpError> {
        table.shape_ok(self.n_states(), self.n_actions())?;
        self.stage_transitions.insert(t, table);
        Ok(self)
    }

    /// Installs a cost table used at stage `t` instead of the stationary
    /// one.
    ///
    /// # Errors
    /// [`MdpError::Shape`] when the table shape does not match.
    pub fn with_stage_costs(mut self, t: usize, table: CostModel) -> Result<Self, MdpError> {
        table.shape_ok(self.n_states(), self.n_actions())?;
        self.stage_costs.insert(t, table);
        Ok(self)
    }

    /// Number of states.
    pub fn n_states(&self) -> usize {
        self.state_labels.len()
    }

    /// Number of actions.
    pub fn n_actions(&self) -> usize {
        self.action_labels.len()
    }

    /// Transition table in force at stage `t`.
    pub fn transitions_at(&self, t: usize) -> &Transitions {
        self.stage_transitions.get(&t).unwrap_or(&self.transitions)
    }

    /// Cost table in force at stage `t`.
    pub fn costs_at(&self, t: usize) -> &CostModel {
        self.stage_costs.get(&t).unwrap_or(&self.costs)
    }

    /// Calls `f(s', p)` for every successor with positive probability of
    /// `(s, a)` at stage `t`.
    pub fn for_each_successor(&self, t: usize, s: usize, a: usize, mut f: impl FnMut(usize, f64)) {
        match self.transitions_at(t) {
            Transitions::Dense(rows) => {
                for (s2, &p) in rows[s][a].iter().enumerate() {
                    if p != 0.0 {
                        f(s2, p);
                    }
                }
            }
            Transitions::Sparse(rows) => {
                for &(s2, p) in &rows[s][a] {
                    if p != 0.0 {
                        f(s2, p);
                    }
                }
            }
        }
    }

    /// Probability of moving from `s` to `s2` under `a` at stage `t`.
    pub fn transition_prob(&self, t: usize, s: usize, a: usize, s2: usize) -> f64 {
        match self.transitions_at(t) {
            Transitions::Dense(rows) => rows[s][a][s2],
            Transitions::Sparse(rows) => rows[s][a]
                .iter()
                .filter(|(i, _)| *i == s2)
                .map(|(_, p)| *p)
                .sum(),
        }
    }

    /// Cost of the realized transition `(s, a, s2)` at stage `t`. Per-pair
    /// tables return the expected stage cost regardless of `s2`.
    pub fn step_cost(&self, t: usize, s: usize, a: usize, s2: usize) -> f64 {
        match self.costs_at(t) {
            CostModel::PerTriple(c) => c[s][a][s2],
            CostModel::PerPair(c) => c[s][a],
        }
    }

    /// Expected stage cost `Σ_s' P(s'|s,a) c(s,a,s')` at stage `t`.
    pub fn expected_cost(&self, t: usize, s: usize, a: usize) -> f64 {
        match self.costs_at(t) {
            CostModel::PerPair(c) => c[s][a],
            CostModel::PerTriple(c) => {
                let mut total = 0.0;
                self.for_each_successor(t, s, a, |s2, p| total += p * c[s][a][s2]);
                total
            }
        }
    }

    /// Expected continuation value `Σ_s' P(s'|s,a) v(s')` at stage `t`.
    pub fn expected_value(&self, t: usize, s: usize, a: usize, v: &[f64]) -> f64 {
        let mut total = 0.0;
        self.for_each_successor(t, s, a, |s2, p| total += p * v[s2]);
        total
    }

    /// Terminal cost of `s`.
    pub fn terminal_cost(&self, s: usize) -> f64 {
        self.terminal[s]
    }

    /// Runs all semantic checks and reports every finding: non-stochastic
    /// rows, malformed probabilities, empty constraint sets, states with no
    /// incoming transition, and infinite or NaN costs. Stage overrides are
    /// checked alongside the stationary tables.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut findings = Vec::new();
        let mut has_in_edge = vec![false; self.n_states()];

        let mut check_transitions = |table: &Transitions, findings: &mut Vec<Diagnostic>| {
            for s in 0..self.n_states() {
                for a in 0..self.n_actions() {
                    let mut sum = 0.0;
                    let mut scan = |s2: usize, p: f64| {
                        if !(p >= 0.0 && p.is_finite()) {
                            findings.push(Diagnostic::BadProbability {
                                state: s,
                                action: a,
                                next: s2,
                                prob: p,
                            });
                        }
                        if p > 0.0 && s2 != s {
                            has_in_edge[s2] = true;
                        }
                        sum += p;
                    };
                    match table {
                        Transitions::Dense(rows) => {
                            for (s2, &p) in rows[s][a].iter().enumerate() {
                                scan(s2, p);
                            }
                        }
                        Transitions::Sparse(rows) => {
                            for &(s2, p) in &rows[s][a] {
                                scan(s2, p);
                            }
                        }
                    }
                    if (sum - 1.0).abs() > ROW_SUM_TOL {
                        findings.push(Diagnostic::RowSum { state: s, action: a, sum });
                    }
                }
            }
        };
        check_transitions(&self.transitions, &mut findings);
        for table in self.stage_transitions.values() {
            check_transitions(table, &mut findings);
        }

        for (s, k) in self.constraints.iter().enumerate() {
            if k.is_empty() {
                findings.push(Diagnostic::EmptyConstraint { state: s });
            }
        }

        let check_costs = |table: &CostModel, findings: &mut Vec<Diagnostic>| {
            let mut check = |s: usize, a: usize, c: f64| {
                if c.is_nan() {
                    findings.push(Diagnostic::NanCost { state: s, action: a });
                } else if c.is_infinite() {
                    findings.push(Diagnostic::InfiniteCost { state: s, action: a });
                }
            };
            match table {
                CostModel::PerTriple(c) => {
                    for (s, per_action) in c.iter().enumerate() {
                        for (a, row) in per_action.iter().enumerate() {
                            for &entry in row {
                                check(s, a, entry);
                            }
                        }
                    }
                }
                CostModel::PerPair(c) => {
                    for (s, row) in c.iter().enumerate() {
                        for (a, &entry) in row.iter().enumerate() {
                            check(s, a, entry);
                        }
                    }
                }
            }
        };
        check_costs(&self.costs, &mut findings);
        for table in self.stage_costs.values() {
            check_costs(table, &mut findings);
        }

        for (s, reached) in has_in_edge.iter().enumerate() {
            if !reached {
                findings.push(Diagnostic::Unreachable { state: s });
            }
        }
        findings.sort_by_key(|d| !d.is_error());
        findings
    }

    /// Fails if [`validate`](Self::validate) reports any error-severity
    /// finding.
    ///
    /// # Errors
    /// [`MdpError::Invalid`] with the first such finding.
    pub fn ensure_valid(&self) -> Result<(), MdpError> {
        match self.validate().iter().find(|d| d.is_error()) {
            Some(problem) => Err(MdpError::Invalid(problem.to_string())),
            None => Ok(()),
        }
    }

    /// Serializes the full model to JSON.
    ///
    /// # Errors
    /// [`MdpError::Export`] on serialization failure.
    pub fn to_json(&self) -> Result<String, MdpError> {
        serde_json::to_string_pretty(self).map_err(|e| MdpError::Export(e.to_string()))
    }

    /// Reads a model from the JSON produced by [`to_json`](Self::to_json),
    /// re-running the shape checks.
    ///
    /// # Errors
    /// [`MdpError::Export`] on malformed JSON; [`MdpError::Shape`] on
    /// inconsistent tables.
    pub fn from_json(json: &str) -> Result<Self, MdpError> {
        let raw: Self = serde_json::from_str(json).map_err(|e| MdpError::Export(e.to_string()))?;
        let mut rebuilt = Self::new(
            raw.state_labels,
            raw.action_labels,
            raw.horizon,
            raw.constraints,
            raw.transitions,
            raw.costs,
            raw.terminal,
        )?;
        for (t, table) in raw.stage_transitions {
            rebuilt = rebuilt.with_stage_transitions(t, table)?;
        }
        for (t, table) in raw.stage_costs {
            rebuilt = rebuilt.with_stage_costs(t, table)?;
        }
        Ok(rebuilt)
    }
}
