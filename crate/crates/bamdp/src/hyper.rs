//! Hyperstates: a base state paired with Dirichlet counts over the
//! successors of each transition row whose law is being learned.

use std::collections::BTreeMap;

use mdp_core::FiniteMdp;
use serde::{Deserialize, Serialize};

use crate::error::BamdpError;

/// A transition row whose law is unknown and learned from observed
/// successors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnknownRow {
    /// State of the learned row.
    pub state: usize,
    /// Action of the learned row.
    pub action: usize,
    /// States the row can move to, strictly increasing.
    pub successors: Vec<usize>,
}

/// A base state together with one successor-count vector per unknown row.
///
/// `counts[k][j]` counts transitions from unknown row `k` to its `j`-th
/// declared successor, prior pseudo-counts included.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HyperState {
    /// Current base state.
    pub state: usize,
    /// Per-row successor counts, parallel to the declared unknown rows.
    pub counts: Vec<Vec<u64>>,
}

impl HyperState {
    /// Compact text key, e.g. `"s0|5,1,0"`: the base state followed by one
    /// comma-separated count vector per unknown row.
    pub fn key(&self) -> String {
        let mut key = format!("s{}", self.state);
        for row in &self.counts {
            key.push('|');
            let joined: Vec<String> = row.iter().map(u64::to_string).collect();
            key.push_str(&joined.join(","));
        }
        key
    }
}

/// A finite MDP whose transition law is known except on declared rows,
/// where successor counts stand in for the missing probabilities.
///
/// The row of an unknown `(state, action)` pair in `base` is ignored; the
/// predictive law divides that row's counts by their total instead.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BayesAdaptiveMdp {
    /// The decision process being learned.
    pub base: FiniteMdp,
    /// Rows whose transition law is unknown.
    pub rows: Vec<UnknownRow>,
    /// Prior pseudo-counts, parallel to `rows`.
    pub prior: Vec<Vec<u64>>,
}

impl BayesAdaptiveMdp {
    /// Builds and validates a Bayes-adaptive model.
    ///
    /// # Errors
    /// See [`ensure_valid`](Self::ensure_valid).
    pub fn new(
        base: FiniteMdp,
        rows: Vec<UnknownRow>,
        prior: Vec<Vec<u64>>,
    ) -> Result<Self, BamdpError> {
        let model = Self { base, rows, prior };
        model.ensure_valid()?;
        Ok(model)
    }

    /// Checks the base model, the row declarations, and the prior counts.
    ///
    /// # Errors
    /// [`BamdpError::Model`] when the base fails validation,
    /// [`BamdpError::InvalidArgument`] for stage-indexed overrides,
    /// [`BamdpError::Invalid`] for out-of-range, inadmissible, or duplicate
    /// row declarations, [`BamdpError::Shape`] when the prior does not match
    /// the rows, and [`BamdpError::ZeroCounts`] for an all-zero prior row.
    pub fn ensure_valid(&self) -> Result<(), BamdpError> {
        self.base.ensure_valid()?;
        if !self.base.stage_transitions.is_empty() || !self.base.stage_costs.is_empty() {
            return Err(BamdpError::InvalidArgument(
                "learned rows require a stationary base; lift the stage into the state instead"
                    .into(),
            ));
        }
        if self.prior.len() != self.rows.len() {
            return Err(BamdpError::Shape(format!(
                "{} prior rows for {} unknown rows",
                self.prior.len(),
                self.rows.len()
            )));
        }
        for (k, row) in self.rows.iter().enumerate() {
            if row.state >= self.base.n_states() || row.action >= self.base.n_actions() {
                return Err(BamdpError::Invalid(format!(
                    "unknown row ({}, {}) out of range",
                    row.state, row.action
                )));
            }
            if !self.base.constraints[row.state].contains(&row.action) {
                return Err(BamdpError::Invalid(format!(
                    "unknown row ({}, {}) is not admissible",
                    row.state, row.action
                )));
            }
            if row.successors.is_empty() {
                return Err(BamdpError::Invalid(format!(
                    "unknown row ({}, {}) declares no successors",
                    row.state, row.action
                )));
            }
            if row.successors.windows(2).any(|w| w[0] >= w[1]) {
                return Err(BamdpError::Invalid(format!(
                    "successors of unknown row ({}, {}) must be strictly increasing",
                    row.state, row.action
                )));
            }
            if *row.successors.last().expect("non-empty") >= self.base.n_states() {
                return Err(BamdpError::Invalid(format!(
                    "successor out of range on unknown row ({}, {})",
                    row.state, row.action
                )));
            }
            if self.rows[..k].iter().any(|r| r.state == row.state && r.action == row.action) {
                return Err(BamdpError::Invalid(format!(
                    "unknown row ({}, {}) declared twice",
                    row.state, row.action
                )));
            }
            if self.prior[k].len() != row.successors.len() {
                return Err(BamdpError::Shape(format!(
                    "{} prior counts for {} successors on unknown row ({}, {})",
                    self.prior[k].len(),
                    row.successors.len(),
                    row.state,
                    row.action
                )));
            }
            if self.prior[k].iter().all(|&c| c == 0) {
                return Err(BamdpError::ZeroCounts(format!(
                    "prior of unknown row ({}, {})",
                    row.state, row.action
                )));
            }
        }
        Ok(())
    }

    /// Index of the unknown row at `(state, action)`, if one is declared.
    pub fn row_index(&self, state: usize, action: usize) -> Option<usize> {
        self.rows.iter().position(|r| r.state == state && r.action == action)
    }

    /// The hyperstate holding `state` and the prior counts.
    ///
    /// # Errors
    /// [`BamdpError::InvalidArgument`] when `state` is out of range.
    pub fn initial_hyperstate(&self, state: usize) -> Result<HyperState, BamdpError> {
        if state >= self.base.n_states() {
            return Err(BamdpError::InvalidArgument(format!(
                "state {state} of {} states",
                self.base.n_states()
            )));
        }
        Ok(HyperState { state, counts: self.prior.clone() })
    }

    /// Checks that a hyperstate matches this model's state range and row
    /// declarations.
    ///
    /// # Errors
    /// [`BamdpError::InvalidArgument`] for an out-of-range base state and
    /// [`BamdpError::Shape`] for count vectors not matching the rows.
    pub fn ensure_hyperstate(&self, hyper: &HyperState) -> Result<(), BamdpError> {
        if hyper.state >= self.base.n_states() {
            return Err(BamdpError::InvalidArgument(format!(
                "state {} of {} states",
                hyper.state,
                self.base.n_states()
            )));
        }
        if hyper.counts.len() != self.rows.len() {
            return Err(BamdpError::Shape(format!(
                "{} count rows for {} unknown rows",
                hyper.counts.len(),
                self.rows.len()
            )));
        }
        for (k, row) in self.rows.iter().enumerate() {
            if hyper.counts[k].len() != row.successors.len() {
                return Err(BamdpError::Shape(format!(
                    "{} counts for {} successors on unknown row ({}, {})",
                    hyper.counts[k].len(),
                    row.successors.len(),
                    row.state,
                    row.action
                )));
            }
        }
        Ok(())
    }

    /// Probability that `action` moves `hyper` to base state `next`:
    /// the count share on a learned row, the base law otherwise.
    ///
    /// # Errors
    /// Shape errors from [`ensure_hyperstate`](Self::ensure_hyperstate),
    /// [`BamdpError::InvalidArgument`] for an out-of-range action or
    /// successor, and [`BamdpError::ZeroCounts`] when the exercised row's
    /// counts sum to zero.
    pub fn predictive_probability(
        &self,
        hyper: &HyperState,
        action: usize,
        next: usize,
    ) -> Result<f64, BamdpError> {
        self.ensure_hyperstate(hyper)?;
        if action >= self.base.n_actions() || next >= self.base.n_states() {
            return Err(BamdpError::InvalidArgument(format!(
                "transition ({}, {action}, {next}) out of range",
                hyper.state
            )));
        }
        match self.row_index(hyper.state, action) {
            Some(k) => {
                let total = self.count_total(hyper, k)?;
                match self.rows[k].successors.binary_search(&next) {
                    Ok(j) => Ok(hyper.counts[k][j] as f64 / total),
                    Err(_) => Ok(0.0),
                }
            }
            None => Ok(self.base.transition_prob(0, hyper.state, action, next)),
        }
    }

    /// Distribution of the next hyperstate under `action`: on a learned row
    /// each declared successor receives its count share and its count rises
    /// by one, on a known row the base law applies and counts are kept.
    ///
    /// Entries are sorted by successor state and carry positive probability.
    ///
    /// # Errors
    /// Shape errors from [`ensure_hyperstate`](Self::ensure_hyperstate),
    /// [`BamdpError::InvalidArgument`] when `action` is not admissible, and
    /// [`BamdpError::ZeroCounts`] when the exercised row's counts sum to
    /// zero.
    pub fn bamdp_transition(
        &self,
        hyper: &HyperState,
        action: usize,
    ) -> Result<Vec<(HyperState, f64)>, BamdpError> {
        self.ensure_hyperstate(hyper)?;
        self.ensure_admissible(hyper.state, action)?;
        match self.row_index(hyper.state, action) {
            Some(k) => {
                let total = self.count_total(hyper, k)?;
                let row = &self.rows[k];
                let mut moves = Vec::new();
                for (j, &next) in row.successors.iter().enumerate() {
                    if hyper.counts[k][j] == 0 {
                        continue;
                    }
                    let mut counts = hyper.counts.clone();
                    counts[k][j] += 1;
                    moves.push((
                        HyperState { state: next, counts },
                        hyper.counts[k][j] as f64 / total,
                    ));
                }
                Ok(moves)
            }
            None => {
                let mut merged: BTreeMap<usize, f64> = BTreeMap::new();
                self.base.for_each_successor(0, hyper.state, action, |next, p| {
                    *merged.entry(next).or_insert(0.0) += p;
                });
                Ok(merged
                    .into_iter()
                    .map(|(next, p)| (HyperState { state: next, counts: hyper.counts.clone() }, p))
                    .collect())
            }
        }
    }

    /// Advances a hyperstate along an observed base transition: sets the
    /// base state to `next` and, when `(state, action)` is a learned row,
    /// increments the matching count. Returns whether a count was
    /// incremented.
    ///
    /// # Errors
    /// Shape errors from [`ensure_hyperstate`](Self::ensure_hyperstate),
    /// [`BamdpError::InvalidArgument`] when `action` is not admissible or
    /// `next` is out of range, and [`BamdpError::InvalidArgument`] when a
    /// learned row observes a successor outside its declared support.
    pub fn advance(
        &self,
        hyper: &mut HyperState,
        action: usize,
        next: usize,
    ) -> Result<bool, BamdpError> {
        self.ensure_hyperstate(hyper)?;
        self.ensure_admissible(hyper.state, action)?;
        if next >= self.base.n_states() {
            return Err(BamdpError::InvalidArgument(format!(
                "state {next} of {} states",
                self.base.n_states()
            )));
        }
        let learned = match self.row_index(hyper.state, action) {
            Some(k) => match self.rows[k].successors.binary_search(&next) {
                Ok(j) => {
                    hyper.counts[k][j] += 1;
                    true
                }
                Err(_) => {
                    return Err(BamdpError::InvalidArgument(format!(
                        "successor {next} outside the declared support of unknown row ({}, {})",
                        hyper.state, action
                    )))
                }
            },
            None => false,
        };
        hyper.state = next;
        Ok(learned)
    }

    /// Serializes the model, prior counts included, as pretty JSON.
    ///
    /// # Errors
    /// [`BamdpError::Export`] when serialization fails.
    pub fn to_json(&self) -> Result<String, BamdpError> {
        serde_json::to_string_pretty(self).map_err(|e| BamdpError::Export(e.to_string()))
    }

    /// Deserializes and validates a model produced by
    /// [`to_json`](Self::to_json).
    ///
    /// # Errors
    /// [`BamdpError::Export`] for malformed JSON, plus anything
    /// [`ensure_valid`](Self::ensure_valid) raises.
    pub fn from_json(json: &str) -> Result<Self, BamdpError> {
        let model: Self =
            serde_json::from_str(json).map_err(|e| BamdpError::Export(e.to_string()))?;
        model.ensure_valid()?;
        Ok(model)
    }

    fn ensure_admissible(&self, state: usize, action: usize) -> Result<(), BamdpError> {
        if !self.base.constraints[state].contains(&action) {
            return Err(BamdpError::InvalidArgument(format!(
                "action {action} not admissible in state {state}"
            )));
        }
        Ok(())
    }

    fn count_total(&self, hyper: &HyperState, k: usize) -> Result<f64, BamdpError> {
        let total: u64 = hyper.counts[k].iter().sum();
        if total == 0 {
            return Err(BamdpError::ZeroCounts(format!(
                "exercised unknown row ({}, {})",
                self.rows[k].state, self.rows[k].action
            )));
        }
        Ok(total as f64)
    }
}
