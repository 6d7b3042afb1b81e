//! Observation-count models: per (action, successor) Dirichlet counts
//! over observations, usable as a point-estimate observation table.

use serde::{Deserialize, Serialize};

use crate::error::BamdpError;

/// Counts of observations seen after each (action, successor state) pair.
///
/// `counts[a][s2][omega]` counts draws of observation `omega` following
/// action `a` and successor `s2`, prior pseudo-counts included.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObsCounts {
    counts: Vec<Vec<Vec<u64>>>,
}

impl ObsCounts {
    /// Wraps a rectangular count tensor.
    ///
    /// # Errors
    /// [`BamdpError::Shape`] when the tensor is empty or ragged.
    pub fn new(counts: Vec<Vec<Vec<u64>>>) -> Result<Self, BamdpError> {
        let n_states = counts.first().map_or(0, Vec::len);
        let n_obs = counts.first().and_then(|per| per.first()).map_or(0, Vec::len);
        if counts.is_empty() || n_states == 0 || n_obs == 0 {
            return Err(BamdpError::Shape("count tensor has an empty axis".into()));
        }
        for per_state in &counts {
            if per_state.len() != n_states
                || per_state.iter().any(|row| row.len() != n_obs)
            {
                return Err(BamdpError::Shape("count tensor is ragged".into()));
            }
        }
        Ok(Self { counts })
    }

    /// A tensor holding `fill` in every entry.
    ///
    /// # Errors
    /// [`BamdpError::Shape`] when any axis is zero.
    pub fn filled(
        n_actions: usize,
        n_states: usize,
        n_observations: usize,
        fill: u64,
    ) -> Result<Self, BamdpError> {
        Self::new(vec![vec![vec![fill; n_observations]; n_states]; n_actions])
    }

    /// Number of actions.
    pub fn n_actions(&self) -> usize {
        self.counts.len()
    }

    /// Number of successor states.
    pub fn n_states(&self) -> usize {
        self.counts[0].len()
    }

    /// Number of observations.
    pub fn n_observations(&self) -> usize {
        self.counts[0][0].len()
    }

    /// The count of `omega` after `(action, next)`.
    ///
    /// # Panics
    /// When an index is out of range.
    pub fn count(&self, action: usize, next: usize, omega: usize) -> u64 {
        self.counts[action][next][omega]
    }

    /// The count row over observations for `(action, next)`.
    ///
    /// # Panics
    /// When an index is out of range.
    pub fn row(&self, action: usize, next: usize) -> &[u64] {
        &self.counts[action][next]
    }

    /// Normalized observation probabilities for `(action, next)`.
    ///
    /// # Errors
    /// [`BamdpError::ZeroCounts`] when the row sums to zero.
    ///
    /// # Panics
    /// When an index is out of range.
    pub fn observation_row(&self, action: usize, next: usize) -> Result<Vec<f64>, BamdpError> {
        let row = self.row(action, next);
        let total: u64 = row.iter().sum();
        if total == 0 {
            return Err(BamdpError::ZeroCounts(format!(
                "observation row (action {action}, state {next})"
            )));
        }
        Ok(row.iter().map(|&c| c as f64 / total as f64).collect())
    }

    /// The full point-estimate observation table, reindexed as
    /// `[next][action][omega]` for belief filters.
    ///
    /// # Errors
    /// [`BamdpError::ZeroCounts`] when any row sums to zero.
    pub fn to_observation_table(&self) -> Result<Vec<Vec<Vec<f64>>>, BamdpError> {
        (0..self.n_states())
            .map(|next| {
                (0..self.n_actions())
                    .map(|action| self.observation_row(action, next))
                    .collect()
            })
            .collect()
    }

    /// Serializes the counts as pretty JSON.
    ///
    /// # Errors
    /// [`BamdpError::Export`] when serialization fails.
    pub fn to_json(&self) -> Result<String, BamdpError> {
        serde_json::to_string_pretty(self).map_err(|e| BamdpError::Export(e.to_string()))
    }

    /// Deserializes and validates counts produced by
    /// [`to_json`](Self::to_json).
    ///
    /// # Errors
    /// [`BamdpError::Export`] for malformed JSON and
    /// [`BamdpError::Shape`] for ragged tensors.
    pub fn from_json(json: &str) -> Result<Self, BamdpError> {
        let raw: Self = serde_json::from_str(json).map_err(|e| BamdpError::Export(e.to_string()))?;
        Self::new(raw.counts)
    }
}

/// Probability of observing `omega` after `(action, next)`: the count of
/// `omega` divided by the row total.
///
/// # Errors
/// [`BamdpError::ZeroCounts`] when the row sums to zero.
///
/// # Panics
/// When an index is out of range.
pub fn bapomdp_obs_prob(
    psi: &ObsCounts,
    action: usize,
    next: usize,
    omega: usize,
) -> Result<f64, BamdpError> {
    let row = psi.row(action, next);
    let total: u64 = row.iter().sum();
    if total == 0 {
        return Err(BamdpError::ZeroCounts(format!(
            "observation row (action {action}, state {next})"
        )));
    }
    Ok(row[omega] as f64 / total as f64)
}

/// Returns the counts with the entry at `(action, next, omega)` raised by
/// one; all other entries are untouched.
///
/// # Panics
/// When an index is out of range.
pub fn bapomdp_count_update(
    psi: &ObsCounts,
    action: usize,
    next: usize,
    omega: usize,
) -> ObsCounts {
    let mut grown = psi.clone();
    grown.counts[action][next][omega] += 1;
    grown
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_counts_give_uniform_observation_probabilities() {
        let psi = ObsCounts::filled(1, 2, 5, 1).unwrap();
        for omega in 0..5 {
            assert_eq!(bapomdp_obs_prob(&psi, 0, 0, omega).unwrap(), 0.2);
        }
    }

    #[test]
    fn one_update_raises_exactly_one_entry() {
        let psi = ObsCounts::filled(2, 2, 5, 1).unwrap();
        let grown = bapomdp_count_update(&psi, 1, 0, 3);

        for a in 0..2 {
            for s in 0..2 {
                for omega in 0..5 {
                    let expected = if (a, s, omega) == (1, 0, 3) { 2 } else { 1 };
                    assert_eq!(grown.count(a, s, omega), expected);
                }
            }
        }
        assert_eq!(bapomdp_obs_prob(&grown, 1, 0, 3).unwrap(), 2.0 / 6.0);
        assert_ne!(bapomdp_count_update(&grown, 1, 0, 3), grown);
    }

    #[test]
    fn zero_rows_cannot_be_sampled() {
        let psi = ObsCounts::filled(1, 1, 3, 0).unwrap();
        assert!(matches!(bapomdp_obs_prob(&psi, 0, 0, 1), Err(BamdpError::ZeroCounts(_))));
        assert!(matches!(psi.observation_row(0, 0), Err(BamdpError::ZeroCounts(_))));
    }

    #[test]
    fn the_observation_table_transposes_actions_and_states() {
        let psi = ObsCounts::new(vec![
            vec![vec![3, 1], vec![0, 2]],
            vec![vec![1, 1], vec![4, 0]],
        ])
        .unwrap();
        let table = psi.to_observation_table().unwrap();

        assert_eq!(table.len(), 2);
        assert_eq!(table[0][0], vec![0.75, 0.25]);
        assert_eq!(table[1][0], vec![0.0, 1.0]);
        assert_eq!(table[0][1], vec![0.5, 0.5]);
        assert_eq!(table[1][1], vec![1.0, 0.0]);
    }

    #[test]
    fn ragged_tensors_are_rejected() {
        assert!(matches!(
            ObsCounts::new(vec![vec![vec![1, 1], vec![1]]]),
            Err(BamdpError::Shape(_))
        ));
        assert!(matches!(ObsCounts::new(Vec::new()), Err(BamdpError::Shape(_))));

        let psi = ObsCounts::filled(1, 2, 2, 1).unwrap();
        let back = ObsCounts::from_json(&psi.to_json().unwrap()).unwrap();
        assert_eq!(back, psi);
    }
}
