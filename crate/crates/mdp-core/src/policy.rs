//! Policies over finite MDPs.
//!
//! The four supported classes combine deterministic or stochastic decision
//! rules with stationary or stage-indexed scope. History-dependent behavior
//! is expressed by lifting the history into the state space of the MDP
//! itself, keeping policies plain tables.

use rand::distributions::{Distribution, Uniform};
use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::MdpError;
use crate::mdp::FiniteMdp;

/// Tolerance on stochastic-rule weight sums.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

/// A decision rule table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    /// One action per state, used at every stage.
    StationaryDeterministic(Vec<usize>),
    /// One action per stage and state: `table[t][s]`.
    MarkovDeterministic(Vec<Vec<usize>>),
    /// One action distribution per state: `table[s]` lists
    /// `(action, weight)`.
    StationaryStochastic(Vec<Vec<(usize, f64)>>),
    /// One action distribution per stage and state: `table[t][s]`.
    MarkovStochastic(Vec<Vec<Vec<(usize, f64)>>>),
}

impl Policy {
    /// Whether the same rule applies at every stage.
    pub fn is_stationary(&self) -> bool {
        matches!(self, Policy::StationaryDeterministic(_) | Policy::StationaryStochastic(_))
    }

    /// Whether every rule is a single action.
    pub fn is_deterministic(&self) -> bool {
        matches!(self, Policy::StationaryDeterministic(_) | Policy::MarkovDeterministic(_))
    }

    /// Number of stages covered; `None` for stationary policies.
    pub fn stages(&self) -> Option<usize> {
        match self {
            Policy::MarkovDeterministic(t) => Some(t.len()),
            Policy::MarkovStochastic(t) => Some(t.len()),
            _ => None,
        }
    }

    /// Selects the action at stage `t` in state `s`, drawing from the rule
    /// for stochastic policies. Deterministic policies use no randomness.
    ///
    /// # Errors
    /// [`MdpError::InvalidPolicy`] when `t` or `s` is not covered by the
    /// table, or a stochastic rule is empty.
    pub fn action(&self, t: usize, s: usize, rng: &mut dyn RngCore) -> Result<usize, MdpError> {
        match self {
            Policy::StationaryDeterministic(table) => {
                table.get(s).copied().ok_or_else(|| uncovered(t, s))
            }
            Policy::MarkovDeterministic(table) => table
                .get(t)
                .and_then(|row| row.get(s))
                .copied()
                .ok_or_else(|| uncovered(t, s)),
            Policy::StationaryStochastic(table) => {
                sample_rule(table.get(s).ok_or_else(|| uncovered(t, s))?, t, s, rng)
            }
            Policy::MarkovStochastic(table) => sample_rule(
                table.get(t).and_then(|row| row.get(s)).ok_or_else(|| uncovered(t, s))?,
                t,
                s,
                rng,
            ),
        }
    }

    /// Checks the policy against a model: every state covered at every
    /// relevant stage, all actions (or supports) inside the constraint
    /// sets, stochastic weights nonnegative and summing to one within
    /// [`WEIGHT_SUM_TOL`], and stage tables covering a finite horizon.
    ///
    /// # Errors
    /// [`MdpError::InvalidPolicy`] with the first violation found.
    pub fn validate_for(&self, mdp: &FiniteMdp) -> Result<(), MdpError> {
        let n_states = mdp.n_states();
        let check_det_row = |row: &[usize], t: Option<usize>| -> Result<(), MdpError> {
            if row.len() != n_states {
                return Err(MdpError::InvalidPolicy(format!(
                    "rule covers {} states of {n_states}{}",
                    row.len(),
                    stage_suffix(t)
                )));
            }
            for (s, &a) in row.iter().enumerate() {
                if !mdp.constraints[s].contains(&a) {
                    return Err(MdpError::InvalidPolicy(format!(
                        "action {a} not admissible in state {s}{}",
                        stage_suffix(t)
                    )));
                }
            }
            Ok(())
        };
        let check_stoch_row = |row: &[Vec<(usize, f64)>], t: Option<usize>| -> Result<(), MdpError> {
            if row.len() != n_states {
                return Err(MdpError::InvalidPolicy(format!(
                    "rule covers {} states of {n_states}{}",
                    row.len(),
                    stage_suffix(t)
                )));
            }
            for (s, rule) in row.iter().enumerate() {
                if rule.is_empty() {
                    return Err(MdpError::InvalidPolicy(format!(
                        "empty distribution in state {s}{}",
                        stage_suffix(t)
                    )));
                }
                let mut sum = 0.0;
                for &(a, w) in rule {
                    if !mdp.constraints[s].contains(&a) {
                        return Err(MdpError::InvalidPolicy(format!(
                            "action {a} not admissible in state {s}{}",
                            stage_suffix(t)
                        )));
                    }
                    if !(w >= 0.0 && w.is_finite()) {
                        return Err(MdpError::InvalidPolicy(format!(
                            "weight {w} on action {a} in state {s}{}",
                            stage_suffix(t)
                        )));
                    }
                    sum += w;
                }
                if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
                    return Err(MdpError::InvalidPolicy(format!(
                        "weights in state {s} sum to {sum}{}",
                        stage_suffix(t)
                    )));
                }
            }
            Ok(())
        };

        let required_stages = mdp.horizon.finite();
        match self {
            Policy::StationaryDeterministic(table) => check_det_row(table, None),
            Policy::StationaryStochastic(table) => check_stoch_row(table, None),
            Policy::MarkovDeterministic(table) => {
                if let Some(h) = required_stages {
                    if table.len() < h {
                        return Err(MdpError::InvalidPolicy(format!(
                            "{} stage rules for horizon {h}",
                            table.len()
                        )));
                    }
                }
                for (t, row) in table.iter().enumerate() {
                    check_det_row(row, Some(t))?;
                }
                Ok(())
            }
            Policy::MarkovStochastic(table) => {
                if let Some(h) = required_stages {
                    if table.len() < h {
                        return Err(MdpError::InvalidPolicy(format!(
                            "{} stage rules for horizon {h}",
                            table.len()
                        )));
                    }
                }
                for (t, row) in table.iter().enumerate() {
                    check_stoch_row(row, Some(t))?;
                }
                Ok(())
            }
        }
    }
}

fn stage_suffix(t: Option<usize>) -> String {
    t.map_or(String::new(), |t| format!(" at stage {t}"))
}

fn uncovered(t: usize, s: usize) -> MdpError {
    MdpError::InvalidPolicy(format!("no rule for stage {t}, state {s}"))
}

fn sample_rule(
    rule: &[(usize, f64)],
    t: usize,
    s: usize,
    rng: &mut dyn RngCore,
) -> Result<usize, MdpError> {
    if rule.is_empty() {
        return Err(MdpError::InvalidPolicy(format!(
            "empty distribution at stage {t}, state {s}"
        )));
    }
    let u: f64 = Uniform::new(0.0, 1.0).sample(rng);
    let mut acc = 0.0;
    let mut chosen = rule[0].0;
    for &(a, w) in rule {
        if w > 0.0 {
            chosen = a;
            acc += w;
            if u < acc {
                break;
            }
        }
    }
    Ok(chosen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mdp::{CostModel, Horizon, Transitions};
    use rand::rngs::mock::StepRng;

    fn chain() -> FiniteMdp {
        FiniteMdp::new(
            vec!["l".into(), "r".into()],
            vec!["stay".into(), "move".into()],
            Horizon::Finite(3),
            vec![vec![0, 1], vec![0]],
            Transitions::Dense(vec![
                vec![vec![1.0, 0.0], vec![0.0, 1.0]],
                vec![vec![0.0, 1.0], vec![1.0, 0.0]],
            ]),
            CostModel::PerPair(vec![vec![0.0, 1.0], vec![0.0, 1.0]]),
            vec![0.0, 0.0],
        )
        .unwrap()
    }

    #[test]
    fn actions_outside_constraints_are_rejected() {
        let mdp = chain();
        let bad = Policy::StationaryDeterministic(vec![0, 1]);
        assert!(bad.validate_for(&mdp).is_err(), "state r admits only action 0");
        let good = Policy::StationaryDeterministic(vec![1, 0]);
        assert!(good.validate_for(&mdp).is_ok());
    }

    #[test]
    fn markov_tables_must_cover_the_horizon() {
        let mdp = chain();
        let short = Policy::MarkovDeterministic(vec![vec![0, 0]; 2]);
        assert!(short.validate_for(&mdp).is_err());
        let full = Policy::MarkovDeterministic(vec![vec![0, 0]; 3]);
        assert!(full.validate_for(&mdp).is_ok());
    }

    #[test]
    fn stochastic_weights_must_be_a_distribution() {
        let mdp = chain();
        let lopsided = Policy::StationaryStochastic(vec![
            vec![(0, 0.6), (1, 0.6)],
            vec![(0, 1.0)],
        ]);
        assert!(lopsided.validate_for(&mdp).is_err());
        let proper = Policy::StationaryStochastic(vec![
            vec![(0, 0.6), (1, 0.4)],
            vec![(0, 1.0)],
        ]);
        assert!(proper.validate_for(&mdp).is_ok());
    }

    #[test]
    fn deterministic_action_needs_no_randomness() {
        let policy = Policy::StationaryDeterministic(vec![1, 0]);
        let mut rng = StepRng::new(0, 1);
        assert_eq!(policy.action(0, 0, &mut rng).unwrap(), 1);
        assert_eq!(policy.action(7, 1, &mut rng).unwrap(), 0);
    }
}
