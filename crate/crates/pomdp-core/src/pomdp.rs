use mdp_core::FiniteMdp;
use serde::{Deserialize, Serialize};

use crate::belief::Belief;
use crate::error::PomdpError;

/// Tolerance on the total mass of an observation row.
pub const OBS_ROW_TOL: f64 = 1e-12;

/// A partially observed Markov decision process over a finite state space.
///
/// The hidden dynamics and costs live in `base`. After each transition the
/// agent sees an observation drawn from `observation`, indexed by the state
/// just entered and the action just taken. Beliefs over the hidden state
/// start at `initial_belief` and are propagated by Bayes updates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FinitePomdp {
    /// Hidden dynamics, costs, constraints, and horizon.
    pub base: FiniteMdp,
    /// Display names of the observations.
    pub observation_labels: Vec<String>,
    /// `observation[s2][a][omega]` is the probability of seeing `omega`
    /// after action `a` lands in state `s2`.
    pub observation: Vec<Vec<Vec<f64>>>,
    /// Distribution of the hidden state before the first action.
    pub initial_belief: Belief,
}

impl FinitePomdp {
    /// Builds a POMDP after checking that the observation table matches the
    /// state, action, and observation counts.
    ///
    /// # Errors
    /// [`PomdpError::Shape`] on any dimension mismatch.
    pub fn new(
        base: FiniteMdp,
        observation_labels: Vec<String>,
        observation: Vec<Vec<Vec<f64>>>,
        initial_belief: Belief,
    ) -> Result<Self, PomdpError> {
        let n_states = base.n_states();
        let n_actions = base.n_actions();
        let n_obs = observation_labels.len();
        if n_obs == 0 {
            return Err(PomdpError::Shape("no observations".into()));
        }
        if observation.len() != n_states {
            return Err(PomdpError::Shape(format!(
                "observation table covers {} states, model has {n_states}",
                observation.len()
            )));
        }
        for (s2, per_action) in observation.iter().enumerate() {
            if per_action.len() != n_actions {
                return Err(PomdpError::Shape(format!(
                    "observation table at state {s2} covers {} actions, model has {n_actions}",
                    per_action.len()
                )));
            }
            for (a, row) in per_action.iter().enumerate() {
                if row.len() != n_obs {
                    return Err(PomdpError::Shape(format!(
                        "observation row at ({s2},{a}) has {} entries for {n_obs} observations",
                        row.len()
                    )));
                }
            }
        }
        if initial_belief.len() != n_states {
            return Err(PomdpError::Shape(format!(
                "initial belief covers {} states, model has {n_states}",
                initial_belief.len()
            )));
        }
        Ok(Self {
            base,
            observation_labels,
            observation,
            initial_belief,
        })
    }

    /// Builds a POMDP whose initial belief is inferred from a first
    /// observation: `b0(s)` is proportional to `prior(s)` times the
    /// likelihood of `omega0` in state `s`.
    ///
    /// The observation table is indexed by the preceding action, but no
    /// action precedes `omega0`, so the likelihood column must not depend on
    /// the action.
    ///
    /// # Errors
    /// [`PomdpError::Invalid`] when the `omega0` column varies with the
    /// action, [`PomdpError::ImpossibleEvidence`] when the prior gives
    /// `omega0` probability zero, plus the shape errors of [`Self::new`].
    pub fn with_initial_observation(
        base: FiniteMdp,
        observation_labels: Vec<String>,
        observation: Vec<Vec<Vec<f64>>>,
        omega0: usize,
        prior: Option<Belief>,
    ) -> Result<Self, PomdpError> {
        let n_states = base.n_states();
        let prior = match prior {
            Some(b) => b,
            None => Belief::uniform(n_states)?,
        };
        let placeholder = Belief::uniform(n_states)?;
        let pomdp = Self::new(base, observation_labels, observation, placeholder)?;
        if omega0 >= pomdp.n_observations() {
            return Err(PomdpError::InvalidArgument(format!(
                "initial observation {omega0} is out of range for {} observations",
                pomdp.n_observations()
            )));
        }
        if prior.len() != n_states {
            return Err(PomdpError::Shape(format!(
                "prior covers {} states, model has {n_states}",
                prior.len()
            )));
        }
        let mut scores = Vec::with_capacity(n_states);
        for s in 0..n_states {
            let per_action = &pomdp.observation[s];
            let first = per_action[0][omega0];
            for (a, row) in per_action.iter().enumerate() {
                if (row[omega0] - first).abs() > OBS_ROW_TOL {
                    return Err(PomdpError::Invalid(format!(
                        "likelihood of the initial observation depends on the action \
                         at state {s} (action {a}); supply the initial belief directly"
                    )));
                }
            }
            scores.push(prior.weight(s) * first);
        }
        let initial =
            Belief::normalized(scores, "the prior assigns the initial observation mass zero")?;
        Ok(Self {
            initial_belief: initial,
            ..pomdp
        })
    }

    /// Number of hidden states.
    pub fn n_states(&self) -> usize {
        self.base.n_states()
    }

    /// Number of actions.
    pub fn n_actions(&self) -> usize {
        self.base.n_actions()
    }

    /// Number of observations.
    pub fn n_observations(&self) -> usize {
        self.observation_labels.len()
    }

    /// Probability of seeing `omega` after action `a` lands in state `s2`.
    pub fn obs_prob(&self, s2: usize, a: usize, omega: usize) -> f64 {
        self.observation[s2][a][omega]
    }

    /// Checks semantic validity: the base model passes its own checks and
    /// every observation row is a probability distribution.
    ///
    /// # Errors
    /// [`PomdpError::Model`] or [`PomdpError::Invalid`] on the first defect.
    pub fn ensure_valid(&self) -> Result<(), PomdpError> {
        self.base.ensure_valid()?;
        for (s2, per_action) in self.observation.iter().enumerate() {
            for (a, row) in per_action.iter().enumerate() {
                let mut total = 0.0;
                for (omega, &p) in row.iter().enumerate() {
                    if !p.is_finite() || p < 0.0 {
                        return Err(PomdpError::Invalid(format!(
                            "observation probability at ({s2},{a},{omega}) is {p}"
                        )));
                    }
                    total += p;
                }
                if (total - 1.0).abs() > OBS_ROW_TOL {
                    return Err(PomdpError::Invalid(format!(
                        "observation row at ({s2},{a}) sums to {total}, expected 1"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Serializes the POMDP to pretty JSON.
    pub fn to_json(&self) -> Result<String, PomdpError> {
        serde_json::to_string_pretty(self).map_err(|e| PomdpError::Export(e.to_string()))
    }

    /// Deserializes a POMDP from JSON, rechecking table shapes.
    pub fn from_json(json: &str) -> Result<Self, PomdpError> {
        let raw: Self =
            serde_json::from_str(json).map_err(|e| PomdpError::Export(e.to_string()))?;
        Self::new(
            raw.base,
            raw.observation_labels,
            raw.observation,
            raw.initial_belief,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use mdp_core::{CostModel, Horizon, Transitions};

    fn two_state_base() -> FiniteMdp {
        FiniteMdp::unconstrained(
            Horizon::Finite(2),
            Transitions::Dense(vec![
                vec![vec![0.5, 0.5]],
                vec![vec![0.0, 1.0]],
            ]),
            CostModel::PerPair(vec![vec![1.0], vec![0.0]]),
            vec![0.0, 0.0],
        )
        .unwrap()
    }

    fn noisy_obs() -> Vec<Vec<Vec<f64>>> {
        vec![
            vec![vec![0.8, 0.2]],
            vec![vec![0.3, 0.7]],
        ]
    }

    #[test]
    fn new_checks_table_shapes() {
        let base = two_state_base();
        let b0 = Belief::uniform(2).unwrap();
        let labels = vec!["lo".into(), "hi".into()];
        assert!(FinitePomdp::new(base.clone(), labels.clone(), noisy_obs(), b0.clone()).is_ok());

        let short = vec![vec![vec![0.8, 0.2]]];
        assert!(matches!(
            FinitePomdp::new(base.clone(), labels.clone(), short, b0.clone()),
            Err(PomdpError::Shape(_))
        ));

        let ragged = vec![vec![vec![0.8, 0.2]], vec![vec![0.3]]];
        assert!(matches!(
            FinitePomdp::new(base, labels, ragged, b0),
            Err(PomdpError::Shape(_))
        ));
    }

    #[test]
    fn ensure_valid_checks_observation_rows() {
        let base = two_state_base();
        let b0 = Belief::uniform(2).unwrap();
        let labels = vec!["lo".into(), "hi".into()];

        let ok = FinitePomdp::new(base.clone(), labels.clone(), noisy_obs(), b0.clone()).unwrap();
        assert!(ok.ensure_valid().is_ok());

        let leaky = vec![vec![vec![0.8, 0.1]], vec![vec![0.3, 0.7]]];
        let bad = FinitePomdp::new(base, labels, leaky, b0).unwrap();
        assert!(matches!(bad.ensure_valid(), Err(PomdpError::Invalid(_))));
    }

    #[test]
    fn initial_observation_reweights_the_prior() {
        let base = two_state_base();
        let labels = vec!["lo".into(), "hi".into()];
        let pomdp = FinitePomdp::with_initial_observation(
            base,
            labels,
            noisy_obs(),
            0,
            None,
        )
        .unwrap();
        let b0 = &pomdp.initial_belief;
        assert!((b0.weight(0) - 0.8 / 1.1).abs() < 1e-15);
        assert!((b0.weight(1) - 0.3 / 1.1).abs() < 1e-15);
    }

    #[test]
    fn initial_observation_rejects_action_dependent_likelihoods() {
        let base = FiniteMdp::unconstrained(
            Horizon::Finite(2),
            Transitions::Dense(vec![
                vec![vec![0.5, 0.5], vec![1.0, 0.0]],
                vec![vec![0.0, 1.0], vec![0.0, 1.0]],
            ]),
            CostModel::PerPair(vec![vec![1.0, 1.0], vec![0.0, 0.0]]),
            vec![0.0, 0.0],
        )
        .unwrap();
        let obs = vec![
            vec![vec![0.8, 0.2], vec![0.7, 0.3]],
            vec![vec![0.3, 0.7], vec![0.3, 0.7]],
        ];
        let out = FinitePomdp::with_initial_observation(
            base,
            vec!["lo".into(), "hi".into()],
            obs,
            0,
            None,
        );
        assert!(matches!(out, Err(PomdpError::Invalid(_))));
    }

    #[test]
    fn json_round_trip_preserves_the_model() {
        let pomdp = FinitePomdp::new(
            two_state_base(),
            vec!["lo".into(), "hi".into()],
            noisy_obs(),
            Belief::new(vec![0.25, 0.75]).unwrap(),
        )
        .unwrap();
        let json = pomdp.to_json().unwrap();
        let back = FinitePomdp::from_json(&json).unwrap();
        assert_eq!(pomdp, back);
    }
}
