//! Backward induction for finite-horizon models.

use mdp_core::{FiniteMdp, Policy};

use crate::bellman::stage_greedy;
use crate::error::DpError;
use crate::result::SolveResult;

/// Solves a finite-horizon model exactly by backward induction.
///
/// Stage `H` values are the terminal costs; each earlier stage minimizes
/// the expected stage cost plus the following stage's value over the
/// admissible actions, with the lowest-index action winning ties. Stage
/// overrides of the transition and cost tables are honored. The returned
/// residual is the max-norm error of re-applying the recursion, which is
/// zero up to floating-point reproducibility.
///
/// # Errors
/// [`DpError::InvalidArgument`] for an infinite horizon;
/// [`DpError::Model`] if the model fails validation.
pub fn backward_induction(mdp: &FiniteMdp) -> Result<SolveResult, DpError> {
    let h = mdp.horizon.finite().ok_or_else(|| {
        DpError::InvalidArgument("backward induction needs a finite horizon".into())
    })?;
    mdp.ensure_valid()?;

    let mut values = vec![Vec::new(); h + 1];
    let mut rules = vec![Vec::new(); h];
    values[h] = mdp.terminal.clone();
    for t in (0..h).rev() {
        let (v, rule) = stage_greedy(mdp, t, 1.0, &values[t + 1]);
        values[t] = v;
        rules[t] = rule;
    }

    let mut residual = 0.0f64;
    for t in 0..h {
        let (check, _) = stage_greedy(mdp, t, 1.0, &values[t + 1]);
        for s in 0..mdp.n_states() {
            residual = residual.max((check[s] - values[t][s]).abs());
        }
    }

    Ok(SolveResult {
        values,
        policy: Policy::MarkovDeterministic(rules),
        iterations: h,
        residual,
    })
}
