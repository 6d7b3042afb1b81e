//! Brute-force policy enumeration, the test oracle for the exact solvers.

use mdp_core::FiniteMdp;

use crate::error::DpError;

/// Enumeration limit of [`brute_force_optimal`], counted in Markov
/// deterministic policies.
pub const BRUTE_FORCE_LIMIT: u128 = 10_000_000;

/// Minimum expected total cost from `s0` over every Markov deterministic
/// policy, each evaluated exactly by a backward value recursion. Intended
/// as an independent oracle for small instances; the solvers never call
/// it.
///
/// # Errors
/// [`DpError::InvalidArgument`] for an infinite horizon or bad `s0`;
/// [`DpError::TooLarge`] when the policy count exceeds
/// [`BRUTE_FORCE_LIMIT`]; [`DpError::Model`] on validation failure.
pub fn brute_force_optimal(mdp: &FiniteMdp, s0: usize) -> Result<f64, DpError> {
    let h = mdp.horizon.finite().ok_or_else(|| {
        DpError::InvalidArgument("brute force needs a finite horizon".into())
    })?;
    mdp.ensure_valid()?;
    let n = mdp.n_states();
    if s0 >= n {
        return Err(DpError::InvalidArgument(format!(
            "start state {s0} of {n} states"
        )));
    }

    let per_stage = mdp
        .constraints
        .iter()
        .fold(1u128, |acc, k| acc.saturating_mul(k.len() as u128));
    let count = per_stage.saturating_pow(h.try_into().unwrap_or(u32::MAX));
    if count > BRUTE_FORCE_LIMIT {
        return Err(DpError::TooLarge { count, limit: BRUTE_FORCE_LIMIT });
    }

    // One enumeration slot per (stage, state) pair, each running over the
    // admissible actions of its state.
    let slots: Vec<&[usize]> = (0..h)
        .flat_map(|_| mdp.constraints.iter().map(Vec::as_slice))
        .collect();
    let mut choice = vec![0usize; slots.len()];
    let mut best = f64::INFINITY;
    loop {
        let mut v = mdp.terminal.clone();
        for t in (0..h).rev() {
            let mut next = vec![0.0; n];
            for (s, value) in next.iter_mut().enumerate() {
                let a = slots[t * n + s][choice[t * n + s]];
                *value = mdp.expected_cost(t, s, a) + mdp.expected_value(t, s, a, &v);
            }
            v = next;
        }
        best = best.min(v[s0]);

        let mut advanced = false;
        for (c, slot) in choice.iter_mut().zip(&slots) {
            *c += 1;
            if *c < slot.len() {
                advanced = true;
                break;
            }
            *c = 0;
        }
        if !advanced {
            return Ok(best);
        }
    }
}
