//! Shared fixtures: biomarker models in several configurations, plus
//! statistical oracles (Kolmogorov-Smirnov machinery and a composite
//! Simpson rule) that the simulation tests compare against. The oracles are
//! deliberately written from scratch here, independent of the crate's own
//! quadrature.
#![allow(dead_code)]

use std::collections::BTreeMap;

use pdmp_core::{
    Boundary, Flow, HybridState, Intensity, Kernel, ModeDynamics, PdmpModel, Region,
};

/// Marker level declaring remission.
pub const REMISSION_LEVEL: f64 = 1.0;
/// Marker level at which the patient dies.
pub const DEATH_LEVEL: f64 = 3.0;
/// Exponential decay rate of the marker under treatment.
pub const TREAT_RATE: f64 = -0.05;
/// Exponential growth rate of the marker during relapse.
pub const RELAPSE_RATE: f64 = 0.07;
/// Constant relapse intensity out of remission.
pub const RELAPSE_INTENSITY: f64 = 0.1;

/// Three-mode biomarker model: treatment decay to the remission boundary,
/// constant level in remission with a constant relapse intensity, then
/// unbounded exponential growth.
pub fn marker_model(relapse_intensity: f64) -> PdmpModel {
    let modes = BTreeMap::from([
        (
            -1,
            ModeDynamics {
                flow: Flow::ExponentialScale { rate: TREAT_RATE },
                intensity: Intensity::Zero,
                kernel: Kernel::SwitchMode { target: 0 },
                boundary: Boundary::ExponentialHit {
                    rate: TREAT_RATE,
                    level: REMISSION_LEVEL,
                    component: 0,
                },
                region: Region::Interval {
                    component: 0,
                    lo: REMISSION_LEVEL,
                    hi: f64::INFINITY,
                    lo_open: true,
                    hi_open: true,
                },
            },
        ),
        (
            0,
            ModeDynamics {
                flow: Flow::Constant,
                intensity: Intensity::Constant(relapse_intensity),
                kernel: Kernel::SwitchMode { target: 1 },
                boundary: Boundary::None,
                region: Region::Point { euclid: vec![REMISSION_LEVEL], tol: 1e-9 },
            },
        ),
        (
            1,
            ModeDynamics {
                flow: Flow::ExponentialScale { rate: RELAPSE_RATE },
                intensity: Intensity::Zero,
                kernel: Kernel::SwitchMode { target: 0 },
                boundary: Boundary::None,
                region: Region::Interval {
                    component: 0,
                    lo: REMISSION_LEVEL,
                    hi: f64::INFINITY,
                    lo_open: false,
                    hi_open: true,
                },
            },
        ),
    ]);
    PdmpModel::new(modes, false)
        .expect("marker model is well formed")
        .with_intensity_bound(relapse_intensity)
}

/// Time-augmented variant: the relapse intensity follows `beta u^alpha` in
/// the time `u` spent in remission.
pub fn marker_model_weibull(alpha: f64, beta: f64) -> PdmpModel {
    let modes = BTreeMap::from([
        (
            -1,
            ModeDynamics {
                flow: Flow::ExponentialScale { rate: TREAT_RATE },
                intensity: Intensity::Zero,
                kernel: Kernel::SwitchMode { target: 0 },
                boundary: Boundary::ExponentialHit {
                    rate: TREAT_RATE,
                    level: REMISSION_LEVEL,
                    component: 0,
                },
                region: Region::Interval {
                    component: 0,
                    lo: REMISSION_LEVEL,
                    hi: f64::INFINITY,
                    lo_open: true,
                    hi_open: true,
                },
            },
        ),
        (
            0,
            ModeDynamics {
                flow: Flow::Constant,
                intensity: Intensity::WeibullElapsed { alpha, beta },
                kernel: Kernel::SwitchMode { target: 1 },
                boundary: Boundary::None,
                region: Region::Point { euclid: vec![REMISSION_LEVEL], tol: 1e-9 },
            },
        ),
        (
            1,
            ModeDynamics {
                flow: Flow::ExponentialScale { rate: RELAPSE_RATE },
                intensity: Intensity::Zero,
                kernel: Kernel::SwitchMode { target: 0 },
                boundary: Boundary::None,
                region: Region::Interval {
                    component: 0,
                    lo: REMISSION_LEVEL,
                    hi: f64::INFINITY,
                    lo_open: false,
                    hi_open: true,
                },
            },
        ),
    ]);
    PdmpModel::new(modes, true).expect("augmented marker model is well formed")
}

/// Four-mode variant with an absorbing death state: relapse growth is
/// bounded by the death level, where the mode switches to an absorbing
/// cemetery.
pub fn marker_model_with_death(relapse_intensity: f64) -> PdmpModel {
    let modes = BTreeMap::from([
        (
            -1,
            ModeDynamics {
                flow: Flow::ExponentialScale { rate: TREAT_RATE },
                intensity: Intensity::Zero,
                kernel: Kernel::SwitchMode { target: 0 },
                boundary: Boundary::ExponentialHit {
                    rate: TREAT_RATE,
                    level: REMISSION_LEVEL,
                    component: 0,
                },
                region: Region::Interval {
                    component: 0,
                    lo: REMISSION_LEVEL,
                    hi: DEATH_LEVEL,
                    lo_open: true,
                    hi_open: true,
                },
            },
        ),
        (
            0,
            ModeDynamics {
                flow: Flow::Constant,
                intensity: Intensity::Constant(relapse_intensity),
                kernel: Kernel::SwitchMode { target: 1 },
                boundary: Boundary::None,
                region: Region::Point { euclid: vec![REMISSION_LEVEL], tol: 1e-9 },
            },
        ),
        (
            1,
            ModeDynamics {
                flow: Flow::ExponentialScale { rate: RELAPSE_RATE },
                intensity: Intensity::Zero,
                kernel: Kernel::SwitchMode { target: 2 },
                boundary: Boundary::ExponentialHit {
                    rate: RELAPSE_RATE,
                    level: DEATH_LEVEL,
                    component: 0,
                },
                region: Region::Interval {
                    component: 0,
                    lo: REMISSION_LEVEL,
                    hi: DEATH_LEVEL,
                    lo_open: false,
                    hi_open: true,
                },
            },
        ),
        (
            2,
            ModeDynamics {
                flow: Flow::Constant,
                intensity: Intensity::Zero,
                // Never fires: the cemetery has no jump mechanism.
                kernel: Kernel::SwitchMode { target: 0 },
                boundary: Boundary::None,
                region: Region::Point { euclid: vec![DEATH_LEVEL], tol: 1e-9 },
            },
        ),
    ]);
    PdmpModel::new(modes, false)
        .expect("death-extended marker model is well formed")
        .with_intensity_bound(relapse_intensity)
}

/// Perpetually cycling variant: relapse growth that reaches the death
/// level restarts treatment instead of absorbing, so trajectories carry
/// arbitrarily many jumps of both kinds.
pub fn cycling_marker_model(relapse_intensity: f64) -> PdmpModel {
    let modes = BTreeMap::from([
        (
            -1,
            ModeDynamics {
                flow: Flow::ExponentialScale { rate: TREAT_RATE },
                intensity: Intensity::Zero,
                kernel: Kernel::SwitchMode { target: 0 },
                boundary: Boundary::ExponentialHit {
                    rate: TREAT_RATE,
                    level: REMISSION_LEVEL,
                    component: 0,
                },
                region: Region::Interval {
                    component: 0,
                    lo: REMISSION_LEVEL,
                    hi: f64::INFINITY,
                    lo_open: true,
                    hi_open: true,
                },
            },
        ),
        (
            0,
            ModeDynamics {
                flow: Flow::Constant,
                intensity: Intensity::Constant(relapse_intensity),
                kernel: Kernel::SwitchMode { target: 1 },
                boundary: Boundary::None,
                region: Region::Point { euclid: vec![REMISSION_LEVEL], tol: 1e-9 },
            },
        ),
        (
            1,
            ModeDynamics {
                flow: Flow::ExponentialScale { rate: RELAPSE_RATE },
                intensity: Intensity::Zero,
                kernel: Kernel::SwitchMode { target: -1 },
                boundary: Boundary::ExponentialHit {
                    rate: RELAPSE_RATE,
                    level: DEATH_LEVEL,
                    component: 0,
                },
                region: Region::Interval {
                    component: 0,
                    lo: REMISSION_LEVEL,
                    hi: DEATH_LEVEL,
                    lo_open: false,
                    hi_open: false,
                },
            },
        ),
    ]);
    PdmpModel::new(modes, false)
        .expect("cycling marker model is well formed")
        .with_intensity_bound(relapse_intensity)
}

/// Two modes alternating under a constant intensity; every inter-jump time
/// is exponential with that rate. Used to collect sojourn samples.
pub fn ping_pong_model(rate: f64) -> PdmpModel {
    let mode = |target: i32| ModeDynamics {
        flow: Flow::Constant,
        intensity: Intensity::Constant(rate),
        kernel: Kernel::SwitchMode { target },
        boundary: Boundary::None,
        region: Region::All,
    };
    PdmpModel::new(BTreeMap::from([(0, mode(1)), (1, mode(0))]), false)
        .expect("ping-pong model is well formed")
        .with_intensity_bound(rate)
}

/// Starting state for the marker models: under treatment at twice the
/// remission level.
pub fn treated_start() -> HybridState {
    HybridState::scalar(-1, 2.0 * REMISSION_LEVEL)
}

/// Exponential distribution function.
pub fn exp_cdf(rate: f64, t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        1.0 - (-rate * t).exp()
    }
}

/// Asymptotic one-sided coefficient of the Kolmogorov distribution at the
/// 1% level: `sqrt(-ln(0.005) / 2)`.
pub const KS_COEFF_1PCT: f64 = 1.6276;

/// One-sample Kolmogorov-Smirnov statistic of `samples` against `cdf`.
pub fn ks_statistic(samples: &mut [f64], cdf: &dyn Fn(f64) -> f64) -> f64 {
    assert!(!samples.is_empty());
    samples.sort_by(|a, b| a.partial_cmp(b).expect("non-finite sample"));
    let n = samples.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in samples.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    d
}

/// One-sample critical value at the 1% level for `n` observations.
pub fn ks_critical_one_sample(n: usize) -> f64 {
    KS_COEFF_1PCT / (n as f64).sqrt()
}

/// Two-sample Kolmogorov-Smirnov statistic.
pub fn ks_two_sample_statistic(a: &mut [f64], b: &mut [f64]) -> f64 {
    assert!(!a.is_empty() && !b.is_empty());
    a.sort_by(|x, y| x.partial_cmp(y).expect("non-finite sample"));
    b.sort_by(|x, y| x.partial_cmp(y).expect("non-finite sample"));
    let (n, m) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            i += 1;
        } else {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    d
}

/// Two-sample critical value at the 1% level.
pub fn ks_critical_two_sample(n: usize, m: usize) -> f64 {
    KS_COEFF_1PCT * ((n + m) as f64 / (n as f64 * m as f64)).sqrt()
}

/// Composite Simpson rule with `panels` panels, used as an independent
/// quadrature oracle.
pub fn simpson_oracle(f: &dyn Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let n = 2 * panels;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + k as f64 * h);
    }
    s * h / 3.0
}

/// Standard error of a Bernoulli frequency estimate.
pub fn proportion_se(p_hat: f64, n: usize) -> f64 {
    (p_hat * (1.0 - p_hat) / n as f64).sqrt()
}

/// Sample mean and standard error of the mean, computed locally so tests
/// do not depend on the crate's own implementation.
pub fn sample_mean_se(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
