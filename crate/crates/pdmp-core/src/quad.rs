//! Scalar quadrature and root finding used by hazard integration, boundary
//! detection, and cost evaluation.

/// Integrates `f` over `[a, b]` by adaptive Simpson subdivision.
///
/// Subdivision stops once the Richardson error estimate on a panel drops
/// below the panel's share of `tol`, or at a fixed recursion depth that
/// keeps worst-case work bounded on non-smooth integrands.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    recurse(f, a, b, fa, fm, fb, whole, tol, 50)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Finds a root of the nondecreasing function `g` on `[lo, hi]` by bisection.
///
/// Requires `g(lo) <= 0 <= g(hi)`. The returned abscissa is within `tol` of
/// a sign change.
///
/// # Panics
/// Panics if the bracket does not straddle zero.
pub fn bisect_monotone(g: &dyn Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> f64 {
    let glo = g(lo);
    let ghi = g(hi);
    assert!(
        glo <= 0.0 && ghi >= 0.0,
        "bisection bracket does not straddle zero: g({lo})={glo}, g({hi})={ghi}"
    );
    let (mut lo, mut hi) = (lo, hi);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
