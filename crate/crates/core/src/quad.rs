//! Adaptive Simpson quadrature.
//!
//! Small, allocation-free integrator used as the independent numerical
//! route for the downside-probability computation. Each interval is
//! accepted once the Richardson error estimate `|S_fine - S_coarse|/15`
//! fits inside its share of the tolerance budget; otherwise it is
//! bisected, down to a depth cap.

use crate::error::{Error, Result};

/// Composite Simpson estimate over `[a, b]` given the endpoint and
/// midpoint samples.
#[inline]
fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

fn refine<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    coarse: f64,
    tol: f64,
    depth: u32,
    unresolved: &mut f64,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - coarse;
    if delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    if depth == 0 {
        *unresolved += delta.abs() / 15.0;
        return left + right + delta / 15.0;
    }
    let half_tol = 0.5 * tol;
    refine(f, a, m, fa, flm, fm, left, half_tol, depth - 1, unresolved)
        + refine(f, m, b, fm, frm, fb, right, half_tol, depth - 1, unresolved)
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
///
/// Returns a numeric error carrying the achieved error estimate when the
/// depth cap is reached before the tolerance is met.
pub(crate) fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
    max_depth: u32,
) -> Result<f64> {
    debug_assert!(a <= b && tol > 0.0);
    if a >= b {
        return Ok(0.0);
    }
    let m = 0.5 * (a + b);
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    let coarse = simpson(a, b, fa, fm, fb);
    let mut unresolved = 0.0;
    let value = refine(&f, a, b, fa, fm, fb, coarse, tol, max_depth, &mut unresolved);
    if unresolved > tol {
        return Err(Error::Numeric {
            message: "adaptive quadrature hit the subdivision cap before converging".into(),
            achieved: unresolved,
        });
    }
    Ok(value)
}
