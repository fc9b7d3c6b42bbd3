//! Shared test oracles, independent of the library's evaluation paths.
#![allow(dead_code)]

const TWO_OVER_SQRT_PI: f64 = 1.128_379_167_095_512_6;

/// erf via its Maclaurin series, rearranged into the positive-term form
///
/// ```text
/// erf(x) = (2/√π) · x · e^(-x²) · Σ (2x²)^n / (2n+1)!!
/// ```
///
/// Every term is positive, so the sum carries no cancellation and the
/// oracle stays accurate across the whole [-6, 6] comparison range
/// (the raw alternating series loses all precision beyond |x| ≈ 4 in
/// doubles; see `erf_series_alternating`). Summation stops when a term
/// no longer moves the running sum at 1e-18 relative, well past the
/// 1e-12 convergence the comparisons need.
pub fn erf_series(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let z = 2.0 * x * x;
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut odd = 1.0f64;
    for _ in 0..20_000 {
        odd += 2.0;
        term *= z / odd;
        sum += term;
        if term < sum * 1e-18 {
            break;
        }
    }
    TWO_OVER_SQRT_PI * x * (-x * x).exp() * sum
}

/// The raw alternating Maclaurin series Σ (-1)ⁿ x^(2n+1) / (n!(2n+1)).
///
/// Only trustworthy for |x| ≲ 4 (catastrophic cancellation beyond);
/// used to cross-check `erf_series` on the small-argument range.
pub fn erf_series_alternating(x: f64) -> f64 {
    let mut sum = x;
    let mut power = x; // x^(2n+1) / n!
    for n in 1..=400u32 {
        power *= -x * x / n as f64;
        let term = power / (2 * n + 1) as f64;
        sum += term;
        if term.abs() < 1e-18 {
            break;
        }
    }
    TWO_OVER_SQRT_PI * sum
}

/// Asserts `|a - b| <= tol` with a readable failure message.
pub fn assert_close(a: f64, b: f64, tol: f64, what: &str) {
    assert!(
        (a - b).abs() <= tol,
        "{what}: {a} vs {b} differs by {} (tol {tol})",
        (a - b).abs()
    );
}
