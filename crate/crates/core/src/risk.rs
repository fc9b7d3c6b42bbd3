//! Downside-probability risk measures.
//!
//! Risk is defined throughout as the probability, in percent, that a
//! normally distributed return falls below zero. With mean return μ and
//! volatility σ (both in percent), that probability is
//!
//! ```text
//! risk = 100 · ½ [1 + erf(-μ / (σ√2))] = 50 · erfc(μ / (σ√2))
//! ```
//!
//! and depends on μ and σ only through their ratio, the coefficient of
//! variation CV = σ/μ. Two routes are provided: the closed form above
//! and direct quadrature of the normal density, which serve as
//! independent checks on each other.

use alloc::format;
use alloc::vec::Vec;

use crate::erf::erfc;
use crate::error::{Error, Result};
use crate::quad::adaptive_simpson;

const SQRT_2: f64 = core::f64::consts::SQRT_2;

/// Probability of a negative return, in percent of outcomes.
///
/// Always lies in `[0, 100]`. Values derived from a finite positive CV
/// are below 50 and values from a finite negative CV above 50, except
/// that for `|CV|` beyond roughly 1e16 the closed form rounds to exactly
/// 50 in double precision.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct RiskPercent(f64);

impl RiskPercent {
    /// The percent value, in `[0, 100]`.
    pub fn value(self) -> f64 {
        self.0
    }

    fn from_probability(p: f64) -> Self {
        RiskPercent((p * 100.0).clamp(0.0, 100.0))
    }
}

impl core::fmt::Display for RiskPercent {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        self.0.fmt(f)
    }
}

/// Coefficient of variation, σ/μ.
///
/// The ratio is undefined when the mean is exactly zero; rather than
/// emitting ±∞ or NaN, the undefined state is carried explicitly so
/// callers are forced to handle it (mean returns near zero do occur in
/// real screens, and σ/μ explodes there).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientOfVariation {
    value: f64,
    defined: bool,
}

impl CoefficientOfVariation {
    /// A defined CV with the given value.
    pub fn new(value: f64) -> Self {
        CoefficientOfVariation { value, defined: true }
    }

    /// The undefined CV (zero mean).
    pub fn undefined() -> Self {
        CoefficientOfVariation { value: 0.0, defined: false }
    }

    /// σ/μ, undefined exactly when `mu == 0`.
    pub fn from_mu_sigma(mu: f64, sigma: f64) -> Self {
        if mu == 0.0 {
            Self::undefined()
        } else {
            Self::new(sigma / mu)
        }
    }

    pub fn is_defined(&self) -> bool {
        self.defined
    }

    /// The CV value, or `None` when undefined.
    pub fn value(&self) -> Option<f64> {
        self.defined.then_some(self.value)
    }
}

/// Risk from the coefficient of variation alone.
///
/// Strictly increasing in CV for CV > 0, approaching (never reaching)
/// 50% as CV → ∞. Errors when the CV is undefined; the σ = 0 limits are
/// available through [`risk_from_mu_sigma`].
pub fn risk_probability(cv: CoefficientOfVariation) -> Result<RiskPercent> {
    let c = cv.value().ok_or_else(|| {
        Error::domain(
            "coefficient of variation is undefined (zero mean); \
             use risk_from_mu_sigma, which handles the degenerate limits",
        )
    })?;
    if !c.is_finite() {
        return Err(Error::domain("coefficient of variation must be finite"));
    }
    // 1/(c√2) carries the sign of c, so the same expression covers the
    // negative-mean (risk > 50%) branch; c == ±0.0 gives ∓∞ and the
    // correct 0/100 limits.
    Ok(RiskPercent::from_probability(0.5 * erfc(1.0 / (c * SQRT_2))))
}

/// Risk from mean return and volatility, both in percent.
///
/// Scale-invariant: `(kμ, kσ)` gives the same risk for any k > 0. At
/// σ = 0 the distributional limit applies: 0 for μ > 0, 100 for μ < 0,
/// 50 for μ = 0.
pub fn risk_from_mu_sigma(mu: f64, sigma: f64) -> Result<RiskPercent> {
    if !mu.is_finite() || !sigma.is_finite() {
        return Err(Error::domain("mu and sigma must be finite"));
    }
    if sigma < 0.0 {
        return Err(Error::domain(format!("sigma must be nonnegative, got {sigma}")));
    }
    if sigma == 0.0 {
        let p = if mu > 0.0 {
            0.0
        } else if mu < 0.0 {
            1.0
        } else {
            0.5
        };
        return Ok(RiskPercent::from_probability(p));
    }
    Ok(RiskPercent::from_probability(0.5 * erfc(mu / (sigma * SQRT_2))))
}

/// Risk by direct quadrature of the normal density over `(-∞, 0]`.
///
/// The lower limit is truncated at μ - 10σ (tail mass beyond is under
/// 1e-23, far below any permitted tolerance). `tol` is an absolute
/// tolerance on the returned percentage and must lie in (0, 1e-4];
/// the result agrees with [`risk_from_mu_sigma`] within
/// `max(tol, 1e-6)` percentage points.
pub fn risk_by_integration(mu: f64, sigma: f64, tol: f64) -> Result<RiskPercent> {
    if !mu.is_finite() || !sigma.is_finite() {
        return Err(Error::domain("mu and sigma must be finite"));
    }
    if sigma <= 0.0 {
        return Err(Error::domain(format!("sigma must be positive, got {sigma}")));
    }
    if !(tol > 0.0 && tol <= 1e-4) {
        return Err(Error::domain(format!("tol must be in (0, 1e-4], got {tol}")));
    }
    let lower = mu - 10.0 * sigma;
    if lower >= 0.0 {
        // The whole truncated support sits above zero.
        return Ok(RiskPercent::from_probability(0.0));
    }
    let norm = 1.0 / (sigma * libm::sqrt(2.0 * core::f64::consts::PI));
    let pdf = |x: f64| norm * libm::exp(-(x - mu) * (x - mu) / (2.0 * sigma * sigma));
    // Tolerance on the probability, not the percentage.
    let prob_tol = tol / 100.0;
    // When the density peak lies well below zero the bulk of the mass
    // occupies a narrow slice of [lower, 0]; integrating that slice
    // separately keeps the sampler from stepping over it.
    let cut = (mu + 10.0 * sigma).clamp(lower, 0.0);
    let p = if cut > lower && cut < 0.0 {
        adaptive_simpson(&pdf, lower, cut, 0.5 * prob_tol, 48)?
            + adaptive_simpson(&pdf, cut, 0.0, 0.5 * prob_tol, 48)?
    } else {
        adaptive_simpson(&pdf, lower, 0.0, prob_tol, 48)?
    };
    Ok(RiskPercent::from_probability(p))
}

/// Risk sampled along an evenly spaced volatility grid at fixed mean.
///
/// The grid includes both endpoints; for μ > 0 the curve is
/// non-decreasing in σ.
pub fn risk_curve(
    mu: f64,
    sigma_min: f64,
    sigma_max: f64,
    n_points: usize,
) -> Result<Vec<(f64, RiskPercent)>> {
    if !mu.is_finite() || mu == 0.0 {
        return Err(Error::domain("mu must be finite and nonzero"));
    }
    if !(sigma_min >= 0.0 && sigma_min < sigma_max && sigma_max.is_finite()) {
        return Err(Error::domain(format!(
            "sigma range must satisfy 0 <= min < max, got [{sigma_min}, {sigma_max}]"
        )));
    }
    if n_points < 2 {
        return Err(Error::domain(format!("need at least 2 grid points, got {n_points}")));
    }
    let step = (sigma_max - sigma_min) / (n_points - 1) as f64;
    let mut curve = Vec::with_capacity(n_points);
    for i in 0..n_points {
        let sigma = if i + 1 == n_points { sigma_max } else { sigma_min + i as f64 * step };
        curve.push((sigma, risk_from_mu_sigma(mu, sigma)?));
    }
    Ok(curve)
}

/// Largest volatility that keeps risk inside the zero-risk region.
///
/// Risk stays within CV in [0, 0.25] below display rounding (about
/// 0.0032% at the boundary, under 0.01 percentage points), whatever the
/// magnitude of the positive mean; the boundary volatility is 0.25·μ.
pub fn risk_free_max_sigma(mu: f64) -> Result<f64> {
    if !mu.is_finite() || mu <= 0.0 {
        return Err(Error::domain(format!("mu must be positive, got {mu}")));
    }
    Ok(0.25 * mu)
}
