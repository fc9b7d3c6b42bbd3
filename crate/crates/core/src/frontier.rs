//! Two-asset frontier sweeps and n-asset portfolio moments.
//!
//! Portfolio variance follows the usual quadratic form in the weights,
//! pairwise correlations and per-security volatilities; the two-asset
//! closed form is kept as a separate code path so the sweep and the
//! general quadratic can be checked against each other. Every frontier
//! row carries the portfolio CV and the downside probability next to
//! the classic (σ_p, μ_p) pair, which is what makes rows with equal
//! volatility but very different risk visible.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::risk::{risk_from_mu_sigma, risk_probability, CoefficientOfVariation, RiskPercent};

/// Expected return (percent) and volatility (percent) of one security.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecurityParams {
    mu: f64,
    sigma: f64,
}

impl SecurityParams {
    pub fn new(mu: f64, sigma: f64) -> Result<Self> {
        if !mu.is_finite() || !sigma.is_finite() {
            return Err(Error::domain("security parameters must be finite"));
        }
        if sigma < 0.0 {
            return Err(Error::domain(format!("sigma must be nonnegative, got {sigma}")));
        }
        Ok(SecurityParams { mu, sigma })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }
}

/// Symmetric correlation matrix with unit diagonal and entries in
/// [-1, 1]. Positive semidefiniteness is not checked here; a weight
/// vector exposing an invalid matrix surfaces as a negative variance in
/// [`portfolio_variance`].
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl CorrelationMatrix {
    /// Builds from a row-major n×n slice.
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::domain(format!(
                "correlation matrix needs {}x{} = {} entries, got {}",
                n,
                n,
                n * n,
                entries.len()
            )));
        }
        for i in 0..n {
            if entries[i * n + i] != 1.0 {
                return Err(Error::domain(format!(
                    "correlation diagonal must be 1, got {} at ({i}, {i})",
                    entries[i * n + i]
                )));
            }
            for j in 0..i {
                let a = entries[i * n + j];
                let b = entries[j * n + i];
                if a != b {
                    return Err(Error::domain(format!(
                        "correlation matrix must be symmetric; ({i},{j})={a} vs ({j},{i})={b}"
                    )));
                }
                if !(a.is_finite() && a.abs() <= 1.0) {
                    return Err(Error::domain(format!(
                        "correlation must lie in [-1, 1], got {a} at ({i},{j})"
                    )));
                }
            }
        }
        Ok(CorrelationMatrix { n, entries })
    }

    /// The n×n identity: uncorrelated securities.
    pub fn identity(n: usize) -> Self {
        let mut entries = alloc::vec![0.0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1.0;
        }
        CorrelationMatrix { n, entries }
    }

    /// The 2×2 matrix with off-diagonal `rho`.
    pub fn two_asset(rho: f64) -> Result<Self> {
        Self::new(2, alloc::vec![1.0, rho, rho, 1.0])
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }
}

/// Portfolio weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    /// Validates that the weights are finite and sum to 1 within 1e-9.
    /// Negative entries (short positions) are allowed; see
    /// [`WeightVector::is_long_only`].
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::domain("weight vector must be non-empty"));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::domain("weights must be finite"));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::domain(format!("weights must sum to 1, got {sum}")));
        }
        Ok(WeightVector(weights))
    }

    pub fn weights(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_long_only(&self) -> bool {
        self.0.iter().all(|&w| w >= 0.0)
    }
}

/// Negative-variance guard: values inside this floating-point slack are
/// clamped to zero, anything lower is rejected as an invalid matrix.
const VARIANCE_SLACK: f64 = 1e-9;

/// Portfolio variance (percent²) for given weights, securities and
/// correlations: Σ wᵢ²σᵢ² + 2 Σ_{i<j} wᵢwⱼρᵢⱼσᵢσⱼ.
pub fn portfolio_variance(
    weights: &WeightVector,
    secs: &[SecurityParams],
    corr: &CorrelationMatrix,
) -> Result<f64> {
    let n = secs.len();
    if weights.len() != n || corr.len() != n {
        return Err(Error::domain(format!(
            "dimension mismatch: {} weights, {} securities, {}x{} correlations",
            weights.len(),
            n,
            corr.len(),
            corr.len()
        )));
    }
    let w = weights.weights();
    let mut var = 0.0;
    for i in 0..n {
        var += w[i] * w[i] * secs[i].sigma() * secs[i].sigma();
        for j in 0..i {
            var += 2.0 * w[i] * w[j] * corr.get(i, j) * secs[i].sigma() * secs[j].sigma();
        }
    }
    if var < -VARIANCE_SLACK {
        return Err(Error::domain(format!(
            "correlation matrix yields negative portfolio variance {var}"
        )));
    }
    Ok(var.max(0.0))
}

/// Portfolio mean, volatility and CV for one weight allocation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PortfolioPoint {
    pub mu: f64,
    pub sigma: f64,
    pub cv: CoefficientOfVariation,
}

/// μ_p = Σ wᵢμᵢ, σ_p from [`portfolio_variance`], CV_p = σ_p/μ_p
/// (undefined at μ_p = 0).
pub fn portfolio_cv(
    weights: &WeightVector,
    secs: &[SecurityParams],
    corr: &CorrelationMatrix,
) -> Result<PortfolioPoint> {
    let sigma = libm::sqrt(portfolio_variance(weights, secs, corr)?);
    let mu = weights
        .weights()
        .iter()
        .zip(secs)
        .map(|(w, s)| w * s.mu())
        .sum::<f64>();
    Ok(PortfolioPoint { mu, sigma, cv: CoefficientOfVariation::from_mu_sigma(mu, sigma) })
}

/// Two-asset portfolio volatility in closed form:
/// √(w₁²σ₁² + (1-w₁)²σ₂² + 2w₁(1-w₁)ρσ₁σ₂).
///
/// `w1` outside [0, 1] denotes a short position in one leg and is
/// accepted as long as it is finite; the grid sweeps in
/// [`two_asset_frontier`] stay long-only.
pub fn two_asset_sigma(
    w1: f64,
    sec1: &SecurityParams,
    sec2: &SecurityParams,
    rho: f64,
) -> Result<f64> {
    if !w1.is_finite() {
        return Err(Error::domain("w1 must be finite"));
    }
    if !(rho.is_finite() && rho.abs() <= 1.0) {
        return Err(Error::domain(format!("correlation must lie in [-1, 1], got {rho}")));
    }
    let w2 = 1.0 - w1;
    let var = w1 * w1 * sec1.sigma() * sec1.sigma()
        + w2 * w2 * sec2.sigma() * sec2.sigma()
        + 2.0 * w1 * w2 * rho * sec1.sigma() * sec2.sigma();
    // At rho = -1 the form is a perfect square; rounding may leave a
    // tiny negative residue at the pinch point.
    Ok(libm::sqrt(var.max(0.0)))
}

/// Weight grid for a frontier sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightGrid {
    /// w₁ = 0, step, 2·step, …, 1, always including both endpoints.
    /// The step must lie in (0, 0.5].
    Uniform { step: f64 },
    /// The conventional 20-node presentation grid: 0.05 spacing with the
    /// 0.05 node dropped and 0.15 kept ([`PAPER_WEIGHT_GRID`]).
    Paper,
}

/// The 20-node presentation grid used by [`WeightGrid::Paper`].
pub const PAPER_WEIGHT_GRID: [f64; 20] = [
    0.00, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45, 0.50, 0.55, 0.60, 0.65, 0.70, 0.75,
    0.80, 0.85, 0.90, 0.95, 1.00,
];

/// One allocation on the frontier with its volatility, expected return,
/// CV and downside probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontierRow {
    pub w1: f64,
    pub w2: f64,
    pub sigma_p: f64,
    pub mu_p: f64,
    pub cv_p: CoefficientOfVariation,
    pub risk: RiskPercent,
}

/// Sweeps the two-asset frontier over a weight grid.
pub fn two_asset_frontier(
    sec1: &SecurityParams,
    sec2: &SecurityParams,
    rho: f64,
    grid: WeightGrid,
) -> Result<Vec<FrontierRow>> {
    let weights: Vec<f64> = match grid {
        WeightGrid::Uniform { step } => {
            if !(step > 0.0 && step <= 0.5) {
                return Err(Error::domain(format!("w_step must be in (0, 0.5], got {step}")));
            }
            let mut ws = Vec::new();
            let mut i = 0u32;
            loop {
                let w = i as f64 * step;
                if w >= 1.0 - 1e-12 {
                    break;
                }
                ws.push(w);
                i += 1;
            }
            ws.push(1.0);
            ws
        }
        WeightGrid::Paper => PAPER_WEIGHT_GRID.to_vec(),
    };
    weights.into_iter().map(|w1| frontier_row(w1, sec1, sec2, rho)).collect()
}

fn frontier_row(
    w1: f64,
    sec1: &SecurityParams,
    sec2: &SecurityParams,
    rho: f64,
) -> Result<FrontierRow> {
    let w2 = 1.0 - w1;
    let sigma_p = two_asset_sigma(w1, sec1, sec2, rho)?;
    let mu_p = w1 * sec1.mu() + w2 * sec2.mu();
    let cv_p = CoefficientOfVariation::from_mu_sigma(mu_p, sigma_p);
    let risk = if cv_p.is_defined() {
        risk_probability(cv_p)?
    } else {
        // μ_p = 0: fall back to the distributional limit (50% for any
        // positive σ_p).
        risk_from_mu_sigma(mu_p, sigma_p)?
    };
    Ok(FrontierRow { w1, w2, sigma_p, mu_p, cv_p, risk })
}

/// Which column to minimise when picking a row off a frontier.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinCriterion {
    MinSigma,
    MinCv,
    MinRisk,
}

/// The frontier row minimising the criterion; ties break toward the
/// smallest w₁. Rows with an undefined CV never win `MinCv`.
pub fn min_risk_row(frontier: &[FrontierRow], criterion: MinCriterion) -> Result<&FrontierRow> {
    if frontier.is_empty() {
        return Err(Error::domain("frontier is empty"));
    }
    let key = |row: &FrontierRow| match criterion {
        MinCriterion::MinSigma => row.sigma_p,
        MinCriterion::MinCv => row.cv_p.value().unwrap_or(f64::INFINITY),
        MinCriterion::MinRisk => row.risk.value(),
    };
    let mut best = &frontier[0];
    for row in &frontier[1..] {
        let (k, b) = (key(row), key(best));
        if k < b || (k == b && row.w1 < best.w1) {
            best = row;
        }
    }
    Ok(best)
}

/// Expected return, risk, and the marginal risk per unit of extra
/// expected return relative to the previous row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TradeoffRow {
    pub mu_p: f64,
    pub risk: RiskPercent,
    /// Δrisk/Δμ_p against the preceding row; 0 for the first row.
    pub marginal_risk_per_unit_return: f64,
}

/// Annotates a frontier (sorted by strictly increasing μ_p) with the
/// incremental risk cost of each step up in expected return.
pub fn risk_return_tradeoff_report(frontier: &[FrontierRow]) -> Result<Vec<TradeoffRow>> {
    if frontier.len() < 2 {
        return Err(Error::InsufficientData { needed: 2, got: frontier.len() });
    }
    for w in frontier.windows(2) {
        if !(w[1].mu_p > w[0].mu_p) {
            return Err(Error::domain(format!(
                "frontier must be sorted by strictly increasing mu_p; {} does not exceed {}",
                w[1].mu_p, w[0].mu_p
            )));
        }
    }
    let mut out = Vec::with_capacity(frontier.len());
    out.push(TradeoffRow {
        mu_p: frontier[0].mu_p,
        risk: frontier[0].risk,
        marginal_risk_per_unit_return: 0.0,
    });
    for w in frontier.windows(2) {
        out.push(TradeoffRow {
            mu_p: w[1].mu_p,
            risk: w[1].risk,
            marginal_risk_per_unit_return: (w[1].risk.value() - w[0].risk.value())
                / (w[1].mu_p - w[0].mu_p),
        });
    }
    Ok(out)
}
