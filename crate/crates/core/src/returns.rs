//! Return series derived from monthly price histories and their
//! summary statistics.
//!
//! Two return definitions are supported. The *monthly annual* return is
//! the percent change from a month's close to the close of the same
//! calendar month one year later, computed for every month in the
//! window, so intra-year swings show up in the dispersion. The
//! *end-of-year* return uses only December-to-December closes and is
//! blind to everything in between; the two can disagree badly on the
//! same history, which is the point of computing both.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::risk::{risk_from_mu_sigma, CoefficientOfVariation, RiskPercent};

/// A calendar month, ordered chronologically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct YearMonth {
    year: i32,
    month: u32,
}

impl YearMonth {
    pub fn new(year: i32, month: u32) -> Result<Self> {
        if !(1..=12).contains(&month) {
            return Err(Error::domain(alloc::format!("month must be 1..=12, got {month}")));
        }
        Ok(YearMonth { year, month })
    }

    pub fn year(self) -> i32 {
        self.year
    }

    pub fn month(self) -> u32 {
        self.month
    }

    /// Months since year 0, for gap arithmetic.
    pub fn index(self) -> i64 {
        self.year as i64 * 12 + (self.month as i64 - 1)
    }

    /// The following calendar month.
    pub fn next(self) -> Self {
        if self.month == 12 {
            YearMonth { year: self.year + 1, month: 1 }
        } else {
            YearMonth { year: self.year, month: self.month + 1 }
        }
    }
}

impl core::fmt::Display for YearMonth {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

/// One monthly closing price.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PricePoint {
    pub ym: YearMonth,
    pub close: f64,
}

/// Month-indexed closing prices for one security, strictly increasing in
/// time with positive closes.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceSeries {
    id: String,
    points: Vec<PricePoint>,
}

impl PriceSeries {
    pub fn new(id: impl Into<String>, points: Vec<PricePoint>) -> Result<Self> {
        let id = id.into();
        for (i, p) in points.iter().enumerate() {
            if !(p.close.is_finite() && p.close > 0.0) {
                return Err(Error::domain(alloc::format!(
                    "close for {id} at {} must be positive, got {}",
                    p.ym, p.close
                )));
            }
            if i > 0 && points[i - 1].ym >= p.ym {
                return Err(Error::domain(alloc::format!(
                    "observations for {id} must be strictly increasing in month; \
                     {} does not follow {}",
                    p.ym,
                    points[i - 1].ym
                )));
            }
        }
        Ok(PriceSeries { id, points })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn points(&self) -> &[PricePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// How a return series was derived from prices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReturnMethod {
    MonthlyAnnual,
    EndOfYear,
}

impl core::fmt::Display for ReturnMethod {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ReturnMethod::MonthlyAnnual => f.write_str("monthly_annual"),
            ReturnMethod::EndOfYear => f.write_str("end_of_year"),
        }
    }
}

/// One percent return, stamped with the month it lands on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReturnPoint {
    pub ym: YearMonth,
    pub percent: f64,
}

/// Ordered percent returns for one security under one method.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnSeries {
    method: ReturnMethod,
    points: Vec<ReturnPoint>,
}

impl ReturnSeries {
    pub fn new(method: ReturnMethod, points: Vec<ReturnPoint>) -> Result<Self> {
        for w in points.windows(2) {
            if w[0].ym >= w[1].ym {
                return Err(Error::domain(alloc::format!(
                    "returns must be strictly increasing in month; {} does not follow {}",
                    w[1].ym, w[0].ym
                )));
            }
        }
        Ok(ReturnSeries { method, points })
    }

    pub fn method(&self) -> ReturnMethod {
        self.method
    }

    pub fn points(&self) -> &[ReturnPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.percent)
    }
}

/// Year-over-year percent returns, one per month.
///
/// Requires a gap-free window of at least 13 observations; a gap-free
/// N-month series yields exactly N - 12 returns. Any missing calendar
/// month aborts with an error naming the first month absent, rather
/// than silently pairing misaligned closes.
pub fn monthly_annual_returns(prices: &PriceSeries) -> Result<ReturnSeries> {
    let pts = prices.points();
    if pts.len() < 13 {
        return Err(Error::InsufficientData { needed: 13, got: pts.len() });
    }
    for w in pts.windows(2) {
        if w[1].ym.index() != w[0].ym.index() + 1 {
            let missing = w[0].ym.next();
            return Err(Error::MonthGap { year: missing.year(), month: missing.month() });
        }
    }
    let points = pts
        .windows(13)
        .map(|w| {
            let base = w[0].close;
            let now = w[12].close;
            ReturnPoint { ym: w[12].ym, percent: (now - base) / base * 100.0 }
        })
        .collect();
    ReturnSeries::new(ReturnMethod::MonthlyAnnual, points)
}

/// Percent returns between consecutive December closes.
///
/// Needs at least two Decembers; consecutive Decembers must be one year
/// apart or the missing one is reported as a gap.
pub fn end_of_year_returns(prices: &PriceSeries) -> Result<ReturnSeries> {
    let decembers: Vec<&PricePoint> =
        prices.points().iter().filter(|p| p.ym.month() == 12).collect();
    if decembers.len() < 2 {
        return Err(Error::InsufficientData { needed: 2, got: decembers.len() });
    }
    let mut points = Vec::with_capacity(decembers.len() - 1);
    for w in decembers.windows(2) {
        if w[1].ym.year() != w[0].ym.year() + 1 {
            return Err(Error::MonthGap { year: w[0].ym.year() + 1, month: 12 });
        }
        points.push(ReturnPoint {
            ym: w[1].ym,
            percent: (w[1].close - w[0].close) / w[0].close * 100.0,
        });
    }
    ReturnSeries::new(ReturnMethod::EndOfYear, points)
}

/// Denominator convention for the standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StdMode {
    /// n - 1 denominator (default for observed return samples).
    Sample,
    /// n denominator.
    Population,
}

/// Summary statistics of a return series: mean, dispersion, their
/// ratio, and the implied downside probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReturnStats {
    pub mu: f64,
    pub sigma: f64,
    pub cv: CoefficientOfVariation,
    pub risk: RiskPercent,
    pub n: usize,
}

/// Mean, standard deviation, CV and risk of a return series.
pub fn return_stats(returns: &ReturnSeries, std_mode: StdMode) -> Result<ReturnStats> {
    let n = returns.len();
    if n < 2 {
        return Err(Error::InsufficientData { needed: 2, got: n });
    }
    let mu = returns.values().sum::<f64>() / n as f64;
    let ss = returns.values().map(|r| (r - mu) * (r - mu)).sum::<f64>();
    let denom = match std_mode {
        StdMode::Sample => (n - 1) as f64,
        StdMode::Population => n as f64,
    };
    let sigma = libm::sqrt(ss / denom);
    let cv = CoefficientOfVariation::from_mu_sigma(mu, sigma);
    let risk = risk_from_mu_sigma(mu, sigma)?;
    Ok(ReturnStats { mu, sigma, cv, risk, n })
}

/// CV band a security falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tier {
    /// 0 <= CV <= 1: dispersion well inside the mean.
    Strong,
    /// 1 < CV <= 2.
    Moderate,
    /// CV > 2 (or undefined, the zero-mean limit).
    Elevated,
    /// Negative mean return, whatever the CV.
    NegativeMean,
}

impl core::fmt::Display for Tier {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Tier::Strong => f.write_str("strong"),
            Tier::Moderate => f.write_str("moderate"),
            Tier::Elevated => f.write_str("elevated"),
            Tier::NegativeMean => f.write_str("negative_mean"),
        }
    }
}

/// Classification of a security's return behaviour.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerformanceTier {
    pub tier: Tier,
    /// Returns both exceed 100% and trend over time — the bubble
    /// signature, as opposed to high-but-random dispersion.
    pub bubble_flag: bool,
    pub max_return: f64,
    /// OLS slope of return against observation index, percent per month.
    pub trend_slope: f64,
}

/// Default trend threshold for the bubble flag, in percentage points of
/// annual return per month.
pub const DEFAULT_BUBBLE_SLOPE_THRESHOLD: f64 = 1.0;

/// Assigns the CV band and bubble flag for one security.
///
/// `stats` must come from `returns`. The bands: negative mean first,
/// then CV <= 1 strong, CV <= 2 moderate, above (or undefined CV, the
/// zero-mean limit) elevated. The bubble flag needs both a return above
/// 100% and |trend slope| above `slope_threshold`.
pub fn classify_performance(
    stats: &ReturnStats,
    returns: &ReturnSeries,
    slope_threshold: f64,
) -> PerformanceTier {
    let max_return = returns.values().fold(f64::NEG_INFINITY, f64::max);
    let max_return = if max_return.is_finite() { max_return } else { 0.0 };
    let trend_slope = ols_slope(returns);
    let tier = if stats.mu < 0.0 {
        Tier::NegativeMean
    } else {
        match stats.cv.value() {
            Some(cv) if cv <= 1.0 => Tier::Strong,
            Some(cv) if cv <= 2.0 => Tier::Moderate,
            _ => Tier::Elevated,
        }
    };
    PerformanceTier {
        tier,
        bubble_flag: max_return > 100.0 && trend_slope.abs() > slope_threshold,
        max_return,
        trend_slope,
    }
}

/// Least-squares slope of return versus observation index; 0 for fewer
/// than two points.
fn ols_slope(returns: &ReturnSeries) -> f64 {
    let n = returns.len();
    if n < 2 {
        return 0.0;
    }
    let t_mean = (n - 1) as f64 / 2.0;
    let r_mean = returns.values().sum::<f64>() / n as f64;
    let mut cov = 0.0;
    let mut var = 0.0;
    for (i, r) in returns.values().enumerate() {
        let dt = i as f64 - t_mean;
        cov += dt * (r - r_mean);
        var += dt * dt;
    }
    cov / var
}

/// Counts of (month, return) observations over a rectangular binning.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid {
    time_bins: usize,
    return_bins: usize,
    counts: Vec<u64>,
    total_in_range: u64,
    time_span: Option<(YearMonth, YearMonth)>,
    return_range: (f64, f64),
}

impl DensityGrid {
    pub fn time_bins(&self) -> usize {
        self.time_bins
    }

    pub fn return_bins(&self) -> usize {
        self.return_bins
    }

    /// Count in one cell; `t` indexes time bins, `r` return bins.
    pub fn count(&self, t: usize, r: usize) -> u64 {
        self.counts[t * self.return_bins + r]
    }

    /// Row-major counts, time bin varying slowest.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Total observations that landed inside the return range.
    pub fn total_in_range(&self) -> u64 {
        self.total_in_range
    }

    /// First and last month observed, if any observations existed.
    pub fn time_span(&self) -> Option<(YearMonth, YearMonth)> {
        self.time_span
    }

    pub fn return_range(&self) -> (f64, f64) {
        self.return_range
    }
}

/// Bins every observation of every series into a (month, return) grid.
///
/// Returns outside `return_range` are dropped (the range is inclusive at
/// both ends, with the top edge folded into the last bin), so the grid
/// total equals the in-range observation count. Empty input produces an
/// all-zero grid.
pub fn return_density_grid(
    all_returns: &[ReturnSeries],
    time_bins: usize,
    return_bins: usize,
    return_range: (f64, f64),
) -> Result<DensityGrid> {
    let (lo, hi) = return_range;
    if time_bins == 0 || return_bins == 0 {
        return Err(Error::domain("bin counts must be at least 1"));
    }
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::domain(alloc::format!(
            "return range must satisfy lo < hi, got [{lo}, {hi}]"
        )));
    }
    let mut grid = DensityGrid {
        time_bins,
        return_bins,
        counts: alloc::vec![0u64; time_bins * return_bins],
        total_in_range: 0,
        time_span: None,
        return_range,
    };
    let mut first: Option<YearMonth> = None;
    let mut last: Option<YearMonth> = None;
    for series in all_returns {
        for p in series.points() {
            first = Some(first.map_or(p.ym, |f| f.min(p.ym)));
            last = Some(last.map_or(p.ym, |l| l.max(p.ym)));
        }
    }
    let (Some(first), Some(last)) = (first, last) else {
        return Ok(grid);
    };
    grid.time_span = Some((first, last));
    let span = (last.index() - first.index() + 1) as u128;
    for series in all_returns {
        for p in series.points() {
            if !(p.percent >= lo && p.percent <= hi) {
                continue;
            }
            let offset = (p.ym.index() - first.index()) as u128;
            let t = (offset * time_bins as u128 / span) as usize;
            let frac = (p.percent - lo) / (hi - lo);
            let r = ((frac * return_bins as f64) as usize).min(return_bins - 1);
            grid.counts[t * return_bins + r] += 1;
            grid.total_in_range += 1;
        }
    }
    Ok(grid)
}
