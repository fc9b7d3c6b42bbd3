//! Report generation: the four commands and their CSV/JSON emission.
//!
//! Every command produces a [`Table`]; rendering is the single place
//! rounding happens (half-up, at the configured number of decimals) —
//! the pipelines behind the tables run at full precision. CSV and JSON
//! carry the same snake_case column names, one JSON object per row, and
//! an undefined CV serializes as an empty CSV field / JSON null.

use std::collections::BTreeMap;
use std::path::PathBuf;

use cvrisk_core::frontier::{two_asset_frontier, FrontierRow, SecurityParams, WeightGrid};
use cvrisk_core::returns::{
    classify_performance, end_of_year_returns, monthly_annual_returns, return_density_grid,
    return_stats, PriceSeries, ReturnSeries, StdMode,
};
use cvrisk_core::risk::risk_curve;
use cvrisk_core::round_half_up;

use crate::error::{core_input, core_usage, CliError};
use crate::ingest::{adjust_prices, filter_complete, load_price_table, AnalysisWindow};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone)]
pub struct OutputOptions {
    pub format: OutputFormat,
    /// Decimal places for float columns, applied half-up at emission.
    pub decimals: u32,
}

/// One table cell; floats may be absent (undefined CV).
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Str(String),
    UInt(u64),
    Float(f64),
    OptFloat(Option<f64>),
    Bool(bool),
}

/// A rendered-agnostic report: headers plus homogeneous rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn render(&self, opts: &OutputOptions) -> String {
        match opts.format {
            OutputFormat::Csv => self.render_csv(opts.decimals),
            OutputFormat::Json => self.render_json(opts.decimals),
        }
    }

    fn render_csv(&self, decimals: u32) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.headers).expect("in-memory write");
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(|c| csv_field(c, decimals)).collect();
            w.write_record(&fields).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf8 output")
    }

    fn render_json(&self, decimals: u32) -> String {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = serde_json::Map::new();
                for (h, c) in self.headers.iter().zip(row) {
                    obj.insert((*h).to_string(), json_value(c, decimals));
                }
                serde_json::Value::Object(obj)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&serde_json::Value::Array(rows))
            .expect("serializing plain values cannot fail");
        s.push('\n');
        s
    }
}

fn csv_field(cell: &Cell, decimals: u32) -> String {
    match cell {
        Cell::Str(s) => s.clone(),
        Cell::UInt(u) => u.to_string(),
        Cell::Float(v) => format_decimal(*v, decimals),
        Cell::OptFloat(Some(v)) => format_decimal(*v, decimals),
        Cell::OptFloat(None) => String::new(),
        Cell::Bool(b) => b.to_string(),
    }
}

fn json_value(cell: &Cell, decimals: u32) -> serde_json::Value {
    match cell {
        Cell::Str(s) => serde_json::Value::String(s.clone()),
        Cell::UInt(u) => serde_json::Value::from(*u),
        Cell::Float(v) => json_number(*v, decimals),
        Cell::OptFloat(Some(v)) => json_number(*v, decimals),
        Cell::OptFloat(None) => serde_json::Value::Null,
        Cell::Bool(b) => serde_json::Value::Bool(*b),
    }
}

fn json_number(v: f64, decimals: u32) -> serde_json::Value {
    serde_json::Number::from_f64(round_half_up(v, decimals))
        .map(serde_json::Value::Number)
        .unwrap_or(serde_json::Value::Null)
}

fn format_decimal(v: f64, decimals: u32) -> String {
    format!("{:.*}", decimals as usize, round_half_up(v, decimals))
}

// ---------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct AnalyzeConfig {
    pub input: PathBuf,
    pub window: AnalysisWindow,
    pub std_mode: StdMode,
    pub slope_threshold: f64,
}

/// Per-security statistics under both return methods: one row per kept
/// security per method, ordered by id then method.
pub fn run_analyze(config: &AnalyzeConfig) -> Result<Table, CliError> {
    validate_window_for_stats(&config.window)?;
    let kept = load_kept_series(&config.input, &config.window)?;
    let mut rows = Vec::new();
    for (id, series) in &kept {
        for returns in [
            monthly_annual_returns(series).map_err(core_input)?,
            end_of_year_returns(series).map_err(core_input)?,
        ] {
            let stats = return_stats(&returns, config.std_mode).map_err(core_input)?;
            let tier = classify_performance(&stats, &returns, config.slope_threshold);
            rows.push(vec![
                Cell::Str(id.clone()),
                Cell::Str(returns.method().to_string()),
                Cell::UInt(stats.n as u64),
                Cell::Float(stats.mu),
                Cell::Float(stats.sigma),
                Cell::OptFloat(stats.cv.value()),
                Cell::Float(stats.risk.value()),
                Cell::Str(tier.tier.to_string()),
                Cell::Bool(tier.bubble_flag),
            ]);
        }
    }
    Ok(Table {
        headers: vec!["id", "method", "n", "mu", "sigma", "cv", "risk", "tier", "bubble"],
        rows,
    })
}

/// Both return methods need room to produce at least two returns:
/// 14 months for the monthly-annual route, three Decembers for the
/// end-of-year route.
fn validate_window_for_stats(window: &AnalysisWindow) -> Result<(), CliError> {
    if window.months() < 14 {
        return Err(CliError::Usage(format!(
            "window {window} spans {} months; monthly-annual statistics need at least 14",
            window.months()
        )));
    }
    if window.decembers() < 3 {
        return Err(CliError::Usage(format!(
            "window {window} contains {} Decembers; end-of-year statistics need at least 3",
            window.decembers()
        )));
    }
    Ok(())
}

fn load_kept_series(
    input: &std::path::Path,
    window: &AnalysisWindow,
) -> Result<BTreeMap<String, PriceSeries>, CliError> {
    let table = load_price_table(input)?;
    let series = adjust_prices(&table);
    let (kept, dropped) = filter_complete(series, window);
    for d in &dropped {
        let preview: Vec<String> = d.missing.iter().take(3).map(|m| m.to_string()).collect();
        eprintln!(
            "warning: dropping {}: missing {} month(s) in {} ({}{})",
            d.id,
            d.missing.len(),
            window,
            preview.join(", "),
            if d.missing.len() > 3 { ", ..." } else { "" },
        );
    }
    if kept.is_empty() {
        eprintln!("warning: no security covers the full window {window}; emitting empty table");
    }
    Ok(kept)
}

// ---------------------------------------------------------------------
// frontier
// ---------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct FrontierConfig {
    pub mu1: f64,
    pub sigma1: f64,
    pub mu2: f64,
    pub sigma2: f64,
    pub rho: f64,
    pub grid: WeightGrid,
}

/// Two-asset frontier table: w1, w2, sigma, mu, cv, risk per grid node.
pub fn run_frontier(config: &FrontierConfig) -> Result<Table, CliError> {
    let sec1 = SecurityParams::new(config.mu1, config.sigma1).map_err(core_usage)?;
    let sec2 = SecurityParams::new(config.mu2, config.sigma2).map_err(core_usage)?;
    let rows = two_asset_frontier(&sec1, &sec2, config.rho, config.grid).map_err(core_usage)?;
    Ok(Table {
        headers: vec!["w1", "w2", "sigma", "mu", "cv", "risk"],
        rows: rows.iter().map(frontier_cells).collect(),
    })
}

fn frontier_cells(row: &FrontierRow) -> Vec<Cell> {
    vec![
        Cell::Float(row.w1),
        Cell::Float(row.w2),
        Cell::Float(row.sigma_p),
        Cell::Float(row.mu_p),
        Cell::OptFloat(row.cv_p.value()),
        Cell::Float(row.risk.value()),
    ]
}

// ---------------------------------------------------------------------
// riskcurve
// ---------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct RiskCurveConfig {
    pub mu_list: Vec<f64>,
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub points: usize,
}

/// Plot-ready (mu, sigma, risk) points, one series per requested mean.
pub fn run_riskcurve(config: &RiskCurveConfig) -> Result<Table, CliError> {
    if config.mu_list.is_empty() {
        return Err(CliError::Usage("--mu-list must name at least one mean return".into()));
    }
    if config.mu_list.iter().any(|&mu| mu == 0.0) {
        return Err(CliError::Usage(
            "--mu-list must not contain 0 (risk is 50% at any volatility there)".into(),
        ));
    }
    let mut rows = Vec::new();
    for &mu in &config.mu_list {
        let curve =
            risk_curve(mu, config.sigma_min, config.sigma_max, config.points).map_err(core_usage)?;
        for (sigma, risk) in curve {
            rows.push(vec![Cell::Float(mu), Cell::Float(sigma), Cell::Float(risk.value())]);
        }
    }
    Ok(Table { headers: vec!["mu", "sigma", "risk"], rows })
}

// ---------------------------------------------------------------------
// density
// ---------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct DensityConfig {
    pub input: PathBuf,
    pub window: AnalysisWindow,
    pub std_mode: StdMode,
    /// Keep only securities whose monthly-annual CV lies in [0, ceiling].
    pub cv_ceiling: f64,
    pub time_bins: usize,
    pub return_bins: usize,
    pub return_range: (f64, f64),
}

/// Month × return histogram of the low-CV cohort, every cell emitted.
pub fn run_density(config: &DensityConfig) -> Result<Table, CliError> {
    if config.window.months() < 14 {
        return Err(CliError::Usage(format!(
            "window {} spans {} months; monthly-annual statistics need at least 14",
            config.window,
            config.window.months()
        )));
    }
    let kept = load_kept_series(&config.input, &config.window)?;
    let mut cohort: Vec<ReturnSeries> = Vec::new();
    for series in kept.values() {
        let returns = monthly_annual_returns(series).map_err(core_input)?;
        let stats = return_stats(&returns, config.std_mode).map_err(core_input)?;
        match stats.cv.value() {
            Some(cv) if (0.0..=config.cv_ceiling).contains(&cv) => cohort.push(returns),
            _ => {}
        }
    }
    let grid = return_density_grid(
        &cohort,
        config.time_bins,
        config.return_bins,
        config.return_range,
    )
    .map_err(core_usage)?;
    let mut rows = Vec::with_capacity(grid.time_bins() * grid.return_bins());
    for t in 0..grid.time_bins() {
        for r in 0..grid.return_bins() {
            rows.push(vec![
                Cell::UInt(t as u64),
                Cell::UInt(r as u64),
                Cell::UInt(grid.count(t, r)),
            ]);
        }
    }
    Ok(Table { headers: vec!["time_bin", "return_bin", "count"], rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_rendering_rounds_and_blanks_undefined() {
        let table = Table {
            headers: vec!["a", "b", "c"],
            rows: vec![vec![
                Cell::Float(1.23456),
                Cell::OptFloat(None),
                Cell::Bool(true),
            ]],
        };
        let out = table.render(&OutputOptions { format: OutputFormat::Csv, decimals: 2 });
        assert_eq!(out, "a,b,c\n1.23,,true\n");
    }

    #[test]
    fn json_rendering_uses_null_for_undefined() {
        let table = Table {
            headers: vec!["x", "cv"],
            rows: vec![vec![Cell::Float(0.5), Cell::OptFloat(None)]],
        };
        let out = table.render(&OutputOptions { format: OutputFormat::Json, decimals: 2 });
        let parsed: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(parsed[0]["x"], 0.5);
        assert!(parsed[0]["cv"].is_null());
    }

    #[test]
    fn negative_rounding_in_csv() {
        let table = Table {
            headers: vec!["v"],
            rows: vec![vec![Cell::Float(-0.302479)]],
        };
        let out = table.render(&OutputOptions { format: OutputFormat::Csv, decimals: 2 });
        assert_eq!(out, "v\n-0.30\n");
    }

    #[test]
    fn riskcurve_rejects_zero_mu() {
        let bad = RiskCurveConfig {
            mu_list: vec![5.0, 0.0],
            sigma_min: 0.0,
            sigma_max: 10.0,
            points: 5,
        };
        assert!(matches!(run_riskcurve(&bad), Err(CliError::Usage(_))));
    }

    #[test]
    fn riskcurve_row_cardinality() {
        let cfg = RiskCurveConfig {
            mu_list: vec![5.0, 10.0, 15.0],
            sigma_min: 0.0,
            sigma_max: 30.0,
            points: 4,
        };
        let t = run_riskcurve(&cfg).unwrap();
        assert_eq!(t.rows.len(), 12);
    }
}
