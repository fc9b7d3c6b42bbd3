//! Loading, adjusting and completeness-filtering of monthly price
//! tables.
//!
//! The on-disk format is a long (tidy) CSV with header
//! `id,year,month,close[,factor]`, one row per security-month. `factor`
//! is the cumulative adjustment divisor for splits, repurchases and the
//! like; when the column (or an individual value) is absent it defaults
//! to 1. Adjusted closes are `close / factor` — note that vendors
//! disagree on whether such factors multiply or divide, so exports with
//! the opposite convention must be inverted before loading.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use cvrisk_core::returns::{PricePoint, PriceSeries, YearMonth};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("{path}: header must be `id,year,month,close` or `id,year,month,close,factor`, got `{got}`")]
    Header { path: String, got: String },
    #[error("{path}:{line}: {message}")]
    Parse { path: String, line: u64, message: String },
    #[error("{path}: duplicate observation for ({id}, {year}, {month})")]
    Duplicate { path: String, id: String, year: i32, month: u32 },
}

/// One validated row of the long CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct RawPriceRow {
    pub id: String,
    pub year: i32,
    pub month: u32,
    pub close: f64,
    pub factor: f64,
}

/// All rows of a loaded file, in file order.
#[derive(Debug, Clone, PartialEq)]
pub struct RawPriceTable {
    rows: Vec<RawPriceRow>,
}

impl RawPriceTable {
    pub fn rows(&self) -> &[RawPriceRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Inclusive month range an analysis runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnalysisWindow {
    start: YearMonth,
    end: YearMonth,
}

impl AnalysisWindow {
    pub fn new(start: YearMonth, end: YearMonth) -> Result<Self, String> {
        if start > end {
            return Err(format!("window start {start} is after end {end}"));
        }
        Ok(AnalysisWindow { start, end })
    }

    pub fn start(&self) -> YearMonth {
        self.start
    }

    pub fn end(&self) -> YearMonth {
        self.end
    }

    /// Number of calendar months in the window, inclusive.
    pub fn months(&self) -> usize {
        (self.end.index() - self.start.index() + 1) as usize
    }

    pub fn contains(&self, ym: YearMonth) -> bool {
        self.start <= ym && ym <= self.end
    }

    pub fn iter_months(&self) -> impl Iterator<Item = YearMonth> {
        let mut next = Some(self.start);
        let end = self.end;
        std::iter::from_fn(move || {
            let current = next?;
            next = if current < end { Some(current.next()) } else { None };
            Some(current)
        })
    }

    /// How many Decembers fall inside the window.
    pub fn decembers(&self) -> usize {
        self.iter_months().filter(|ym| ym.month() == 12).count()
    }
}

impl std::fmt::Display for AnalysisWindow {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.start, self.end)
    }
}

/// Parses `YYYY-MM:YYYY-MM`.
pub fn parse_window(s: &str) -> Result<AnalysisWindow, String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("window must be YYYY-MM:YYYY-MM, got `{s}`"))?;
    AnalysisWindow::new(parse_year_month(a)?, parse_year_month(b)?)
}

fn parse_year_month(s: &str) -> Result<YearMonth, String> {
    let (y, m) = s
        .split_once('-')
        .ok_or_else(|| format!("month must be YYYY-MM, got `{s}`"))?;
    let year: i32 = y.parse().map_err(|_| format!("bad year in `{s}`"))?;
    let month: u32 = m.parse().map_err(|_| format!("bad month in `{s}`"))?;
    YearMonth::new(year, month).map_err(|e| e.to_string())
}

/// Loads and validates a long CSV price table.
///
/// Rejects malformed rows (with their line number), duplicate
/// (id, year, month) keys and nonpositive prices or factors.
pub fn load_price_table(path: &Path) -> Result<RawPriceTable, IngestError> {
    let display = path.display().to_string();
    let file = File::open(path).map_err(|source| IngestError::Io {
        path: display.clone(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(file);

    let headers = reader
        .headers()
        .map_err(|e| csv_error(&display, e))?
        .clone();
    let fields: Vec<&str> = headers.iter().collect();
    let has_factor = match fields.as_slice() {
        ["id", "year", "month", "close"] => false,
        ["id", "year", "month", "close", "factor"] => true,
        _ => {
            return Err(IngestError::Header {
                path: display,
                got: fields.join(","),
            })
        }
    };

    let mut rows = Vec::new();
    let mut seen: HashSet<(String, i32, u32)> = HashSet::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(&display, e))?;
        let line = record.position().map_or(0, |p| p.line());
        let parse = |message: String| IngestError::Parse {
            path: display.clone(),
            line,
            message,
        };
        let expected = if has_factor { 5 } else { 4 };
        if record.len() != expected {
            return Err(parse(format!("expected {expected} fields, got {}", record.len())));
        }
        let id = record[0].to_string();
        if id.is_empty() {
            return Err(parse("empty id".into()));
        }
        let year: i32 = record[1]
            .parse()
            .map_err(|_| parse(format!("bad year `{}`", &record[1])))?;
        let month: u32 = record[2]
            .parse()
            .map_err(|_| parse(format!("bad month `{}`", &record[2])))?;
        if !(1..=12).contains(&month) {
            return Err(parse(format!("month must be 1..=12, got {month}")));
        }
        let close: f64 = record[3]
            .parse()
            .map_err(|_| parse(format!("bad close `{}`", &record[3])))?;
        if !(close.is_finite() && close > 0.0) {
            return Err(parse(format!("close must be positive, got {close}")));
        }
        let factor = if has_factor && !record[4].is_empty() {
            let f: f64 = record[4]
                .parse()
                .map_err(|_| parse(format!("bad factor `{}`", &record[4])))?;
            if !(f.is_finite() && f > 0.0) {
                return Err(parse(format!("factor must be positive, got {f}")));
            }
            f
        } else {
            1.0
        };
        if !seen.insert((id.clone(), year, month)) {
            return Err(IngestError::Duplicate {
                path: display,
                id,
                year,
                month,
            });
        }
        rows.push(RawPriceRow {
            id,
            year,
            month,
            close,
            factor,
        });
    }
    Ok(RawPriceTable { rows })
}

fn csv_error(path: &str, e: csv::Error) -> IngestError {
    let line = match e.position() {
        Some(p) => p.line(),
        None => 0,
    };
    IngestError::Parse {
        path: path.to_string(),
        line,
        message: e.to_string(),
    }
}

/// Applies the cumulative adjustment (`close / factor`) and groups rows
/// into per-security series sorted by month.
pub fn adjust_prices(table: &RawPriceTable) -> BTreeMap<String, PriceSeries> {
    let mut grouped: BTreeMap<String, Vec<PricePoint>> = BTreeMap::new();
    for row in table.rows() {
        let ym = YearMonth::new(row.year, row.month).expect("validated at load");
        grouped.entry(row.id.clone()).or_default().push(PricePoint {
            ym,
            close: row.close / row.factor,
        });
    }
    grouped
        .into_iter()
        .map(|(id, mut points)| {
            points.sort_by_key(|p| p.ym);
            let series = PriceSeries::new(id.clone(), points)
                .expect("load guarantees positive closes and unique months");
            (id, series)
        })
        .collect()
}

/// A security rejected by the completeness filter, with every missing
/// month inside the window.
#[derive(Debug, Clone, PartialEq)]
pub struct DroppedSecurity {
    pub id: String,
    pub missing: Vec<YearMonth>,
}

/// Keeps only securities with an observation for every month of the
/// window (trimmed to the window); everything else lands in the dropped
/// report with its missing months. Never interpolates.
pub fn filter_complete(
    series: BTreeMap<String, PriceSeries>,
    window: &AnalysisWindow,
) -> (BTreeMap<String, PriceSeries>, Vec<DroppedSecurity>) {
    let mut kept = BTreeMap::new();
    let mut dropped = Vec::new();
    for (id, s) in series {
        let in_window: Vec<PricePoint> =
            s.points().iter().copied().filter(|p| window.contains(p.ym)).collect();
        let present: HashSet<YearMonth> = in_window.iter().map(|p| p.ym).collect();
        let missing: Vec<YearMonth> =
            window.iter_months().filter(|ym| !present.contains(ym)).collect();
        if missing.is_empty() {
            let trimmed = PriceSeries::new(id.clone(), in_window)
                .expect("subset of a valid series stays valid");
            kept.insert(id, trimmed);
        } else {
            dropped.push(DroppedSecurity { id, missing });
        }
    }
    (kept, dropped)
}

/// Writes series back out as long CSV (no factor column: the prices are
/// already adjusted). Floats are written with enough digits to
/// round-trip exactly.
pub fn write_long_csv<'a, W, I>(series: I, mut out: W) -> io::Result<()>
where
    W: Write,
    I: IntoIterator<Item = &'a PriceSeries>,
{
    let mut buf = String::from("id,year,month,close\n");
    for s in series {
        for p in s.points() {
            writeln!(buf, "{},{},{},{}", s.id(), p.ym.year(), p.ym.month(), p.close)
                .expect("writing to String cannot fail");
        }
    }
    out.write_all(buf.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_arithmetic() {
        let w = parse_window("2008-01:2018-12").unwrap();
        assert_eq!(w.months(), 132);
        assert_eq!(w.decembers(), 11);
        assert!(w.contains(YearMonth::new(2010, 6).unwrap()));
        assert!(!w.contains(YearMonth::new(2019, 1).unwrap()));
        assert_eq!(w.iter_months().count(), 132);
    }

    #[test]
    fn window_rejects_reversed_range() {
        assert!(parse_window("2018-01:2008-12").is_err());
        assert!(parse_window("2018-13:2019-01").is_err());
        assert!(parse_window("2018-01").is_err());
    }

    #[test]
    fn single_month_window() {
        let w = parse_window("2020-05:2020-05").unwrap();
        assert_eq!(w.months(), 1);
        assert_eq!(w.iter_months().count(), 1);
    }
}
