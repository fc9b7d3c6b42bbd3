//! `cvrisk` — coefficient-of-variation risk reports.
//!
//! Exit codes: 0 success (empty results still succeed, with a warning
//! on stderr), 1 usage error, 2 input/parse error, 3 numeric error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cvrisk::error::CliError;
use cvrisk::ingest::{parse_window, AnalysisWindow};
use cvrisk::report::{
    run_analyze, run_density, run_frontier, run_riskcurve, AnalyzeConfig, DensityConfig,
    FrontierConfig, OutputFormat, OutputOptions, RiskCurveConfig,
};
use cvrisk_core::frontier::WeightGrid;
use cvrisk_core::returns::{StdMode, DEFAULT_BUBBLE_SLOPE_THRESHOLD};

/// Directory joined to relative `--out` paths when set.
const OUT_DIR_ENV: &str = "CVRISK_OUT_DIR";

#[derive(Parser)]
#[command(
    name = "cvrisk",
    version,
    about = "Security risk reports from the coefficient of variation of returns"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Per-security return statistics (μ, σ, CV, risk, tier) under both
    /// the monthly-annual and end-of-year return methods
    Analyze(AnalyzeArgs),
    /// Two-asset frontier sweep annotated with CV and risk per row
    Frontier(FrontierArgs),
    /// Risk-vs-volatility curves for a list of mean returns
    Riskcurve(RiskCurveArgs),
    /// Month × return density grid for the low-CV cohort
    Density(DensityArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum StdArg {
    /// n - 1 denominator
    Sample,
    /// n denominator
    Population,
}

impl From<StdArg> for StdMode {
    fn from(s: StdArg) -> Self {
        match s {
            StdArg::Sample => StdMode::Sample,
            StdArg::Population => StdMode::Population,
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Decimal places for numeric columns (half-up, applied only at
    /// emission)
    #[arg(long, default_value_t = 2)]
    decimals: u32,
    /// Output file; stdout when omitted. A relative path is joined to
    /// $CVRISK_OUT_DIR when that variable is set.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl OutputArgs {
    fn options(&self) -> OutputOptions {
        OutputOptions {
            format: match self.format {
                FormatArg::Csv => OutputFormat::Csv,
                FormatArg::Json => OutputFormat::Json,
            },
            decimals: self.decimals,
        }
    }
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Long CSV price table (header: id,year,month,close[,factor])
    #[arg(long)]
    input: PathBuf,
    /// Analysis window, YYYY-MM:YYYY-MM inclusive
    #[arg(long, value_parser = parse_window)]
    window: AnalysisWindow,
    /// Standard deviation denominator
    #[arg(long, value_enum, default_value = "sample")]
    std: StdArg,
    /// Bubble trend threshold, percentage points of annual return per month
    #[arg(long, default_value_t = DEFAULT_BUBBLE_SLOPE_THRESHOLD, allow_negative_numbers = true)]
    slope_threshold: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct FrontierArgs {
    /// Expected return of security 1, percent
    #[arg(long, allow_negative_numbers = true)]
    mu1: f64,
    /// Volatility of security 1, percent
    #[arg(long)]
    sigma1: f64,
    /// Expected return of security 2, percent
    #[arg(long, allow_negative_numbers = true)]
    mu2: f64,
    /// Volatility of security 2, percent
    #[arg(long)]
    sigma2: f64,
    /// Correlation of returns between the two securities, in [-1, 1]
    #[arg(long, allow_negative_numbers = true)]
    rho: f64,
    /// Uniform weight step in (0, 0.5]
    #[arg(long)]
    w_step: Option<f64>,
    /// Use the 20-node presentation grid (0.05 spacing with the 0.05
    /// node dropped and 0.15 kept)
    #[arg(long)]
    paper_grid: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct RiskCurveArgs {
    /// Comma-separated mean returns, percent (each nonzero)
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
    mu_list: Vec<f64>,
    /// Lower end of the volatility grid
    #[arg(long, default_value_t = 0.0)]
    sigma_min: f64,
    /// Upper end of the volatility grid
    #[arg(long)]
    sigma_max: f64,
    /// Number of grid points (endpoints included)
    #[arg(long, default_value_t = 101)]
    points: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct DensityArgs {
    /// Long CSV price table (header: id,year,month,close[,factor])
    #[arg(long)]
    input: PathBuf,
    /// Analysis window, YYYY-MM:YYYY-MM inclusive
    #[arg(long, value_parser = parse_window)]
    window: AnalysisWindow,
    /// Standard deviation denominator
    #[arg(long, value_enum, default_value = "sample")]
    std: StdArg,
    /// Keep securities with monthly-annual CV in [0, ceiling]
    #[arg(long, default_value_t = 1.0)]
    cv_ceiling: f64,
    /// Number of time bins
    #[arg(long, default_value_t = 24)]
    time_bins: usize,
    /// Number of return bins
    #[arg(long, default_value_t = 40)]
    return_bins: usize,
    /// Return range `lo,hi` in percent; observations outside are dropped
    #[arg(long, value_parser = parse_range, default_value = "-100,150", allow_hyphen_values = true)]
    return_range: (f64, f64),
    #[command(flatten)]
    output: OutputArgs,
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s
        .split_once(',')
        .ok_or_else(|| format!("range must be lo,hi, got `{s}`"))?;
    let lo: f64 = lo.trim().parse().map_err(|_| format!("bad range bound `{lo}`"))?;
    let hi: f64 = hi.trim().parse().map_err(|_| format!("bad range bound `{hi}`"))?;
    Ok((lo, hi))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    ExitCode::SUCCESS
                }
                _ => {
                    eprint!("{e}");
                    ExitCode::from(1)
                }
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (table, output) = match cli.command {
        Command::Analyze(args) => {
            let config = AnalyzeConfig {
                input: args.input,
                window: args.window,
                std_mode: args.std.into(),
                slope_threshold: args.slope_threshold,
            };
            (run_analyze(&config)?, args.output)
        }
        Command::Frontier(args) => {
            let grid = match (args.w_step, args.paper_grid) {
                (Some(step), false) => WeightGrid::Uniform { step },
                (None, true) => WeightGrid::Paper,
                (Some(_), true) => {
                    return Err(CliError::Usage(
                        "--w-step and --paper-grid are mutually exclusive".into(),
                    ))
                }
                (None, false) => {
                    return Err(CliError::Usage(
                        "one of --w-step or --paper-grid is required".into(),
                    ))
                }
            };
            let config = FrontierConfig {
                mu1: args.mu1,
                sigma1: args.sigma1,
                mu2: args.mu2,
                sigma2: args.sigma2,
                rho: args.rho,
                grid,
            };
            (run_frontier(&config)?, args.output)
        }
        Command::Riskcurve(args) => {
            let config = RiskCurveConfig {
                mu_list: args.mu_list,
                sigma_min: args.sigma_min,
                sigma_max: args.sigma_max,
                points: args.points,
            };
            (run_riskcurve(&config)?, args.output)
        }
        Command::Density(args) => {
            let config = DensityConfig {
                input: args.input,
                window: args.window,
                std_mode: args.std.into(),
                cv_ceiling: args.cv_ceiling,
                time_bins: args.time_bins,
                return_bins: args.return_bins,
                return_range: args.return_range,
            };
            (run_density(&config)?, args.output)
        }
    };
    emit(&table.render(&output.options()), output.out)
}

fn emit(rendered: &str, out: Option<PathBuf>) -> Result<(), CliError> {
    match resolve_out(out) {
        None => {
            print!("{rendered}");
            Ok(())
        }
        Some(path) => std::fs::write(&path, rendered)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display()))),
    }
}

fn resolve_out(out: Option<PathBuf>) -> Option<PathBuf> {
    let out = out?;
    if out.is_relative() {
        if let Ok(dir) = std::env::var(OUT_DIR_ENV) {
            if !dir.is_empty() {
                return Some(PathBuf::from(dir).join(out));
            }
        }
    }
    Some(out)
}
