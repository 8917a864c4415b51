//! `trustgauge` — simulate trust-game scenarios, compute trust scores,
//! analyze fair trade, and track score history from the command line.
//!
//! Exit codes: 0 on success, 1 for validation/domain errors, 2 for I/O and
//! format errors. Every failure prints exactly one diagnostic line on
//! stderr.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use chrono::{DateTime, Utc};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use trustgauge::fair_trade::{ExchangeMatrix, FairTradeError, TradeBalance};
use trustgauge::game::ParamError;
use trustgauge::scenario::{regime_of, Regime, Scenario, ScenarioError, Trajectory};
use trustgauge::score::{self, trust_score_at, MetricCategory, ScoreError, ScoreFileError};
use trustgauge::timeseries::{ScoreSeries, SeriesError, DEFAULT_ABRUPT_THRESHOLD, DEFAULT_WINDOW};

#[derive(Parser)]
#[command(
    name = "trustgauge",
    version,
    about = "Quantify trust in AI/ML provider-customer value exchange",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and emit its trajectory table.
    Simulate(SimulateArgs),
    /// Compute the clamped trust score from metric and weight files.
    Score(ScoreArgs),
    /// Build the exchange matrix, its eigensystem, and the fair-trade line.
    Fairtrade(FairtradeArgs),
    /// Summarize the fluctuation of a score history file.
    History(HistoryArgs),
}

#[derive(Args)]
struct OutputArgs {
    /// Write the primary output to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Fractional digits for printed numbers (JSON output always carries
    /// full precision; 17 digits round-trip f64 exactly).
    #[arg(long, default_value_t = 6)]
    precision: usize,
}

#[derive(Args)]
struct SimulateArgs {
    /// Scenario JSON file: {name, initial_value, mode, cycles: [{p,q,K}]}.
    scenario: PathBuf,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    format: TableFormat,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ScoreArgs {
    /// JSON file with a "metrics" array.
    metrics: PathBuf,
    /// JSON file with a "weights" array, index-aligned with the metrics.
    weights: PathBuf,
    /// Append the score record to this JSONL history file.
    #[arg(long)]
    history: Option<PathBuf>,
    /// Timestamp the record explicitly (RFC 3339) instead of using the
    /// current time.
    #[arg(long)]
    timestamp: Option<DateTime<Utc>>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct FairtradeArgs {
    /// Remitted share of the offered value, 0 <= p <= 1.
    #[arg(long, allow_negative_numbers = true)]
    p: f64,
    /// Repaid share of the perceived gain, 0 <= q < 1.
    #[arg(long, allow_negative_numbers = true)]
    q: f64,
    /// Magnification factor, any finite real.
    #[arg(long = "K", allow_negative_numbers = true)]
    k: f64,
    /// Classify a point of the (N, A) plane, written as "N,A".
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    point: Option<Point>,
    /// Relative half-width of the band around the line counted as fair.
    #[arg(long, default_value_t = 1e-6)]
    tolerance: f64,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy)]
struct Point {
    net_gain: f64,
    accumulated: f64,
}

#[derive(Args)]
struct HistoryArgs {
    /// JSONL history file, one score record per line.
    history: PathBuf,
    /// Number of trailing records to summarize.
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    window: usize,
    /// Largest consecutive jump tolerated before the verdict is abrupt.
    #[arg(long, default_value_t = DEFAULT_ABRUPT_THRESHOLD)]
    threshold: f64,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

fn parse_point(text: &str) -> Result<Point, String> {
    let (n, a) = text
        .split_once(',')
        .ok_or_else(|| String::from("expected two comma-separated numbers, e.g. 1,2.6"))?;
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|e| format!("bad coordinate {s:?}: {e}"))
    };
    Ok(Point {
        net_gain: parse(n)?,
        accumulated: parse(a)?,
    })
}

/// An error message plus the documented exit code it maps to.
enum CliError {
    /// Validation or domain failure: exit code 1.
    Domain(String),
    /// I/O or format failure: exit code 2.
    Inout(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Inout(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Domain(m) | CliError::Inout(m) => m,
        }
    }
}

impl From<ParamError> for CliError {
    fn from(e: ParamError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<FairTradeError> for CliError {
    fn from(e: FairTradeError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<ScoreError> for CliError {
    fn from(e: ScoreError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<ScenarioError> for CliError {
    fn from(e: ScenarioError) -> Self {
        match e {
            ScenarioError::Invalid { .. } => CliError::Domain(e.to_string()),
            ScenarioError::Io(_) | ScenarioError::Json(_) => CliError::Inout(e.to_string()),
        }
    }
}

impl From<ScoreFileError> for CliError {
    fn from(e: ScoreFileError) -> Self {
        match e {
            ScoreFileError::Invalid(_) => CliError::Domain(e.to_string()),
            ScoreFileError::Io(_) | ScoreFileError::Json(_) | ScoreFileError::MissingSection(_) => {
                CliError::Inout(e.to_string())
            }
        }
    }
}

impl From<SeriesError> for CliError {
    fn from(e: SeriesError) -> Self {
        match e {
            SeriesError::Io(_) | SeriesError::Parse { .. } => CliError::Inout(e.to_string()),
            SeriesError::NonMonotonicTimestamp { .. }
            | SeriesError::WindowTooSmall(_)
            | SeriesError::InsufficientData { .. } => CliError::Domain(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Inout(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            eprintln!("{}", text.lines().next().unwrap_or("bad arguments"));
            return ExitCode::from(2);
        }
    };

    let result = match cli.command {
        Command::Simulate(args) => cmd_simulate(args),
        Command::Score(args) => cmd_score(args),
        Command::Fairtrade(args) => cmd_fairtrade(args),
        Command::History(args) => cmd_history(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

/// Send the primary output to --out when given (returns true), stdout
/// otherwise.
fn emit(output: &OutputArgs, content: &str) -> Result<bool, CliError> {
    match &output.out {
        Some(path) => {
            std::fs::write(path, content)?;
            Ok(true)
        }
        None => {
            print!("{content}");
            Ok(false)
        }
    }
}

fn fmt_num(x: f64, precision: usize) -> String {
    format!("{x:.precision$}")
}

fn cmd_simulate(args: SimulateArgs) -> Result<(), CliError> {
    let scenario = Scenario::from_path(&args.scenario)?;
    let trajectory = scenario.run();

    let rendered = match args.format {
        TableFormat::Csv => trajectory.to_csv(args.output.precision),
        TableFormat::Json => {
            let mut s = trajectory.to_json();
            s.push('\n');
            s
        }
    };
    let to_file = emit(&args.output, &rendered)?;

    // The summary goes to stdout when the table went to a file; otherwise it
    // moves to stderr so the table on stdout stays machine-parseable.
    let summary = simulate_summary(&scenario, &trajectory, args.output.precision);
    if to_file {
        print!("{summary}");
    } else {
        eprint!("{summary}");
    }
    Ok(())
}

fn simulate_summary(scenario: &Scenario, trajectory: &Trajectory, precision: usize) -> String {
    let cycles = scenario.config().cycles();
    let mut regimes: Vec<Regime> = cycles.iter().map(|c| regime_of(c.magnification())).collect();
    regimes.dedup();
    let regime = if regimes.len() == 1 {
        regimes[0].to_string()
    } else {
        String::from("mixed")
    };

    let mut out = String::new();
    let _ = writeln!(out, "scenario: {}", scenario.name());
    let _ = writeln!(out, "cycles: {}", cycles.len());
    let _ = writeln!(out, "regime: {regime}");
    if let Some((trustor, trustee)) = trajectory.final_gains() {
        let _ = writeln!(out, "final trustor gain: {}", fmt_num(trustor, precision));
        let _ = writeln!(out, "final trustee gain: {}", fmt_num(trustee, precision));
    }
    out
}

#[derive(Serialize)]
struct ScoreReport {
    raw_score: f64,
    clamped_score: f64,
    categories: Vec<CategoryTotal>,
}

#[derive(Serialize)]
struct CategoryTotal {
    category: MetricCategory,
    total: f64,
}

fn cmd_score(args: ScoreArgs) -> Result<(), CliError> {
    let metrics = score::load_metrics_file(&args.metrics)?;
    let weights = score::load_weights_file(&args.weights)?;

    let timestamp = args.timestamp.unwrap_or_else(Utc::now);
    let record = trust_score_at(&metrics, &weights, timestamp)?;
    let breakdown = score::category_breakdown(&record, &metrics)?;

    let rendered = match args.format {
        ReportFormat::Text => {
            let p = args.output.precision;
            let mut out = String::new();
            let _ = writeln!(out, "raw score: {}", fmt_num(record.raw_score, p));
            let _ = writeln!(out, "clamped score: {}", fmt_num(record.clamped_score, p));
            let _ = writeln!(out, "category breakdown:");
            for (category, total) in &breakdown {
                let _ = writeln!(out, "  {category}: {}", fmt_num(*total, p));
            }
            out
        }
        ReportFormat::Json => {
            let report = ScoreReport {
                raw_score: record.raw_score,
                clamped_score: record.clamped_score,
                categories: breakdown
                    .iter()
                    .map(|(category, total)| CategoryTotal {
                        category: *category,
                        total: *total,
                    })
                    .collect(),
            };
            let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
            s.push('\n');
            s
        }
    };
    if let Some(history) = &args.history {
        ScoreSeries::append_to_file(history, &record)?;
    }
    emit(&args.output, &rendered)?;

    // Dataset-level warnings come last so a failing run keeps stderr to its
    // single diagnostic line.
    for flag in &score::validate_metrics(&metrics).flags {
        eprintln!("warning: {flag}");
    }
    if let Some(warning) = weights.sum_to_one_warning() {
        eprintln!("warning: {warning}");
    }
    Ok(())
}

#[derive(Serialize)]
struct FairTradeReport {
    matrix: [[f64; 2]; 2],
    rows_linearly_independent: bool,
    eigenvalues: [f64; 2],
    dominant_eigenvector: [f64; 2],
    secondary_eigenvector: [f64; 2],
    slope: f64,
    intercept: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    point: Option<PointReport>,
}

#[derive(Serialize)]
struct PointReport {
    net_gain: f64,
    accumulated: f64,
    classification: TradeBalance,
}

fn cmd_fairtrade(args: FairtradeArgs) -> Result<(), CliError> {
    let matrix = ExchangeMatrix::new(args.p, args.q, args.k)?;
    let (high, low) = matrix.eigen_decompose()?;
    let line = matrix.fair_trade_line()?;
    let classified = args.point.map(|point| {
        let class = line.classify((point.net_gain, point.accumulated), args.tolerance);
        (point, class)
    });

    let rendered = match args.format {
        ReportFormat::Text => {
            let p = args.output.precision;
            let mut out = String::new();
            let _ = writeln!(out, "exchange matrix:");
            for row in matrix.entries() {
                let _ = writeln!(out, "  [ {}  {} ]", fmt_num(row[0], p), fmt_num(row[1], p));
            }
            let _ = writeln!(
                out,
                "rows linearly independent: {}",
                matrix.rows_linearly_independent()
            );
            let _ = writeln!(
                out,
                "eigenvalue 1: {}  eigenvector 1: ({}, {})",
                fmt_num(high.value, p),
                fmt_num(high.vector[0], p),
                fmt_num(high.vector[1], p)
            );
            let _ = writeln!(
                out,
                "eigenvalue 2: {}  eigenvector 2: ({}, {})",
                fmt_num(low.value, p),
                fmt_num(low.vector[0], p),
                fmt_num(low.vector[1], p)
            );
            let _ = writeln!(out, "fair trade line: y = {} x", fmt_num(line.slope, p));
            if let Some((point, class)) = &classified {
                let _ = writeln!(
                    out,
                    "point ({}, {}): {class}",
                    fmt_num(point.net_gain, p),
                    fmt_num(point.accumulated, p)
                );
            }
            out
        }
        ReportFormat::Json => {
            let report = FairTradeReport {
                matrix: matrix.entries(),
                rows_linearly_independent: matrix.rows_linearly_independent(),
                eigenvalues: [high.value, low.value],
                dominant_eigenvector: high.vector,
                secondary_eigenvector: low.vector,
                slope: line.slope,
                intercept: line.intercept,
                point: classified.map(|(point, class)| PointReport {
                    net_gain: point.net_gain,
                    accumulated: point.accumulated,
                    classification: class,
                }),
            };
            let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
            s.push('\n');
            s
        }
    };
    emit(&args.output, &rendered)?;
    Ok(())
}

fn cmd_history(args: HistoryArgs) -> Result<(), CliError> {
    let series = ScoreSeries::load_jsonl(&args.history)?;
    let report = series.fluctuation(args.window, args.threshold)?;

    let rendered = match args.format {
        ReportFormat::Text => {
            let p = args.output.precision;
            let mut out = String::new();
            let _ = writeln!(out, "records: {} (window {})", series.len(), report.window);
            let _ = writeln!(out, "max abs delta: {}", fmt_num(report.max_abs_delta, p));
            let _ = writeln!(out, "range: {}", fmt_num(report.range, p));
            let _ = writeln!(out, "std dev: {}", fmt_num(report.std_dev, p));
            let _ = writeln!(out, "verdict: {}", report.verdict);
            out
        }
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
            s.push('\n');
            s
        }
    };
    emit(&args.output, &rendered)?;
    Ok(())
}
