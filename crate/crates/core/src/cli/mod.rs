//! Command-line surface: `run`, `profile`, `study` and `validate`.
//!
//! Exit codes are 0 on success, 1 for configuration errors (including bad
//! arguments) and 2 for computation or output errors. Failures print a
//! one-line JSON diagnostic on stderr.

pub mod config;
pub mod profile;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::error::WignerError;

pub use config::{Angle, ScenarioConfig, SCHEMA_VERSION};
pub use profile::{emit_profile, write_profile_csv, ProfileRow, PROFILE_HEADER};
pub use report::{run_scenario, run_studies, Report, StudiesReport};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid config at {path}: {message}")]
    ConfigInvalid { path: String, message: String },
    #[error(transparent)]
    Computation(#[from] WignerError),
    #[error("output error: {0}")]
    Output(#[from] std::io::Error),
}

impl CliError {
    pub(crate) fn config(path: &str, message: &str) -> Self {
        let path = if path.is_empty() { "$".to_string() } else { path.to_string() };
        CliError::ConfigInvalid { path, message: message.to_string() }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::ConfigInvalid { .. } => 1,
            _ => 2,
        }
    }

    /// Machine-readable form printed on stderr.
    pub fn diagnostic(&self) -> serde_json::Value {
        let mut v = serde_json::json!({ "error": self.kind(), "message": self.to_string(), "exit_code": self.exit_code() });
        match self {
            CliError::ConfigInvalid { path, .. } => v["path"] = path.clone().into(),
            CliError::Computation(WignerError::InSegment { index, .. }) => v["segment"] = (*index).into(),
            _ => {}
        }
        v
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::ConfigInvalid { .. } => "config_invalid",
            CliError::Computation(_) => "computation",
            CliError::Output(_) => "output",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "wigner-phase", version, about = "Wigner phase of photon helicity on Earth-satellite paths in Schwarzschild spacetime")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, clap::Args)]
pub struct CommonArgs {
    /// Scenario JSON file.
    #[arg(long)]
    pub config: PathBuf,
    /// Directory for output files; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Relative tolerance for quadrature, ODE and root finding.
    #[arg(long, value_name = "REL")]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the scheme: segment table, totals, bounds and quantum outcome.
    Run(CommonArgs),
    /// Rate and cumulative phase along one geodesic segment.
    Profile {
        #[command(flatten)]
        common: CommonArgs,
        /// Segment index (overrides the config).
        #[arg(long)]
        segment: Option<usize>,
        /// Number of rows (overrides the config).
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Convergence studies (mass scaling by default).
    Study(CommonArgs),
    /// Parse and check the config without computing.
    Validate(CommonArgs),
}

fn load(args: &CommonArgs) -> Result<(ScenarioConfig, crate::numerics::Tolerances), CliError> {
    let text =
        std::fs::read_to_string(&args.config).map_err(|e| CliError::config("", &format!("cannot read {}: {e}", args.config.display())))?;
    let cfg = ScenarioConfig::from_json(&text)?;
    let tol = cfg.tolerances(args.tolerance)?;
    Ok((cfg, tol))
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Output(e.into()))?;
    s.push('\n');
    Ok(s)
}

fn csv_text<F>(fill: F) -> Result<String, CliError>
where
    F: FnOnce(&mut csv::Writer<&mut Vec<u8>>) -> csv::Result<()>,
{
    let mut buf = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        fill(&mut w).map_err(|e| CliError::Output(e.into()))?;
        w.flush()?;
    }
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

fn opt(x: Option<f64>) -> String {
    x.map(profile::format_float).unwrap_or_default()
}

/// Per-segment phase table plus a `total` row.
pub fn report_csv(report: &Report) -> Result<String, CliError> {
    csv_text(|w| {
        w.write_record([
            "segment",
            "r_start",
            "r_end",
            "theta_start",
            "theta_end",
            "kappa",
            "numeric",
            "error_estimate",
            "closed_form",
            "difference",
            "bound",
            "within_bound",
        ])?;
        let f = profile::format_float;
        let row = |w: &mut csv::Writer<&mut Vec<u8>>, label: String, geo: [String; 5], p: &report::PhaseComparison| {
            let [a, b, c, d, e] = geo;
            w.write_record([
                label,
                a,
                b,
                c,
                d,
                e,
                f(p.numeric.value),
                f(p.numeric.error_estimate),
                opt(p.closed_form.map(|c| c.value)),
                opt(p.difference),
                opt(p.bound),
                p.within_bound.map(|b| b.to_string()).unwrap_or_default(),
            ])
        };
        for s in &report.segments {
            row(w, s.index.to_string(), [f(s.r_start), f(s.r_end), f(s.theta_start), f(s.theta_end), f(s.kappa)], &s.phase)?;
        }
        row(w, "total".into(), Default::default(), &report.total)
    })
}

/// Scaling points of every study as one table.
pub fn studies_csv(s: &StudiesReport) -> Result<String, CliError> {
    csv_text(|w| {
        w.write_record(["quantity", "mass_ratio", "epsilon", "numeric", "closed_form", "difference", "error_estimate"])?;
        let f = profile::format_float;
        if let Some(e) = &s.epsilon_scaling {
            for (name, study) in [("rate", &e.rate), ("segment_phase", &e.segment), ("scheme_total", &e.scheme)] {
                for p in &study.points {
                    w.write_record([
                        name.to_string(),
                        f(p.mass_ratio),
                        f(p.epsilon),
                        f(p.numeric),
                        f(p.closed_form),
                        f(p.difference),
                        f(p.error_estimate),
                    ])?;
                }
            }
        }
        if let Some(k) = &s.kappa_sweep {
            for p in k {
                w.write_record([
                    "kappa_sweep".to_string(),
                    String::new(),
                    String::new(),
                    f(p.numeric),
                    f(p.closed_form),
                    f(p.numeric - p.closed_form),
                    f(p.error_estimate),
                ])?;
            }
        }
        Ok(())
    })
}

fn emit(out: Option<&Path>, name: &str, body: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join(name), body)?;
        }
        None => stdout.write_all(body.as_bytes())?,
    }
    Ok(())
}

/// Executes a parsed command, writing results to `--out` or `stdout`.
pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Validate(args) => {
            let (cfg, _) = load(args)?;
            let body = serde_json::json!({ "valid": true, "schema_version": cfg.schema_version });
            emit(args.out.as_deref(), "validate.json", &to_json(&body)?, stdout)
        }
        Command::Run(args) => {
            let (cfg, tol) = load(args)?;
            let report = run_scenario(&cfg, &tol)?;
            match args.format {
                Format::Json => emit(args.out.as_deref(), "report.json", &to_json(&report)?, stdout),
                Format::Csv => emit(args.out.as_deref(), "segments.csv", &report_csv(&report)?, stdout),
            }
        }
        Command::Profile { common, segment, samples } => {
            let (cfg, tol) = load(common)?;
            let pc = cfg.profile.unwrap_or_default();
            let (index, n) = (segment.unwrap_or(pc.segment), samples.unwrap_or(pc.samples));
            if n < 2 {
                return Err(CliError::config("samples", "need at least 2 samples"));
            }
            let seg = report::path_segment(&cfg, index, &tol)?;
            let rows = emit_profile(&seg, &cfg.gauge, n, &tol).map_err(|e| CliError::Computation(e.in_segment(index)))?;
            match common.format {
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_profile_csv(&rows, &mut buf)?;
                    emit(common.out.as_deref(), "profile.csv", &String::from_utf8(buf).expect("utf-8"), stdout)
                }
                Format::Json => emit(common.out.as_deref(), "profile.json", &to_json(&rows)?, stdout),
            }
        }
        Command::Study(args) => {
            let (cfg, tol) = load(args)?;
            let studies = run_studies(&cfg, cfg.study.as_ref(), &tol)?;
            match args.format {
                Format::Json => emit(args.out.as_deref(), "study.json", &to_json(&studies)?, stdout),
                Format::Csv => emit(args.out.as_deref(), "study.csv", &studies_csv(&studies)?, stdout),
            }
        }
    }
}

/// Entry point of the binary: parses `args`, runs, and maps errors to exit codes.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&cli, &mut std::io::stdout().lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.diagnostic());
            ExitCode::from(e.exit_code())
        }
    }
}
