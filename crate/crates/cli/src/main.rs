mod config;
mod sweep;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use etacert::analytic::eta_ns;
use etacert::npa::{export_sdp, min_efficiency_npa, NpaBound, NpaLevel};
use etacert::quantum::{min_efficiency_qr, BisectionResult, SearchConfig};
use etacert::validate::{run_suite, Suite, ValidateConfig};
use etacert::Error;
use serde::Serialize;

use config::{parse_level, thread_cap, FileConfig, Format, Output};
use sweep::{sig9, SweepSpec};

const DEFAULT_TOL: f64 = 1e-7;

/// Device-independent bounds on detector efficiency from an observed
/// Eberhard violation.
#[derive(Parser)]
#[command(name = "etacert", version)]
struct Cli {
    /// JSON file with default settings; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bounds at a single observed violation.
    Point(PointArgs),
    /// Bounds over a grid of observed violations.
    Sweep(SweepArgs),
    /// Run a property suite: core, quantum, npa, analytic or all.
    Validate(ValidateArgs),
    /// Write the NPA relaxation at fixed efficiency as interchange JSON.
    ExportSdp(ExportArgs),
}

#[derive(Args)]
struct Shared {
    /// Dark-count probability.
    #[arg(long)]
    xi: Option<f64>,
    /// Bisection tolerance on the efficiency.
    #[arg(long)]
    tol: Option<f64>,
    /// NPA levels (1, 1+AB, 2); repeat or separate with commas.
    #[arg(long, value_delimiter = ',', value_parser = parse_level)]
    level: Vec<NpaLevel>,
    /// Which bounds to compute.
    #[arg(long, value_enum, value_delimiter = ',')]
    outputs: Vec<Output>,
    /// Random restarts of the realization search.
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct PointArgs {
    /// Observed Eberhard violation.
    #[arg(long)]
    e: Option<f64>,
    #[command(flatten)]
    shared: Shared,
}

#[derive(Args)]
struct SweepArgs {
    /// Explicit grid of observed violations, comma separated.
    #[arg(long, value_delimiter = ',')]
    e: Vec<f64>,
    #[arg(long)]
    e_min: Option<f64>,
    #[arg(long)]
    e_max: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    /// Fill the wall_time column (makes output run-dependent).
    #[arg(long)]
    timing: bool,
    #[command(flatten)]
    shared: Shared,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(default_value = "all")]
    suite: String,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct ExportArgs {
    /// Detector efficiency at which the objective is built.
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    xi: Option<f64>,
    #[arg(long, value_parser = parse_level)]
    level: Option<NpaLevel>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Flags merged over the config file.
struct Settings {
    xi: f64,
    tol: f64,
    levels: Vec<NpaLevel>,
    outputs: Vec<Output>,
    search: SearchConfig,
    out: Option<PathBuf>,
}

impl Settings {
    fn merge(flags: Shared, file: &FileConfig) -> Result<(Self, Option<Format>)> {
        let mut search = SearchConfig::default();
        if let Some(r) = flags.restarts.or(file.restarts) {
            search.restarts = r;
        }
        if let Some(s) = flags.seed.or(file.seed) {
            search.rng_seed = s;
        }
        let levels = if flags.level.is_empty() {
            file.levels()?.unwrap_or_else(|| vec![NpaLevel::Two])
        } else {
            flags.level
        };
        let outputs = if flags.outputs.is_empty() {
            file.outputs
                .clone()
                .unwrap_or_else(|| vec![Output::Qr, Output::Npa, Output::Analytic])
        } else {
            flags.outputs
        };
        let settings = Self {
            xi: flags.xi.or(file.xi).unwrap_or(0.0),
            tol: flags.tol.or(file.tol).unwrap_or(DEFAULT_TOL),
            levels,
            outputs,
            search,
            out: flags.out.or_else(|| file.out.clone()),
        };
        Ok((settings, flags.format.or(file.format)))
    }
}

fn open_output(path: Option<&PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(std::io::stdout().lock()),
    })
}

#[derive(Serialize)]
struct PointReport {
    e_obs: f64,
    xi: f64,
    tol: f64,
    eta_qr: Option<BisectionResult>,
    eta_npa: Vec<NpaBound>,
    eta_ns: Option<f64>,
}

fn infeasible_message(err: Error) -> anyhow::Error {
    match err {
        Error::Infeasible {
            e_obs,
            xi,
            achievable,
        } => anyhow::anyhow!(
            "E_obs = {e_obs} exceeds the quantum maximum {achievable:.6} at xi = {xi}"
        ),
        other => other.into(),
    }
}

fn cmd_point(args: PointArgs, file: &FileConfig) -> Result<()> {
    let e_obs = match (args.e, file.e.as_deref()) {
        (Some(e), _) => e,
        (None, Some([e])) => *e,
        (None, Some(_)) => bail!("config key \"e\" must hold a single value for point"),
        (None, None) => bail!("point needs --e"),
    };
    let (s, format) = Settings::merge(args.shared, file)?;
    let mut report = PointReport {
        e_obs,
        xi: s.xi,
        tol: s.tol,
        eta_qr: None,
        eta_npa: Vec::new(),
        eta_ns: None,
    };
    if s.outputs.contains(&Output::Npa) {
        for &level in &s.levels {
            let b = min_efficiency_npa(e_obs, s.xi, s.tol, level).map_err(infeasible_message)?;
            report.eta_npa.push(b);
        }
    }
    if s.outputs.contains(&Output::Qr) {
        let r = min_efficiency_qr(e_obs, s.xi, s.tol, &s.search).map_err(infeasible_message)?;
        report.eta_qr = Some(r);
    }
    if s.outputs.contains(&Output::Analytic) && s.xi == 0.0 {
        report.eta_ns = Some(eta_ns(e_obs).map_err(infeasible_message)?);
    }

    let mut out = open_output(s.out.as_ref())?;
    match format.unwrap_or(Format::Json) {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &report)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut row = sweep::Row {
                e_obs,
                eta_qr: report.eta_qr.as_ref().map(|r| r.eta),
                eta_npa_l1: None,
                eta_npa_l1ab: None,
                eta_npa_l2: None,
                eta_ns: report.eta_ns,
                xi: s.xi,
                wall_time: None,
                status: "ok".into(),
            };
            for b in &report.eta_npa {
                *row.npa_slot(b.level) = Some(b.eta);
            }
            sweep::write_rows(&[row], Format::Csv, &mut out)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn cmd_sweep(args: SweepArgs, file: &FileConfig) -> Result<()> {
    let grid = if !args.e.is_empty() {
        Some(args.e)
    } else {
        file.e.clone()
    };
    let timing = args.timing || file.timing.unwrap_or(false);
    let e_min = args.e_min.or(file.e_min).unwrap_or(0.001);
    let e_max = args.e_max.or(file.e_max).unwrap_or(0.2071);
    let points = args.points.or(file.points).unwrap_or(30);
    let (s, format) = Settings::merge(args.shared, file)?;
    let spec = SweepSpec {
        e_min,
        e_max,
        points,
        grid,
        xi: s.xi,
        levels: s.levels,
        tol: s.tol,
        outputs: s.outputs,
        search: s.search,
        timing,
    };
    spec.validate()?;
    let rows = sweep::run(&spec);
    let mut out = open_output(s.out.as_ref())?;
    sweep::write_rows(&rows, format.unwrap_or(Format::Csv), &mut out)?;
    out.flush()?;
    Ok(())
}

/// Returns whether every check passed.
fn cmd_validate(args: ValidateArgs, file: &FileConfig) -> Result<bool> {
    let suite: Suite = args.suite.parse()?;
    let mut cfg = ValidateConfig::default();
    if let Some(seed) = args.seed.or(file.seed) {
        cfg.seed = seed;
    }
    let checks = run_suite(suite, &cfg);
    let mut out = open_output(args.out.as_ref().or(file.out.as_ref()))?;
    match args.format.or(file.format).unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(["suite", "name", "passed", "measured", "tolerance"])?;
            for c in &checks {
                w.write_record([
                    c.suite.clone(),
                    c.name.clone(),
                    c.passed.to_string(),
                    sig9(c.measured),
                    sig9(c.tolerance),
                ])?;
            }
            w.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &checks)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(checks.iter().all(|c| c.passed))
}

fn cmd_export(args: ExportArgs, file: &FileConfig) -> Result<()> {
    let level = match args.level {
        Some(l) => l,
        None => file
            .levels()?
            .and_then(|l| l.first().copied())
            .unwrap_or(NpaLevel::Two),
    };
    let eta = args.eta.or(file.eta).unwrap_or(1.0);
    let xi = args.xi.or(file.xi).unwrap_or(0.0);
    let sdp = export_sdp(level, eta, xi)?;
    let mut out = open_output(args.out.as_ref().or(file.out.as_ref()))?;
    writeln!(out, "{}", sdp.to_json()?)?;
    out.flush()?;
    Ok(())
}

fn run() -> Result<bool> {
    let cli = Cli::parse();
    if let Some(n) = thread_cap()? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()?;
    }
    let file = FileConfig::load(cli.config.as_deref())?;
    match cli.command {
        Command::Point(a) => cmd_point(a, &file).map(|_| true),
        Command::Sweep(a) => cmd_sweep(a, &file).map(|_| true),
        Command::Validate(a) => cmd_validate(a, &file),
        Command::ExportSdp(a) => cmd_export(a, &file).map(|_| true),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
