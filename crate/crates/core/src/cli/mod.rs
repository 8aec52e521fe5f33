//! The `qwalk` command line: `evolve`, `ensemble`, `analyze`, `verify`, `predict`.
//!
//! Exit status is 0 on success (a fit that legitimately fails is still
//! success), 1 when `verify` finds a failed identity, 2 on any usage, parse or
//! I/O error.

mod io;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

pub use io::{
    distributions_csv, fmt_f64, moments_csv, parse_distributions, read_distributions,
    read_manifest, to_json, write_atomic, CsvFormat, RunManifest, DISTRIBUTIONS_FILE,
    MANIFEST_FILE, MOMENTS_FILE, REPORT_FILE, VERIFY_FILE,
};

use crate::analysis::{
    effective_field_factor, estimate_period, fit_gaussian_logparabola_with, fit_scaling_exponent,
    moment_series, predicted_period, GaussianFit, PeriodEstimate, ScalingFit,
    DEFAULT_SUPPORT_THRESHOLD,
};
use crate::config::{parse_theta, FieldKind, WalkConfig};
use crate::error::{Error, Result};
use crate::oracle::{run_verification, VerifyReport};
use crate::state::InitialState;
use crate::stochastic::{run_deterministic, run_ensemble, run_realization, DistributionSeries};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "qwalk",
    version,
    about = "Quantum walks on a cycle in stochastic gauge fields"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Single realization (or deterministic walk with --effective).
    Evolve(EvolveArgs),
    /// Probabilities averaged over many realizations.
    Ensemble(RunArgs),
    /// Gaussian fit, spreading exponent and period of a saved run.
    Analyze(AnalyzeArgs),
    /// Dense-matrix identity checks at small d.
    Verify(VerifyArgs),
    /// Bloch period 2π / (φ (r + 2(1−r)²)).
    Predict(PredictArgs),
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[arg(long, default_value_t = 501)]
    pub d: usize,
    #[arg(long, default_value_t = 1)]
    pub q: u32,
    /// `pi/4`, `pi/2`, `kpi/n` or radians.
    #[arg(long, default_value = "pi/4", value_parser = parse_theta)]
    pub theta: f64,
    /// none | b | e
    #[arg(long, default_value = "e")]
    pub field: FieldKind,
    /// Probability of applying the field at each step [default: 0.9].
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long, default_value_t = 400)]
    pub steps: usize,
    #[arg(long, default_value_t = 1000)]
    pub realizations: usize,
    /// single | two-site | x:<int>,s:<±1>
    #[arg(long, default_value = "single")]
    pub init: InitialState,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = CsvFormat::Long)]
    pub format: CsvFormat,
    /// Worker threads for ensembles; defaults to all cores.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Apply Φ_E^{r+2(1−r)²} at every step instead of drawing.
    #[arg(long)]
    pub effective: bool,
    /// Realization index whose random stream is used.
    #[arg(long, default_value_t = 0)]
    pub index: u64,
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    /// Run directory (or a distributions CSV).
    pub input: PathBuf,
    /// Time slice for the Gaussian fit; defaults to the last one.
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long)]
    pub t_min: Option<usize>,
    #[arg(long)]
    pub t_max: Option<usize>,
    /// Sites below this fraction of the peak are left out of the Gaussian fit.
    #[arg(long, default_value_t = DEFAULT_SUPPORT_THRESHOLD)]
    pub support_threshold: f64,
    #[arg(long)]
    pub gaussian: bool,
    #[arg(long)]
    pub scaling: bool,
    #[arg(long)]
    pub period: bool,
    /// Where report.json goes; defaults to the input directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 1)]
    pub q: u32,
    #[arg(long, default_value = "pi/4", value_parser = parse_theta)]
    pub theta: f64,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct PredictArgs {
    #[arg(long, default_value_t = 501)]
    pub d: usize,
    #[arg(long, default_value_t = 1)]
    pub q: u32,
    #[arg(long, default_value_t = 0.9)]
    pub r: f64,
}

/// A fit result or the reason it failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Outcome<T> {
    Ok(T),
    Failed { error: String },
}

impl<T> From<Result<T>> for Outcome<T> {
    fn from(r: Result<T>) -> Self {
        match r {
            Ok(v) => Outcome::Ok(v),
            Err(e) => Outcome::Failed {
                error: e.to_string(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianReport {
    pub t: usize,
    #[serde(flatten)]
    pub fit: Outcome<GaussianFit>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub manifest: Option<RunManifest>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub gaussian_fit: Option<GaussianReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub scaling_fit: Option<Outcome<ScalingFit>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub period_estimate: Option<Outcome<PeriodEstimate>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub verify: Option<VerifyReport>,
}

impl RunArgs {
    pub fn config(&self) -> Result<WalkConfig> {
        let cfg = WalkConfig {
            d: self.d,
            theta: self.theta,
            q: self.q,
            r: self.r.unwrap_or(0.9),
            field: self.field,
            steps: self.steps,
            realizations: self.realizations,
            master_seed: self.seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn warn_ignored_r(&self) {
        if self.field == FieldKind::None && self.r.is_some() {
            eprintln!("warning: --r is ignored with --field none");
        }
    }
}

fn write_run(
    args: &RunArgs,
    command: &str,
    config: WalkConfig,
    alpha: Option<f64>,
    series: &DistributionSeries,
    max_norm_error: f64,
    started: Instant,
) -> Result<RunManifest> {
    let moments = moment_series(series, args.init.origin(config.d));
    write_atomic(
        &args.out.join(DISTRIBUTIONS_FILE),
        distributions_csv(series, args.format).as_bytes(),
    )?;
    write_atomic(
        &args.out.join(MOMENTS_FILE),
        moments_csv(&moments).as_bytes(),
    )?;
    let manifest = RunManifest {
        command: command.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        config,
        init: args.init,
        alpha,
        format: args.format,
        max_norm_error,
        duration_seconds: started.elapsed().as_secs_f64(),
        outputs: vec![
            DISTRIBUTIONS_FILE.into(),
            MOMENTS_FILE.into(),
            MANIFEST_FILE.into(),
        ],
    };
    write_atomic(
        &args.out.join(MANIFEST_FILE),
        to_json(&manifest)?.as_bytes(),
    )?;
    Ok(manifest)
}

pub fn cmd_evolve(args: &EvolveArgs) -> Result<RunManifest> {
    let started = Instant::now();
    let run = &args.run;
    run.warn_ignored_r();
    let config = WalkConfig {
        realizations: 1,
        ..run.config()?
    };
    let initial = run.init.build(config.d)?;
    let (real, alpha) = if args.effective {
        if config.field != FieldKind::Electric {
            return Err(Error::domain("--effective needs --field e"));
        }
        let alpha = effective_field_factor(config.r);
        (run_deterministic(&config, &initial, alpha)?, Some(alpha))
    } else {
        (run_realization(&config, &initial, args.index)?, None)
    };
    let err = (real.final_state.norm_sqr() - 1.0).abs();
    write_run(
        run,
        "evolve",
        config,
        alpha,
        &real.distributions,
        err,
        started,
    )
}

pub fn cmd_ensemble(args: &RunArgs) -> Result<RunManifest> {
    let started = Instant::now();
    args.warn_ignored_r();
    let config = args.config()?;
    let initial = args.init.build(config.d)?;
    let avg = match args.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::domain(format!("thread pool: {e}")))?
            .install(|| run_ensemble(&config, &initial))?,
        None => run_ensemble(&config, &initial)?,
    };
    write_run(
        args,
        "ensemble",
        config,
        None,
        &avg.pbar,
        avg.max_norm_error,
        started,
    )
}

fn argmax(row: &[f64]) -> usize {
    row.iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map_or(0, |(i, _)| i)
}

pub fn cmd_analyze(args: &AnalyzeArgs) -> Result<AnalysisReport> {
    let (dir, csv) = if args.input.is_dir() {
        (args.input.clone(), args.input.join(DISTRIBUTIONS_FILE))
    } else {
        (
            args.input
                .parent()
                .map(Path::to_path_buf)
                .unwrap_or_default(),
            args.input.clone(),
        )
    };
    let series = read_distributions(&csv)?;
    let manifest_path = dir.join(MANIFEST_FILE);
    let manifest = if manifest_path.exists() {
        Some(read_manifest(&manifest_path)?)
    } else {
        None
    };
    let d = series.d();
    if let Some(m) = &manifest {
        if m.config.d != d {
            return Err(Error::Parse(format!(
                "manifest has d = {}, CSV has d = {d}",
                m.config.d
            )));
        }
    }
    let origin = manifest
        .as_ref()
        .map_or_else(|| argmax(series.row(0)), |m| m.init.origin(d));
    let all = !(args.gaussian || args.scaling || args.period);
    let steps = series.steps();

    let gaussian_fit = (all || args.gaussian)
        .then(|| -> Result<GaussianReport> {
            let t = args.t.unwrap_or(steps);
            let dist = series.distribution(t, origin)?;
            Ok(GaussianReport {
                t,
                fit: fit_gaussian_logparabola_with(&dist, args.support_threshold).into(),
            })
        })
        .transpose()?;
    let moments = moment_series(&series, origin);
    let scaling_fit = (all || args.scaling).then(|| {
        let t_max = args.t_max.unwrap_or(steps);
        let t_min = args.t_min.unwrap_or(t_max / 4);
        fit_scaling_exponent(&moments, t_min, t_max).into()
    });
    let period_estimate = (all || args.period).then(|| estimate_period(&moments).into());

    let report = AnalysisReport {
        manifest,
        gaussian_fit,
        scaling_fit,
        period_estimate,
        verify: None,
    };
    let out = args.out.clone().unwrap_or(dir);
    write_atomic(&out.join(REPORT_FILE), to_json(&report)?.as_bytes())?;
    Ok(report)
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<VerifyReport> {
    let report = run_verification(args.q, args.theta)?;
    write_atomic(&args.out.join(VERIFY_FILE), to_json(&report)?.as_bytes())?;
    Ok(report)
}

pub fn cmd_predict(args: &PredictArgs) -> Result<f64> {
    let cfg = WalkConfig {
        d: args.d,
        q: args.q,
        r: args.r,
        ..WalkConfig::default()
    };
    cfg.validate()?;
    predicted_period(cfg.phi(), args.r)
}

/// Runs a parsed command line and returns the process exit status.
pub fn run(cli: Cli) -> i32 {
    let result = match &cli.command {
        Command::Evolve(a) => cmd_evolve(a).map(|m| {
            println!("wrote {} ({} steps)", a.run.out.display(), m.config.steps);
            EXIT_OK
        }),
        Command::Ensemble(a) => cmd_ensemble(a).map(|m| {
            println!(
                "wrote {} ({} realizations, {} steps)",
                a.out.display(),
                m.config.realizations,
                m.config.steps
            );
            EXIT_OK
        }),
        Command::Analyze(a) => cmd_analyze(a).and_then(|r| {
            print!("{}", to_json(&r)?);
            Ok(EXIT_OK)
        }),
        Command::Verify(a) => cmd_verify(a).map(|r| {
            print!("{}", r.summary());
            if r.passed {
                EXIT_OK
            } else {
                EXIT_VERIFY_FAILED
            }
        }),
        Command::Predict(a) => cmd_predict(a).map(|t| {
            println!("{}", fmt_f64(t));
            EXIT_OK
        }),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        EXIT_USAGE
    })
}

/// Parses `args` (program name first) and runs; clap usage errors exit 2.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_OK
            }
        }
    }
}
