use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use zerolab::constants::FrozenConstants;
use zerolab::equidist::{equidist_report, GaugeKind, RadialGauge, RegionCount, TestRegion};
use zerolab::evaluator::SeriesSpec;
use zerolab::sequences::{generate, write_csv, MultiplierKind};
use zerolab::weights::{SmoothWeight, WeightFamily};
use zerolab::zeros::{count_region, localize_zeros, write_zeros_csv, Contour};
use zerolab::{Error, Result};
use zerolab_cli::config::SCHEMA_VERSION;
use zerolab_cli::runner::correlation_rows;
use zerolab_cli::{exit_code, ExperimentConfig, Runner, EXIT_OK, EXIT_VALIDATION};

#[derive(Parser)]
#[command(name = "zerolab", version, about = "Zeros of entire functions with structured multipliers")]
struct Cli {
    /// Experiment configuration (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for `run`.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Overrides the configured seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Frozen fitted constants (JSON); defaults to the built-in file.
    #[arg(long, global = true)]
    constants: Option<PathBuf>,
    /// Weight as JSON, e.g. '{"kind":"log_family","alpha":0.5}'; overrides the config.
    #[arg(long, global = true)]
    weight: Option<String>,
    /// Multiplier kind as JSON, e.g. '{"kind":"iid_gaussian"}'; overrides the config.
    #[arg(long, global = true)]
    sequence: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SeqFormat {
    Csv,
    Binary,
}

#[derive(Subcommand)]
enum Command {
    /// Static validation of the configuration.
    Validate,
    /// Runs every experiment of the configuration into `--out`.
    Run,
    /// Tabulates ν, σ and log μ at the given radii.
    Weights {
        #[arg(long, value_delimiter = ',', required = true)]
        r: Vec<f64>,
    },
    /// Generates multipliers ξ(n) for n0 ≤ n < n1.
    Seq {
        #[arg(long, default_value_t = 0)]
        n0: u64,
        #[arg(long)]
        n1: u64,
        #[arg(long, value_enum, default_value = "csv")]
        format: SeqFormat,
        /// Destination file (required for binary); CSV goes to stdout otherwise.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Normalized autocorrelations against their predicted limits.
    Corr {
        #[arg(long)]
        x: u64,
        #[arg(long, default_value_t = 64)]
        h_max: u64,
    },
    /// Counts zeros in |z| < r; with --localize, prints enclosures instead.
    Zeros {
        #[arg(long)]
        r: f64,
        #[arg(long)]
        localize: Option<f64>,
    },
    /// Sector counts on an annulus against γ-masses.
    Equidist {
        #[arg(long)]
        r1: f64,
        #[arg(long)]
        r2: f64,
        #[arg(long, default_value_t = 8)]
        sectors: u32,
        /// Gauge as JSON.
        #[arg(long, default_value = r#"{"kind":"sqrt_log"}"#)]
        gauge: String,
        #[arg(long, default_value_t = 2.0)]
        tau: f64,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot start {n} threads: {e}");
            return ExitCode::from(1);
        }
    }
    match dispatch(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}

fn json_arg<T: serde::de::DeserializeOwned>(flag: &str, text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Validation(vec![format!("--{flag}: {e}")]))
}

fn config_text(cli: &Cli) -> Result<Option<String>> {
    cli.config.as_ref().map(fs::read_to_string).transpose().map_err(Error::from)
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig> {
    let text = config_text(cli)?.ok_or_else(|| Error::Validation(vec!["--config: required".into()]))?;
    let mut cfg = ExperimentConfig::parse(&text)?;
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

/// Weight, multiplier kind and seed for the single-module subcommands.
fn model(cli: &Cli) -> Result<(SmoothWeight, MultiplierKind, u64, f64)> {
    let base = match config_text(cli)? {
        Some(t) => Some(ExperimentConfig::parse(&t)?),
        None => None,
    };
    let family: WeightFamily = match (&cli.weight, &base) {
        (Some(w), _) => json_arg("weight", w)?,
        (None, Some(c)) => c.weight.clone(),
        (None, None) => WeightFamily::LogFamily { alpha: 0.5 },
    };
    let kind: MultiplierKind = match (&cli.sequence, &base) {
        (Some(s), _) => json_arg("sequence", s)?,
        (None, Some(c)) => c.sequence,
        (None, None) => MultiplierKind::IidGaussian,
    };
    kind.validate().map_err(|e| Error::Validation(vec![format!("sequence: {e}")]))?;
    let seed = cli.seed.or(base.as_ref().map(|c| c.seed)).unwrap_or(0);
    let window_a = base.as_ref().map_or(zerolab::evaluator::DEFAULT_WINDOW_A, |c| c.window_a);
    Ok((SmoothWeight::new(family)?, kind, seed, window_a))
}

fn series(cli: &Cli, r_max: f64) -> Result<SeriesSpec> {
    let (w, kind, seed, a) = model(cli)?;
    let n = SeriesSpec::required_max_index(&w, r_max, a)?;
    SeriesSpec::new(w, generate(kind, 0, n, seed)?, a)
}

fn dispatch(cli: &Cli) -> Result<i32> {
    let stdout = io::stdout();
    match &cli.command {
        Command::Validate => {
            let text = config_text(cli)?.ok_or_else(|| Error::Validation(vec!["--config: required".into()]))?;
            let errors = ExperimentConfig::check_text(&text);
            if errors.is_empty() {
                println!("ok (schema_version {SCHEMA_VERSION})");
                return Ok(EXIT_OK);
            }
            for e in &errors {
                println!("{e}");
            }
            Ok(EXIT_VALIDATION)
        }
        Command::Run => {
            let cfg = load_config(cli)?;
            let constants = match &cli.constants {
                Some(p) => fs::read_to_string(p)?,
                None => FrozenConstants::builtin_text().to_string(),
            };
            let runner = Runner::new(cfg, &constants, &cli.out)?;
            let summary = runner.run()?;
            for e in &summary.experiments {
                let verdict = match e.pass {
                    Some(true) => "pass",
                    Some(false) => "FAIL",
                    None => "-",
                };
                println!("{:02} {:<18} {:<5} {}", e.index, e.kind, verdict, e.files.join(" "));
            }
            Ok(EXIT_OK)
        }
        Command::Weights { r } => {
            let (w, ..) = model(cli)?;
            let mut out = csv::Writer::from_writer(stdout.lock());
            out.write_record(["r", "nu", "sigma", "log_mu"])?;
            for &r in r {
                let (nu, sigma) = w.nu_sigma(r)?;
                out.write_record([r, nu, sigma, w.log_mu(r)?].map(|v| v.to_string()))?;
            }
            out.flush()?;
            Ok(EXIT_OK)
        }
        Command::Seq { n0, n1, format, output } => {
            let (_, kind, seed, _) = model(cli)?;
            let buf = generate(kind, *n0, *n1, seed)?;
            match (format, output) {
                (SeqFormat::Binary, Some(p)) => buf.write_binary(p)?,
                (SeqFormat::Binary, None) => {
                    return Err(Error::Validation(vec!["--output: required for binary format".into()]))
                }
                (SeqFormat::Csv, Some(p)) => write_csv(&buf, fs::File::create(p)?)?,
                (SeqFormat::Csv, None) => write_csv(&buf, stdout.lock())?,
            }
            Ok(EXIT_OK)
        }
        Command::Corr { x, h_max } => {
            let (_, kind, seed, _) = model(cli)?;
            let constants = match &cli.constants {
                Some(p) => FrozenConstants::parse(&fs::read_to_string(p)?)?,
                None => FrozenConstants::builtin(),
            };
            let seq = generate(kind, 0, x + h_max + 1, seed)?;
            let rows = correlation_rows(&seq, *x, *h_max, &constants)?;
            let mut out = csv::Writer::from_writer(stdout.lock());
            out.write_record(["h", "empirical", "predicted", "bound", "pass"])?;
            let opt = |v: Option<f64>| v.map_or(String::new(), |v| v.to_string());
            for r in &rows {
                out.write_record([
                    r.h.to_string(),
                    r.empirical.to_string(),
                    opt(r.predicted),
                    opt(r.bound),
                    r.pass.map_or(String::new(), |p| p.to_string()),
                ])?;
            }
            out.flush()?;
            Ok(EXIT_OK)
        }
        Command::Zeros { r, localize } => {
            let spec = series(cli, *r)?;
            let disk = Contour::circle(Complex64::new(0.0, 0.0), *r);
            match localize {
                Some(d) => write_zeros_csv(&localize_zeros(&spec, &disk, *d)?, stdout.lock())?,
                None => {
                    let rep = count_region(&spec, &disk)?;
                    let mut out = stdout.lock();
                    serde_json::to_writer_pretty(&mut out, &rep)?;
                    writeln!(out)?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Equidist { r1, r2, sectors, gauge, tau, c } => {
            let kind: GaugeKind = json_arg("gauge", gauge)?;
            kind.validate().map_err(|e| Error::Validation(vec![format!("gauge: {e}")]))?;
            if *sectors == 0 {
                return Err(Error::Validation(vec!["--sectors: must be positive".into()]));
            }
            let spec = series(cli, *r2)?;
            let g = RadialGauge::new(kind, spec.weight().clone())?;
            let rows = (0..*sectors)
                .map(|j| {
                    let k = TestRegion::AnnulusSector {
                        r1: *r1,
                        r2: *r2,
                        theta1: j as f64 / *sectors as f64,
                        theta2: (j + 1) as f64 / *sectors as f64,
                    };
                    let rep = count_region(&spec, &k.contour())?;
                    Ok(RegionCount { region: k, count: rep.count, gamma: k.gamma_mass(spec.weight())? })
                })
                .collect::<Result<Vec<_>>>()?;
            equidist_report(&rows, &g, *tau, *c)?.write_csv(stdout.lock())?;
            Ok(EXIT_OK)
        }
    }
}
