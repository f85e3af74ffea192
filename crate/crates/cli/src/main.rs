//! Command-line front end for the rate-sweep experiments.
//!
//! Settings resolve in precedence order: CLI flag, then config file, then
//! the `PRODSUP_SEED` environment variable (seed only), then built-in
//! defaults.  Output is a fixed-schema CSV plus an optional plot-script
//! companion file.

use std::collections::HashMap;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::Parser;

use prodsup::experiments::{self, Experiment, SweepSpec};
use prodsup::{McSettings, SystemConfig};

const DEFAULT_N_DYNAMIC: usize = 2;
const DEFAULT_N_STATIC: usize = 4;
const DEFAULT_T_DYNAMIC: usize = 5;
const DEFAULT_SNR_DB: f64 = 10.0;
const DEFAULT_SNR_GRID: &str = "-20:30:5";
const DEFAULT_NS_GRID: &str = "2,4,8,16";
const DEFAULT_TD_GRID: &str = "4,5,8,10,20";
const DEFAULT_SAMPLES: usize = 10_000;

#[derive(Parser, Debug)]
#[command(
    name = "prodsup",
    version,
    about = "Rate sweeps for pilot-based product superposition against a TDMA baseline"
)]
struct Args {
    /// Plain-text config file of `key = value` lines (# starts a comment);
    /// CLI flags override file values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// One of: rate_vs_snr, antenna_sweep, coherence_sweep, ic_compare, region.
    #[arg(long)]
    experiment: Option<String>,
    /// Dynamic-user antennas N_d.
    #[arg(long)]
    nd: Option<usize>,
    /// Static-user antennas N_s.
    #[arg(long)]
    ns: Option<usize>,
    /// Dynamic coherence time T_d in symbols.
    #[arg(long)]
    td: Option<usize>,
    /// Operating SNR in dB for the fixed-SNR sweeps.
    #[arg(long = "snr-db")]
    snr_db: Option<f64>,
    /// SNR grid in dB, as min:max:step.
    #[arg(long = "snr-grid")]
    snr_grid: Option<String>,
    /// Static-antenna grid for antenna_sweep, comma-separated.
    #[arg(long = "ns-grid")]
    ns_grid: Option<String>,
    /// Coherence-time grid for coherence_sweep, comma-separated.
    #[arg(long = "td-grid")]
    td_grid: Option<String>,
    /// Monte Carlo samples per expectation.
    #[arg(long)]
    samples: Option<usize>,
    /// Root seed (defaults to $PRODSUP_SEED, then 0).
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV path (defaults to <experiment>.csv).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for the Monte Carlo engine; results do not depend on it.
    #[arg(long)]
    workers: Option<usize>,
    /// Also write a plot-script file at this path.
    #[arg(long = "plot-script")]
    plot_script: Option<PathBuf>,
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(summary) => {
            eprintln!("{summary}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            // single machine-readable line
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(args: Args) -> Result<String> {
    let file = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("cannot read config file {}", path.display()))?;
            parse_config_file(&text)?
        }
        None => HashMap::new(),
    };

    let experiment_name = args
        .experiment
        .clone()
        .or_else(|| file.get("experiment").cloned())
        .ok_or_else(|| anyhow!("no experiment selected (use --experiment or a config file)"))?;
    let experiment = Experiment::from_name(&experiment_name)
        .ok_or_else(|| anyhow!("unknown experiment '{experiment_name}'"))?;

    let nd = resolve(args.nd, &file, "nd", DEFAULT_N_DYNAMIC)?;
    let ns = resolve(args.ns, &file, "ns", DEFAULT_N_STATIC)?;
    let td = resolve(args.td, &file, "td", DEFAULT_T_DYNAMIC)?;
    let cfg = SystemConfig::new(nd, ns, td)?;

    let snr_db = resolve(args.snr_db, &file, "snr_db", DEFAULT_SNR_DB)?;
    let samples = resolve(args.samples, &file, "samples", DEFAULT_SAMPLES)?;
    let seed = match resolve_opt::<u64>(args.seed, &file, "seed")? {
        Some(seed) => seed,
        None => match std::env::var("PRODSUP_SEED") {
            Ok(text) => text
                .parse()
                .with_context(|| format!("PRODSUP_SEED='{text}' is not a valid u64 seed"))?,
            Err(_) => 0,
        },
    };
    let workers = resolve_opt(args.workers, &file, "workers")?;

    let mut spec = SweepSpec {
        experiment,
        cfg,
        snr_db,
        snr_db_grid: vec![],
        n_static_grid: vec![],
        t_grid: vec![],
        mc: McSettings { workers, ..McSettings::new(samples, seed) },
        output_path: args
            .out
            .or_else(|| file.get("out").map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(format!("{}.csv", experiment.name()))),
    };
    match experiment {
        Experiment::RateVsSnr | Experiment::IcCompare | Experiment::Region => {
            let text = args
                .snr_grid
                .or_else(|| file.get("snr_grid").cloned())
                .unwrap_or_else(|| DEFAULT_SNR_GRID.to_string());
            spec.snr_db_grid = parse_snr_grid(&text)?;
        }
        Experiment::AntennaSweep => {
            let text = args
                .ns_grid
                .or_else(|| file.get("ns_grid").cloned())
                .unwrap_or_else(|| DEFAULT_NS_GRID.to_string());
            spec.n_static_grid = parse_usize_list(&text).context("invalid ns_grid")?;
        }
        Experiment::CoherenceSweep => {
            let text = args
                .td_grid
                .or_else(|| file.get("td_grid").cloned())
                .unwrap_or_else(|| DEFAULT_TD_GRID.to_string());
            spec.t_grid = parse_usize_list(&text).context("invalid td_grid")?;
        }
    }

    let rows = experiments::run(&spec)?;
    experiments::write_csv(&rows, &spec.output_path)?;

    if let Some(path) = args.plot_script.or_else(|| file.get("plot_script").map(PathBuf::from)) {
        let script = experiments::plot_script(experiment, &spec.output_path.display().to_string());
        std::fs::write(&path, script)
            .with_context(|| format!("cannot write plot script {}", path.display()))?;
    }

    Ok(format!(
        "wrote {} rows to {} (experiment {}, seed {seed}, {samples} samples)",
        rows.len(),
        spec.output_path.display(),
        experiment.name(),
    ))
}

/// Flag value, else config-file value, else the default.
fn resolve<T: std::str::FromStr>(
    flag: Option<T>,
    file: &HashMap<String, String>,
    key: &str,
    default: T,
) -> Result<T>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    Ok(resolve_opt(flag, file, key)?.unwrap_or(default))
}

fn resolve_opt<T: std::str::FromStr>(
    flag: Option<T>,
    file: &HashMap<String, String>,
    key: &str,
) -> Result<Option<T>>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    if flag.is_some() {
        return Ok(flag);
    }
    match file.get(key) {
        Some(text) => {
            let value = text
                .parse()
                .with_context(|| format!("config key '{key}': cannot parse '{text}'"))?;
            Ok(Some(value))
        }
        None => Ok(None),
    }
}

/// `key = value` lines; `#` starts a comment; blank lines ignored.
fn parse_config_file(text: &str) -> Result<HashMap<String, String>> {
    let mut map = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("config line {}: expected 'key = value'", idx + 1))?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

/// `min:max:step` in dB, endpoints inclusive (up to rounding of the step).
fn parse_snr_grid(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        bail!("snr grid '{text}' must be min:max:step");
    }
    let min: f64 = parts[0].trim().parse().context("bad snr grid min")?;
    let max: f64 = parts[1].trim().parse().context("bad snr grid max")?;
    let step: f64 = parts[2].trim().parse().context("bad snr grid step")?;
    if !(step > 0.0) || max < min {
        bail!("snr grid '{text}' needs step > 0 and max >= min");
    }
    let count = ((max - min) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|k| min + step * k as f64).collect())
}

fn parse_usize_list(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .with_context(|| format!("bad list entry '{}'", part.trim()))
        })
        .collect()
}
