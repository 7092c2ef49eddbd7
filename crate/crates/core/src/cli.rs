//! The `shift-lock` command line.
//!
//! Every subcommand reads one JSON config (`--config <path>` or
//! `--inline <json>`) and writes one JSON document
//! `{"schema": "shift-lock/1", "run": {...}, "result": {...}}`.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::certify::{find_locking_level, soundness_check, HaarSource};
use crate::debruijn::{assign_weights, build_graph};
use crate::digraph::{DigraphJson, DirectedCycle, WeightedDigraph};
use crate::error::{Error, Result};
use crate::haar::PotentialSpec;
use crate::mean_cycle::{gap, max_mean_cycle_karp};
use crate::prevalence::{sample_brick, ExperimentConfig, Gauge, SCHEMA};
use crate::selftest::run_selftest;
use crate::symbolic::DecayModel;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NOT_MET: i32 = 3;

const DEFAULT_CERTIFY_N_MAX: usize = 8;

#[derive(Debug, Parser)]
#[command(name = "shift-lock", version, about = "Locking certificates for potentials on the full 2-shift")]
pub struct Args {
    #[command(subcommand)]
    pub command: Command,

    /// JSON config file
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// JSON config given directly on the command line
    #[arg(long, global = true, conflicts_with = "config")]
    pub inline: Option<String>,

    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Output path for the JSON result (stdout when absent)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Per-trial CSV for experiments (defaults to the --out path with a .csv extension)
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,

    /// Worker threads (defaults to the number of cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Largest level tried by certify and prevalence runs
    #[arg(long = "n-max", global = true)]
    pub n_max: Option<usize>,

    /// Progress and timing on stderr
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    /// Add wall-clock timing to the JSON output (makes it non-reproducible)
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Clone, Copy, Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Search levels 1..=n_max for a locking certificate
    Certify,
    /// Gap between the two heaviest cycle means
    Gap,
    /// Maximum mean cycle
    Mmc,
    /// Draw a Hilbert brick sample
    Sample,
    /// Run a conditional-gap, level-bound or prevalence experiment
    Experiment,
    /// Quick deterministic checks
    Selftest,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertifyConfig {
    potential: PotentialSpec,
    model: DecayModel,
    #[serde(default)]
    n_max: Option<usize>,
    /// Period bound for the brute-force soundness check, if wanted.
    #[serde(default)]
    soundness_period: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum GraphConfig {
    DeBruijn { level: usize, potential: PotentialSpec },
    Digraph(DigraphJson),
}

impl GraphConfig {
    fn build(self) -> Result<WeightedDigraph> {
        match self {
            GraphConfig::DeBruijn { level, potential } => {
                assign_weights(&build_graph(level)?, &potential.into_potential()?)
            }
            GraphConfig::Digraph(json) => WeightedDigraph::from_json(&json),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SampleConfig {
    gauge: Gauge,
    level: usize,
    #[serde(default)]
    seed: Option<u64>,
}

struct Outcome {
    result: Value,
    exit: i32,
    csv: Option<Vec<u8>>,
}

fn cycle_json(g: &WeightedDigraph, c: &DirectedCycle) -> Value {
    json!({"arcs": c.arcs(), "labels": c.labels(g), "mean": c.mean(g)})
}

fn read_config(args: &Args) -> Result<Value> {
    let text = match (&args.config, &args.inline) {
        (Some(path), _) => fs::read_to_string(path)?,
        (None, Some(inline)) => inline.clone(),
        (None, None) => return Err(Error::usage("a config is required (--config <path> or --inline <json>)")),
    };
    Ok(serde_json::from_str(&text)?)
}

fn parse<T: for<'de> Deserialize<'de>>(config: &Value) -> Result<T> {
    Ok(serde_json::from_value(config.clone())?)
}

fn dispatch(args: &Args, config: &Value) -> Result<Outcome> {
    let plain = |result: Value| Outcome { result, exit: EXIT_OK, csv: None };
    match args.command {
        Command::Certify => {
            let cfg: CertifyConfig = parse(config)?;
            let f = cfg.potential.into_potential()?;
            let n_max = args.n_max.or(cfg.n_max).unwrap_or(DEFAULT_CERTIFY_N_MAX);
            let search = find_locking_level(&f, &cfg.model, n_max)?;
            let soundness = match (&search.certificate, cfg.soundness_period) {
                (Some(cert), Some(p)) => Some(soundness_check(cert, &f as &dyn HaarSource, p)?),
                _ => None,
            };
            let certified = search.certificate.is_some() && soundness.as_ref().is_none_or(|s| s.passed);
            Ok(Outcome {
                result: json!({
                    "certified": certified,
                    "certificate": search.certificate,
                    "trace": search.trace,
                    "soundness": soundness,
                }),
                exit: if certified { EXIT_OK } else { EXIT_NOT_MET },
                csv: None,
            })
        }
        Command::Gap => {
            let g = parse::<GraphConfig>(config)?.build()?;
            let r = gap(&g)?;
            Ok(plain(json!({
                "gap": r.gap,
                "best_mean": r.best.max_mean,
                "second_mean": r.second_mean,
                "best_cycle": cycle_json(&g, &r.best.witness_cycle),
                "second_cycle": cycle_json(&g, &r.second_witness),
            })))
        }
        Command::Mmc => {
            let g = parse::<GraphConfig>(config)?.build()?;
            let r = max_mean_cycle_karp(&g)?;
            Ok(plain(json!({
                "max_mean": r.max_mean,
                "witness_cycle": cycle_json(&g, &r.witness_cycle),
                "method": r.method,
            })))
        }
        Command::Sample => {
            let cfg: SampleConfig = parse(config)?;
            let seed = args
                .seed
                .or(cfg.seed)
                .ok_or_else(|| Error::usage("sample needs a seed (--seed or \"seed\" in the config)"))?;
            Ok(plain(serde_json::to_value(sample_brick(&cfg.gauge, cfg.level, seed)?)?))
        }
        Command::Experiment => {
            let mut cfg: ExperimentConfig = parse(config)?;
            if let Some(seed) = args.seed {
                cfg.seed = seed;
            }
            if args.n_max.is_some() {
                cfg.n_max = args.n_max;
            }
            let report = cfg.run()?;
            if args.verbose > 0 {
                eprintln!("experiment finished in {:.3} s", report.wall_time.as_secs_f64());
            }
            let mut csv = Vec::new();
            report.write_csv(&mut csv)?;
            Ok(Outcome {
                exit: if report.pass == Some(false) { EXIT_NOT_MET } else { EXIT_OK },
                result: serde_json::to_value(&report)?,
                csv: Some(csv),
            })
        }
        Command::Selftest => {
            let checks = run_selftest()?;
            let pass = checks.iter().all(|c| c.pass);
            if args.verbose > 0 {
                for c in &checks {
                    eprintln!("[{}] {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
                }
            }
            Ok(Outcome {
                result: json!({"pass": pass, "checks": checks}),
                exit: if pass { EXIT_OK } else { EXIT_NOT_MET },
                csv: None,
            })
        }
    }
}

fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => fs::write(p, bytes)?,
        None => std::io::stdout().write_all(bytes)?,
    }
    Ok(())
}

fn execute(args: &Args) -> Result<i32> {
    let start = Instant::now();
    let config = match args.command {
        Command::Selftest => Value::Null,
        _ => read_config(args)?,
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(k) = args.threads {
        if k == 0 {
            return Err(Error::usage("--threads must be positive"));
        }
        pool = pool.num_threads(k);
    }
    let pool = pool
        .build()
        .map_err(|e| Error::resource(format!("thread pool: {e}")))?;
    let outcome = pool.install(|| dispatch(args, &config))?;

    let mut doc = json!({
        "schema": SCHEMA,
        "run": {
            "subcommand": args.command,
            "config_path": args.config,
            "config": config,
            "seed": args.seed,
            "out": args.out,
            "csv": args.csv,
            "threads": args.threads,
            "n_max": args.n_max,
        },
        "result": outcome.result,
    });
    let wall = start.elapsed().as_secs_f64();
    if args.timing {
        doc["timing"] = json!({"wall_seconds": wall});
    }
    if args.verbose > 0 {
        eprintln!("wall time {wall:.3} s");
    }
    let mut text = serde_json::to_vec_pretty(&doc)?;
    text.push(b'\n');
    write_output(args.out.as_deref(), &text)?;
    if let Some(csv) = outcome.csv {
        let path = args.csv.clone().or_else(|| args.out.as_ref().map(|p| p.with_extension("csv")));
        if let Some(path) = path {
            fs::write(path, csv)?;
        }
    }
    Ok(outcome.exit)
}

/// Parses `argv`, runs the subcommand and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&args) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("shift-lock: {e}");
            e.exit_code()
        }
    }
}
