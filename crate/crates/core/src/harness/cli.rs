//! The `rcr` command line.
//!
//! Exit codes: 0 on success, 2 on configuration or usage errors, 1 on
//! runtime failures.

use std::ffi::OsString;
use std::fs;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use super::{emit_svg, metadata, parse_config, run_and_summarize, write_csv, ExperimentSpec, GraphSpec};
use crate::error::{RcrError, Result};
use crate::estimators::{estimate, pilot_split_factors, EstimatorConfig, Method};
use crate::exact::{
    brute_force_counts, p_star, parse_probability, rcr_from_counts, tm_counts, tm_state_space, to_decimal, CountVector,
    BRUTE_FORCE_LIMIT,
};
use crate::rng::substream;

#[derive(Parser, Debug)]
#[command(name = "rcr", version, about = "Residual connectedness reliability: estimators and exact oracles")]
struct Cli {
    /// Base random seed.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Worker threads (overridden by RCR_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output directory for experiment files.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one estimator once and print the estimate with its diagnostics.
    Estimate(EstimateArgs),
    /// Exact counts and reliability by transfer matrix or brute force.
    Exact(ExactArgs),
    /// Splitting factors from a pilot run with all factors 1.
    Pilot(PilotArgs),
    /// Replicated multi-method experiment written as CSV, SVG and a metadata file.
    Experiment(ExperimentArgs),
    /// Fixed point of the conditional up fraction from a counts file.
    Pstar(PstarArgs),
}

#[derive(Args, Debug)]
struct EstimateArgs {
    /// `grid:WxH` or an edge-list file.
    #[arg(long)]
    graph: String,
    /// crude, cond, rvr, split, sis_basic, sis or sir.
    #[arg(long)]
    method: String,
    /// Probability that a vertex is up.
    #[arg(long)]
    p: f64,
    /// Initial particles or samples per run.
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    /// Maximum radius (default: graph diameter).
    #[arg(long)]
    radius: Option<u32>,
    /// Comma-separated splitting factors.
    #[arg(long, conflicts_with = "pilot")]
    factors: Option<String>,
    /// Derive splitting factors from a pilot run of the same size.
    #[arg(long)]
    pilot: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum ExactMethod {
    Tm,
    Brute,
}

#[derive(Args, Debug)]
struct ExactArgs {
    /// `grid:WxH` or an edge-list file.
    #[arg(long)]
    graph: String,
    /// Default: tm for grids, brute otherwise.
    #[arg(long, value_enum)]
    method: Option<ExactMethod>,
    /// Probability, as a decimal or a fraction `a/b`.
    #[arg(long)]
    p: Option<String>,
    /// Print the number of transfer-matrix interface states.
    #[arg(long)]
    states: bool,
    /// Print the counts even when `--p` is given.
    #[arg(long)]
    counts: bool,
    /// Counts file: read if it exists, otherwise written after computing.
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PilotArgs {
    /// `grid:WxH` or an edge-list file.
    #[arg(long)]
    graph: String,
    /// Probability that a vertex is up.
    #[arg(long)]
    p: f64,
    /// Initial particles of the pilot run.
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    /// Maximum radius (default: graph diameter).
    #[arg(long)]
    radius: Option<u32>,
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    /// Experiment file of `key = value` lines; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated graphs (`grid:WxH` or edge-list paths).
    #[arg(long)]
    graph: Option<String>,
    /// Comma-separated method names, or `all`.
    #[arg(long)]
    methods: Option<String>,
    /// Comma-separated values or `start:stop:step`.
    #[arg(long)]
    p: Option<String>,
    /// Maximum radius (default: each graph's diameter).
    #[arg(long)]
    radius: Option<u32>,
    /// Samples per run, also used for the pilot runs.
    #[arg(long)]
    samples: Option<usize>,
    /// Replicates per (graph, method, p).
    #[arg(long)]
    reps: Option<usize>,
    /// `exact-tm`, `exact-brute`, `best-method` or a positive number.
    #[arg(long)]
    reference: Option<String>,
    /// Bootstrap resamples for the RE interval (at least 100).
    #[arg(long)]
    bootstrap: Option<usize>,
}

#[derive(Args, Debug)]
struct PstarArgs {
    /// Counts file as written by `exact --cache`.
    #[arg(long)]
    counts: PathBuf,
    /// Bisection tolerance on p.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

/// Parses `args` (including the program name), runs, and returns the exit code.
pub fn cli_main<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match run(cli, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_configuration() {
                2
            } else {
                1
            }
        }
    }
}

fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Estimate(a) => cmd_estimate(a, cli.seed, out, err),
        Command::Exact(a) => cmd_exact(a, out),
        Command::Pilot(a) => cmd_pilot(a, cli.seed, out),
        Command::Experiment(a) => cmd_experiment(a, cli.seed, cli.threads, cli.out, out),
        Command::Pstar(a) => cmd_pstar(a, out),
    }
}

fn parse_factors(text: &str) -> Result<Vec<u64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| RcrError::config(format!("bad splitting factor {s:?}")))
        })
        .collect()
}

fn cmd_estimate(a: EstimateArgs, seed: u64, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let spec: GraphSpec = a.graph.parse()?;
    let g = spec.load()?;
    let dm = g.distances();
    let method: Method = a.method.parse()?;
    let mut cfg = EstimatorConfig::new(method, a.p, a.samples).with_seed(seed);
    if let Some(r) = a.radius {
        cfg = cfg.with_radius(r);
    }
    cfg.validate()?;
    if let Some(f) = &a.factors {
        cfg = cfg.with_factors(parse_factors(f)?);
    } else if a.pilot && method.uses_factors() {
        let r = cfg.radius(&dm);
        cfg = cfg.with_factors(pilot_split_factors(&g, &dm, a.p, r, a.samples, &mut substream(seed, 1))?);
    }
    let result = estimate(&g, &dm, &cfg, &mut substream(seed, 0))?;
    writeln!(out, "graph = {}", spec.label())?;
    writeln!(out, "method = {method}")?;
    writeln!(out, "p = {}", a.p)?;
    writeln!(out, "R = {}", cfg.radius(&dm))?;
    writeln!(out, "N = {}", a.samples)?;
    if let Some(f) = &cfg.factors {
        writeln!(out, "factors = {}", join(f))?;
    }
    writeln!(out, "estimate = {:e}", result.estimate)?;
    for (k, v) in &result.method_diag {
        writeln!(out, "{k} = {v}")?;
    }
    writeln!(err, "time = {:.3}s", result.wall_time.as_secs_f64())?;
    Ok(())
}

fn join(values: &[u64]) -> String {
    values.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

fn exact_counts(spec: &GraphSpec, method: ExactMethod) -> Result<CountVector> {
    match (method, spec) {
        (ExactMethod::Tm, GraphSpec::Grid { width, height }) => tm_counts(*width.min(height), *width.max(height)),
        (ExactMethod::Tm, GraphSpec::File(_)) => Err(RcrError::config("the transfer matrix needs a grid graph")),
        (ExactMethod::Brute, _) => brute_force_counts(&spec.load()?, BRUTE_FORCE_LIMIT),
    }
}

fn cmd_exact(a: ExactArgs, out: &mut dyn Write) -> Result<()> {
    let spec: GraphSpec = a.graph.parse()?;
    let method = a.method.unwrap_or(match spec {
        GraphSpec::Grid { .. } => ExactMethod::Tm,
        GraphSpec::File(_) => ExactMethod::Brute,
    });
    if a.states {
        let GraphSpec::Grid { width, height } = spec else {
            return Err(RcrError::config("--states needs a grid graph"));
        };
        writeln!(out, "{} interface states", tm_state_space(width.min(height))?.len())?;
        if a.p.is_none() && !a.counts && a.cache.is_none() {
            return Ok(());
        }
    }
    let counts = match &a.cache {
        Some(path) if path.exists() => read_counts(path)?,
        Some(path) => {
            let c = exact_counts(&spec, method)?;
            fs::write(path, c.to_text())?;
            c
        }
        None => exact_counts(&spec, method)?,
    };
    if a.counts || a.p.is_none() {
        write!(out, "{}", counts.to_text())?;
    }
    if let Some(text) = &a.p {
        let p = parse_probability(text)?;
        let value = rcr_from_counts(&counts, &p)?;
        writeln!(out, "{value} = {}", to_decimal(&value, 30))?;
    }
    Ok(())
}

fn read_counts(path: &Path) -> Result<CountVector> {
    CountVector::from_reader(BufReader::new(fs::File::open(path)?))
}

fn cmd_pilot(a: PilotArgs, seed: u64, out: &mut dyn Write) -> Result<()> {
    let spec: GraphSpec = a.graph.parse()?;
    let g = spec.load()?;
    let dm = g.distances();
    let mut cfg = EstimatorConfig::new(Method::Split, a.p, a.samples);
    if let Some(r) = a.radius {
        cfg = cfg.with_radius(r);
    }
    cfg.validate()?;
    let factors = pilot_split_factors(&g, &dm, a.p, cfg.radius(&dm), a.samples, &mut substream(seed, 1))?;
    writeln!(out, "factors = {}", join(&factors))?;
    Ok(())
}

fn cmd_experiment(
    a: ExperimentArgs,
    seed: u64,
    threads: Option<usize>,
    out_dir: Option<PathBuf>,
    out: &mut dyn Write,
) -> Result<()> {
    let mut spec = ExperimentSpec::default();
    let mut dir = out_dir;
    if let Some(path) = &a.config {
        let entries = parse_config(&fs::read_to_string(path)?)?;
        spec = ExperimentSpec::from_config(&entries)?;
        if dir.is_none() {
            dir = entries.get("out").map(PathBuf::from);
        }
    }
    spec.seed = seed;
    let flags = [
        ("graph", a.graph),
        ("methods", a.methods),
        ("p", a.p),
        ("radius", a.radius.map(|v| v.to_string())),
        ("samples", a.samples.map(|v| v.to_string())),
        ("reps", a.reps.map(|v| v.to_string())),
        ("reference", a.reference),
        ("bootstrap", a.bootstrap.map(|v| v.to_string())),
        ("threads", threads.map(|v| v.to_string())),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            spec.apply(key, &v)?;
        }
    }
    let rows = run_and_summarize(&spec)?;
    let dir = dir.unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir)?;
    let csv_path = dir.join("summary.csv");
    let svg_path = dir.join("re.svg");
    let meta_path = dir.join("summary.meta");
    write_csv(&rows, &csv_path)?;
    emit_svg(&rows, &svg_path)?;
    fs::write(&meta_path, metadata(&spec))?;
    writeln!(
        out,
        "{:>10} {:>10} {:>6} {:>13} {:>10} {:>10} {:>10}",
        "graph", "method", "p", "mean", "re", "wnrv", "time_s"
    )?;
    for r in &rows {
        writeln!(
            out,
            "{:>10} {:>10} {:>6.3} {:>13.6e} {:>10.4} {:>10.3e} {:>10.3}",
            r.graph,
            r.method.name(),
            r.p,
            r.mean,
            r.re,
            r.wnrv,
            r.time_mean_s
        )?;
    }
    writeln!(
        out,
        "wrote {}, {} and {}",
        csv_path.display(),
        svg_path.display(),
        meta_path.display()
    )?;
    Ok(())
}

fn cmd_pstar(a: PstarArgs, out: &mut dyn Write) -> Result<()> {
    let counts = read_counts(&a.counts)?;
    let result = p_star(&counts, counts.n(), a.tol)?;
    writeln!(out, "p* = {:.10}", result.value)?;
    writeln!(out, "sign changes = {}", result.sign_changes)?;
    if result.boundary {
        writeln!(out, "root on the boundary p = 1")?;
    }
    Ok(())
}
