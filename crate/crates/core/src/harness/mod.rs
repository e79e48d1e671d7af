//! Replicated experiments: run several estimators over a grid of `p` values,
//! summarize relative error and work-normalized variance, write CSV and SVG.

pub mod cli;
mod config;
mod summary;

pub use config::{parse_config, parse_p_grid, CONFIG_KEYS};
pub use summary::{bootstrap_ci, emit_svg, read_csv, summarize, write_csv, SummaryRow};

use std::collections::BTreeMap;
use std::fmt;
use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;
use std::str::FromStr;

use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::error::{RcrError, Result};
use crate::estimators::{estimate, pilot_split_factors, EstimatorConfig, Method};
use crate::exact::{brute_force_counts, parse_probability, rcr_from_counts, tm_counts, CountVector};
use crate::exact::{BRUTE_FORCE_LIMIT, MAX_TM_WIDTH};
use crate::graph::{parse_edge_list, DistanceMatrix, Graph};
use crate::rng::{key, substream};

/// Environment variable that overrides the requested worker count.
pub const THREADS_ENV: &str = "RCR_THREADS";

/// Where the graph of an experiment comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphSpec {
    Grid { width: usize, height: usize },
    File(PathBuf),
}

impl GraphSpec {
    pub fn load(&self) -> Result<Graph> {
        match self {
            GraphSpec::Grid { width, height } => Graph::grid(*width, *height),
            GraphSpec::File(path) => {
                let file = File::open(path)?;
                Ok(parse_edge_list(BufReader::new(file))?.with_name(path.display().to_string()))
            }
        }
    }

    /// Label used in output files.
    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSpec::Grid { width, height } => write!(f, "grid:{width}x{height}"),
            GraphSpec::File(path) => write!(f, "{}", path.display()),
        }
    }
}

impl FromStr for GraphSpec {
    type Err = RcrError;

    fn from_str(s: &str) -> Result<Self> {
        let Some(dims) = s.strip_prefix("grid:") else {
            return Ok(GraphSpec::File(PathBuf::from(s)));
        };
        let bad = || RcrError::config(format!("expected grid:WxH, got {s:?}"));
        let (w, h) = dims.split_once(['x', 'X']).ok_or_else(bad)?;
        let width: usize = w.trim().parse().map_err(|_| bad())?;
        let height: usize = h.trim().parse().map_err(|_| bad())?;
        if width == 0 || height == 0 {
            return Err(bad());
        }
        Ok(GraphSpec::Grid { width, height })
    }
}

/// How the reference value for RE and WNRV is obtained.
#[derive(Clone, Debug, PartialEq)]
pub enum ReferencePolicy {
    /// Transfer-matrix counts (grid graphs only).
    ExactTm,
    /// Brute-force enumeration (small graphs only).
    ExactBrute,
    /// A value supplied by the user, used for every `p`.
    External(f64),
    /// Mean of the conditional estimates for `p <= 0.25`, of SIR otherwise.
    BestMethod,
}

impl ReferencePolicy {
    /// Method whose mean serves as reference at `p` under [`ReferencePolicy::BestMethod`].
    pub fn best_method(p: f64) -> Method {
        if p <= 0.25 {
            Method::Cond
        } else {
            Method::Sir
        }
    }
}

impl fmt::Display for ReferencePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReferencePolicy::ExactTm => f.write_str("exact-tm"),
            ReferencePolicy::ExactBrute => f.write_str("exact-brute"),
            ReferencePolicy::External(v) => write!(f, "{v}"),
            ReferencePolicy::BestMethod => f.write_str("best-method"),
        }
    }
}

impl FromStr for ReferencePolicy {
    type Err = RcrError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact-tm" => Ok(ReferencePolicy::ExactTm),
            "exact-brute" => Ok(ReferencePolicy::ExactBrute),
            "best-method" => Ok(ReferencePolicy::BestMethod),
            other => {
                let v: f64 = other
                    .strip_prefix("external:")
                    .unwrap_or(other)
                    .parse()
                    .map_err(|_| RcrError::config(format!("unknown reference policy {other:?}")))?;
                if v > 0.0 && v.is_finite() {
                    Ok(ReferencePolicy::External(v))
                } else {
                    Err(RcrError::config(format!("external reference must be positive, got {v}")))
                }
            }
        }
    }
}

/// A full experiment: graphs × methods × p values × replicates.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub graphs: Vec<GraphSpec>,
    pub methods: Vec<Method>,
    pub p_grid: Vec<f64>,
    /// Maximum radius; `None` means the graph diameter.
    pub max_radius: Option<u32>,
    pub samples: usize,
    pub reps: usize,
    pub seed: u64,
    pub reference: ReferencePolicy,
    /// Worker count; `None` uses rayon's default. [`THREADS_ENV`] overrides both.
    pub threads: Option<usize>,
    /// Bootstrap resamples for the RE interval.
    pub bootstrap: usize,
}

impl Default for ExperimentSpec {
    /// The desk-scale study: 4x4 and 8x8 grids, every method, `p` from 0.10 to 0.65.
    fn default() -> Self {
        ExperimentSpec {
            graphs: vec![GraphSpec::Grid { width: 4, height: 4 }, GraphSpec::Grid { width: 8, height: 8 }],
            methods: Method::ALL.to_vec(),
            p_grid: parse_p_grid("0.10:0.65:0.05").expect("static grid"),
            max_radius: None,
            samples: 100_000,
            reps: 20,
            seed: 1,
            reference: ReferencePolicy::BestMethod,
            threads: None,
            bootstrap: 1000,
        }
    }
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.graphs.is_empty() {
            return Err(RcrError::config("no graphs selected"));
        }
        if let Some(dup) = self.graphs.iter().enumerate().find(|(i, g)| self.graphs[..*i].contains(g)) {
            return Err(RcrError::config(format!("graph {} listed twice", dup.1)));
        }
        if self.methods.is_empty() {
            return Err(RcrError::config("no methods selected"));
        }
        if self.p_grid.is_empty() {
            return Err(RcrError::config("empty p grid"));
        }
        if let Some(p) = self.p_grid.iter().find(|&&p| !(p > 0.0 && p < 1.0)) {
            return Err(RcrError::config(format!("p values must lie in (0, 1), got {p}")));
        }
        if self.reps < 2 {
            return Err(RcrError::config("at least 2 replicates are needed for a variance"));
        }
        if self.samples == 0 {
            return Err(RcrError::config("sample count must be at least 1"));
        }
        if self.max_radius == Some(0) {
            return Err(RcrError::config("maximum radius must be at least 1"));
        }
        if self.bootstrap < 100 {
            return Err(RcrError::config("bootstrap needs at least 100 resamples"));
        }
        match &self.reference {
            ReferencePolicy::ExactTm => {
                for graph in &self.graphs {
                    match graph {
                        GraphSpec::Grid { width, height } if width.min(height) <= &MAX_TM_WIDTH => {}
                        _ => {
                            return Err(RcrError::config(format!(
                                "exact-tm reference needs grids with a side of at most {MAX_TM_WIDTH}, got {graph}"
                            )))
                        }
                    }
                }
            }
            ReferencePolicy::BestMethod => {
                for &p in &self.p_grid {
                    let m = ReferencePolicy::best_method(p);
                    if !self.methods.contains(&m) {
                        return Err(RcrError::config(format!(
                            "best-method reference at p = {p} needs method {m}"
                        )));
                    }
                }
            }
            ReferencePolicy::ExactBrute | ReferencePolicy::External(_) => {}
        }
        Ok(())
    }
}

/// One estimator run inside an experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct ReplicateRecord {
    pub graph: String,
    pub method: Method,
    pub p: f64,
    pub max_radius: u32,
    pub samples: usize,
    pub rep: usize,
    pub seed: u64,
    pub estimate: f64,
    pub wall_time_s: f64,
}

/// Worker count after applying [`THREADS_ENV`].
pub fn resolve_threads(requested: Option<usize>) -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(text) if !text.trim().is_empty() => {
            let n: usize = text
                .trim()
                .parse()
                .map_err(|_| RcrError::config(format!("{THREADS_ENV} must be a positive integer, got {text:?}")))?;
            if n == 0 {
                return Err(RcrError::config(format!("{THREADS_ENV} must be positive")));
            }
            Ok(Some(n))
        }
        _ => match requested {
            Some(0) => Err(RcrError::config("thread count must be positive")),
            other => Ok(other),
        },
    }
}

fn stream_key(seed: u64, parts: &[&[u8]]) -> u64 {
    let seed_bytes = seed.to_le_bytes();
    key(std::iter::once(&seed_bytes[..]).chain(parts.iter().copied()))
}

fn pool(threads: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = resolve_threads(threads)? {
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| RcrError::config(format!("cannot start worker pool: {e}")))
}

/// Runs every (p, method, replicate) of `spec`.
///
/// Splitting factors come from one pilot run per `p`, not timed. Each
/// replicate draws from a stream keyed by seed, graph, method, `p` and
/// replicate index, so the records do not depend on the worker count.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<ReplicateRecord>> {
    spec.validate()?;
    let mut records = Vec::new();
    for graph in &spec.graphs {
        let g = graph.load()?;
        records.extend(run_on_graph(spec, graph, &g, &g.distances())?);
    }
    Ok(records)
}

fn run_on_graph(
    spec: &ExperimentSpec,
    graph: &GraphSpec,
    g: &Graph,
    dm: &DistanceMatrix,
) -> Result<Vec<ReplicateRecord>> {
    let label = graph.label();
    let radius = spec.max_radius.unwrap_or_else(|| crate::chain::LevelProcess::default_radius(dm));
    let pool = pool(spec.threads)?;
    let needs_pilot = spec.methods.iter().any(|m| m.uses_factors());

    pool.install(|| {
        let factors: Vec<Option<Vec<u64>>> = spec
            .p_grid
            .par_iter()
            .map(|&p| {
                if !needs_pilot {
                    return Ok(None);
                }
                let k = stream_key(spec.seed, &[b"pilot", label.as_bytes(), &p.to_bits().to_le_bytes()]);
                pilot_split_factors(g, dm, p, radius, spec.samples, &mut substream(k, 0)).map(Some)
            })
            .collect::<Result<_>>()?;

        let jobs: Vec<(usize, Method, usize)> = (0..spec.p_grid.len())
            .flat_map(|pi| {
                spec.methods
                    .iter()
                    .flat_map(move |&m| (0..spec.reps).map(move |rep| (pi, m, rep)))
            })
            .collect();

        jobs.par_iter()
            .map(|&(pi, method, rep)| {
                let p = spec.p_grid[pi];
                let mut cfg = EstimatorConfig::new(method, p, spec.samples)
                    .with_radius(radius)
                    .with_seed(spec.seed);
                if method.uses_factors() {
                    if let Some(f) = &factors[pi] {
                        cfg = cfg.with_factors(f.clone());
                    }
                }
                let k = stream_key(
                    spec.seed,
                    &[label.as_bytes(), method.name().as_bytes(), &p.to_bits().to_le_bytes()],
                );
                let out = estimate(g, dm, &cfg, &mut substream(k, rep as u64))?;
                Ok(ReplicateRecord {
                    graph: label.clone(),
                    method,
                    p,
                    max_radius: radius,
                    samples: spec.samples,
                    rep,
                    seed: spec.seed,
                    estimate: out.estimate,
                    wall_time_s: out.wall_time.as_secs_f64(),
                })
            })
            .collect()
    })
}

fn exact_reference(counts: &CountVector, p: f64) -> Result<f64> {
    let value = rcr_from_counts(counts, &parse_probability(&p.to_string())?)?;
    value
        .to_f64()
        .ok_or_else(|| RcrError::UndefinedResult("reference does not fit a float".into()))
}

/// Reference value per `p` (keyed by the bit pattern of `p`) for one graph
/// of the experiment; `records` are that graph's replicates.
pub fn references(
    spec: &ExperimentSpec,
    graph: &GraphSpec,
    g: &Graph,
    records: &[ReplicateRecord],
) -> Result<BTreeMap<u64, f64>> {
    let counts = match (&spec.reference, graph) {
        (ReferencePolicy::ExactTm, GraphSpec::Grid { width, height }) => {
            Some(tm_counts(*width.min(height), *width.max(height))?)
        }
        (ReferencePolicy::ExactTm, _) => return Err(RcrError::config("exact-tm reference needs a grid graph")),
        (ReferencePolicy::ExactBrute, _) => Some(
            brute_force_counts(g, BRUTE_FORCE_LIMIT).map_err(|e| RcrError::config(format!("exact-brute reference: {e}")))?,
        ),
        _ => None,
    };
    let mut out = BTreeMap::new();
    for &p in &spec.p_grid {
        let value = match (&spec.reference, &counts) {
            (_, Some(c)) => exact_reference(c, p)?,
            (ReferencePolicy::External(v), _) => *v,
            _ => {
                let m = ReferencePolicy::best_method(p);
                let xs: Vec<f64> = records
                    .iter()
                    .filter(|r| r.method == m && r.p == p)
                    .map(|r| r.estimate)
                    .collect();
                if xs.is_empty() {
                    return Err(RcrError::config(format!("no {m} runs at p = {p} to use as reference")));
                }
                xs.iter().sum::<f64>() / xs.len() as f64
            }
        };
        if value <= 0.0 {
            return Err(RcrError::config(format!("reference at p = {p} is not positive")));
        }
        out.insert(p.to_bits(), value);
    }
    Ok(out)
}

/// Settings of a summary as `key = value` lines, including how the RE
/// interval was computed.
pub fn metadata(spec: &ExperimentSpec) -> String {
    let join = |items: Vec<String>| items.join(",");
    let mut lines = vec![
        ("version", env!("CARGO_PKG_VERSION").to_string()),
        ("graphs", join(spec.graphs.iter().map(GraphSpec::label).collect())),
        ("methods", join(spec.methods.iter().map(|m| m.name().to_string()).collect())),
        ("p", join(spec.p_grid.iter().map(|p| p.to_string()).collect())),
        ("radius", spec.max_radius.map_or("diameter".into(), |r| r.to_string())),
        ("samples", spec.samples.to_string()),
        ("reps", spec.reps.to_string()),
        ("seed", spec.seed.to_string()),
        ("reference", spec.reference.to_string()),
        ("pilot", "one split run per graph and p with all factors 1, same N".into()),
        ("ci", "percentile bootstrap of re over replicates".into()),
        ("ci_level", (1.0 - summary::ALPHA).to_string()),
        ("bootstrap", spec.bootstrap.to_string()),
    ];
    if spec.reference == ReferencePolicy::BestMethod {
        lines.push(("best_method", "cond for p <= 0.25, sir above".into()));
    }
    lines.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
}

/// Runs the experiment and summarizes every (graph, method, p) cell.
pub fn run_and_summarize(spec: &ExperimentSpec) -> Result<Vec<SummaryRow>> {
    spec.validate()?;
    let mut rows = Vec::new();
    for graph in &spec.graphs {
        let g = graph.load()?;
        let records = run_on_graph(spec, graph, &g, &g.distances())?;
        let refs = references(spec, graph, &g, &records)?;
        for &p in &spec.p_grid {
            let cell: Vec<ReplicateRecord> = records.iter().filter(|r| r.p == p).cloned().collect();
            rows.extend(summarize(&cell, refs[&p.to_bits()], spec.bootstrap)?);
        }
    }
    Ok(rows)
}
