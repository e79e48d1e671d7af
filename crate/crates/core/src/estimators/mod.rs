//! Monte Carlo estimators of the residual connectedness reliability.
//!
//! Every estimator takes an [`EstimatorConfig`] and a random stream and
//! returns an [`EstimateResult`]. Estimators hold no shared state; running
//! replicates in parallel only requires giving each its own stream.

mod simple;
mod splitting;
mod sir;

pub use simple::{conditional_mc, crude_mc, rvr};
pub use sir::sir;
pub use splitting::{factors_from_survival, pilot_split_factors, sis, sis_basic, splitting};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::chain::LevelProcess;
use crate::error::{RcrError, Result};
use crate::graph::{DistanceMatrix, Graph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Crude,
    Cond,
    Rvr,
    Split,
    SisBasic,
    Sis,
    Sir,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::Crude,
        Method::Cond,
        Method::Rvr,
        Method::Split,
        Method::SisBasic,
        Method::Sis,
        Method::Sir,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Crude => "crude",
            Method::Cond => "cond",
            Method::Rvr => "rvr",
            Method::Split => "split",
            Method::SisBasic => "sis_basic",
            Method::Sis => "sis",
            Method::Sir => "sir",
        }
    }

    /// Whether the method takes per-level splitting factors.
    pub fn uses_factors(self) -> bool {
        matches!(self, Method::Split | Method::SisBasic | Method::Sis)
    }

    /// Whether the method runs the level process (and so depends on `R`).
    pub fn uses_levels(self) -> bool {
        matches!(self, Method::Split | Method::SisBasic | Method::Sis | Method::Sir)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Method {
    type Err = RcrError;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| RcrError::config(format!("unknown method {s:?}")))
    }
}

impl Serialize for Method {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Method {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let name = String::deserialize(deserializer)?;
        name.parse().map_err(serde::de::Error::custom)
    }
}

/// Parameters of one estimator run.
#[derive(Clone, Debug, PartialEq)]
pub struct EstimatorConfig {
    pub method: Method,
    pub p: f64,
    /// Maximum radius; `None` means the graph diameter.
    pub max_radius: Option<u32>,
    /// Sample count, or initial particle count for the level-process methods.
    pub samples: usize,
    /// Splitting factors `k_0..k_{R-1}`; `None` means all ones.
    pub factors: Option<Vec<u64>>,
    pub seed: u64,
}

impl EstimatorConfig {
    pub fn new(method: Method, p: f64, samples: usize) -> Self {
        EstimatorConfig {
            method,
            p,
            max_radius: None,
            samples,
            factors: None,
            seed: 0,
        }
    }

    pub fn with_radius(mut self, r: u32) -> Self {
        self.max_radius = Some(r);
        self
    }

    pub fn with_factors(mut self, factors: Vec<u64>) -> Self {
        self.factors = Some(factors);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Effective maximum radius on `dm`.
    pub fn radius(&self, dm: &DistanceMatrix) -> u32 {
        self.max_radius.unwrap_or_else(|| LevelProcess::default_radius(dm))
    }

    /// Effective splitting factors for radius `r`.
    pub fn factors_for(&self, r: u32) -> Result<Vec<u64>> {
        match &self.factors {
            None => Ok(vec![1; r as usize]),
            Some(f) if f.len() != r as usize => Err(RcrError::invalid(format!(
                "expected {r} splitting factors, got {}",
                f.len()
            ))),
            Some(f) if f.contains(&0) => Err(RcrError::invalid("splitting factors must be positive")),
            Some(f) => Ok(f.clone()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(RcrError::invalid(format!("p must lie in (0, 1), got {}", self.p)));
        }
        if self.samples == 0 {
            return Err(RcrError::invalid("sample count must be at least 1"));
        }
        if self.max_radius == Some(0) {
            return Err(RcrError::invalid("maximum radius must be at least 1"));
        }
        Ok(())
    }
}

/// Output of one estimator run.
#[derive(Clone, Debug, PartialEq)]
pub struct EstimateResult {
    pub estimate: f64,
    pub n_samples: usize,
    pub wall_time: Duration,
    /// Method-specific diagnostics, e.g. `survivors_3` or `up_fraction`.
    pub method_diag: BTreeMap<String, f64>,
}

impl EstimateResult {
    pub(crate) fn new(estimate: f64, n_samples: usize) -> Self {
        EstimateResult {
            estimate,
            n_samples,
            wall_time: Duration::ZERO,
            method_diag: BTreeMap::new(),
        }
    }

    pub(crate) fn diag(mut self, key: impl Into<String>, value: f64) -> Self {
        self.method_diag.insert(key.into(), value);
        self
    }

    pub fn diagnostic(&self, key: &str) -> Option<f64> {
        self.method_diag.get(key).copied()
    }
}

/// Runs the estimator selected by `cfg.method`.
pub fn estimate<R: Rng + ?Sized>(
    g: &Graph,
    dm: &DistanceMatrix,
    cfg: &EstimatorConfig,
    rng: &mut R,
) -> Result<EstimateResult> {
    match cfg.method {
        Method::Crude => crude_mc(g, dm, cfg, rng),
        Method::Cond => conditional_mc(g, cfg, rng),
        Method::Rvr => rvr(g, cfg, rng),
        Method::Split => splitting(g, dm, cfg, rng),
        Method::SisBasic => sis_basic(g, dm, cfg, rng),
        Method::Sis => sis(g, dm, cfg, rng),
        Method::Sir => sir(g, dm, cfg, rng),
    }
}

/// Importance-weighted mean of `|X| / n` over connected final samples.
///
/// Estimates the expected up fraction given that the up set is connected.
pub fn weighted_up_fraction<R: Rng + ?Sized>(
    g: &Graph,
    dm: &DistanceMatrix,
    cfg: &EstimatorConfig,
    rng: &mut R,
) -> Result<f64> {
    if !matches!(cfg.method, Method::Sis | Method::Sir) {
        return Err(RcrError::invalid(format!(
            "weighted up fraction needs sis or sir, got {}",
            cfg.method
        )));
    }
    let result = estimate(g, dm, cfg, rng)?;
    if result.estimate <= 0.0 {
        return Err(RcrError::UndefinedResult(
            "no connected sample carried positive weight".into(),
        ));
    }
    result
        .diagnostic("up_fraction")
        .ok_or_else(|| RcrError::UndefinedResult("estimator reported no up fraction".into()))
}
