//! Flat `key = value` experiment files. Keys mirror the command-line flags.

use std::collections::BTreeMap;

use super::ExperimentSpec;
use crate::error::{RcrError, Result};
use crate::estimators::Method;

/// Keys accepted in an experiment file.
pub const CONFIG_KEYS: [&str; 11] = [
    "graph", "methods", "p", "radius", "samples", "reps", "seed", "reference", "threads", "bootstrap", "out",
];

/// Parses a `p` list: comma-separated values, or `start:stop:step` (inclusive).
pub fn parse_p_grid(text: &str) -> Result<Vec<f64>> {
    let bad = |what: &str| RcrError::config(format!("bad p grid {text:?}: {what}"));
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad(s.trim()));
    let values = if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected start:stop:step"));
        }
        let (start, stop, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if step <= 0.0 || stop < start {
            return Err(bad("step must be positive and stop >= start"));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9)
            .collect()
    } else {
        text.split(',').filter(|s| !s.trim().is_empty()).map(num).collect::<Result<Vec<_>>>()?
    };
    if values.is_empty() {
        return Err(bad("no values"));
    }
    Ok(values)
}

fn number<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| RcrError::config(format!("{key}: cannot parse {value:?}")))
}

/// Reads `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| RcrError::config(format!("line {}: expected key = value", i + 1)))?;
        let k = k.trim().to_string();
        if !CONFIG_KEYS.contains(&k.as_str()) {
            return Err(RcrError::config(format!("line {}: unknown key {k:?}", i + 1)));
        }
        if out.insert(k.clone(), v.trim().to_string()).is_some() {
            return Err(RcrError::config(format!("line {}: duplicate key {k:?}", i + 1)));
        }
    }
    Ok(out)
}

impl ExperimentSpec {
    /// Sets one field from its textual form. `out` is not a spec field and is ignored.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "graph" => {
                self.graphs = value
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| s.trim().parse())
                    .collect::<Result<Vec<_>>>()?
            }
            "methods" => {
                self.methods = if value.trim() == "all" {
                    Method::ALL.to_vec()
                } else {
                    value
                        .split(',')
                        .filter(|s| !s.trim().is_empty())
                        .map(|s| s.trim().parse())
                        .collect::<Result<Vec<_>>>()?
                }
            }
            "p" => self.p_grid = parse_p_grid(value)?,
            "radius" => self.max_radius = Some(number(key, value)?),
            "samples" => self.samples = number(key, value)?,
            "reps" => self.reps = number(key, value)?,
            "seed" => self.seed = number(key, value)?,
            "reference" => self.reference = value.trim().parse()?,
            "threads" => self.threads = Some(number(key, value)?),
            "bootstrap" => self.bootstrap = number(key, value)?,
            "out" => {}
            other => return Err(RcrError::config(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    /// Default spec overridden by every entry of a parsed experiment file.
    pub fn from_config(entries: &BTreeMap<String, String>) -> Result<Self> {
        let mut spec = ExperimentSpec::default();
        for (k, v) in entries {
            spec.apply(k, v)?;
        }
        Ok(spec)
    }
}
