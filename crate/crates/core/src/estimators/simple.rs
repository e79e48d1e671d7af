//! Estimators that do not use the level process: crude, conditional and
//! recursive variance reduction.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{EstimateResult, EstimatorConfig};
use crate::chain::pow_prob;
use crate::error::Result;
use crate::graph::{DistanceMatrix, Graph, VertexId, VertexSet};

/// Mean of `phi(X)` over independent up sets.
pub fn crude_mc<R: Rng + ?Sized>(
    g: &Graph,
    _dm: &DistanceMatrix,
    cfg: &EstimatorConfig,
    rng: &mut R,
) -> Result<EstimateResult> {
    cfg.validate()?;
    let start = Instant::now();
    let n = g.vertex_count();
    let mut x = VertexSet::empty(n);
    let mut hits = 0usize;
    for _ in 0..cfg.samples {
        x.clear();
        for v in g.vertices() {
            if rng.gen::<f64>() < cfg.p {
                x.insert(v);
            }
        }
        hits += g.is_connected_induced(&x) as usize;
    }
    let mut out = EstimateResult::new(hits as f64 / cfg.samples as f64, cfg.samples);
    out.wall_time = start.elapsed();
    Ok(out)
}

const UNKNOWN: u8 = 0;
const UP: u8 = 1;
const DOWN: u8 = 2;

/// Conditional Monte Carlo: reveal vertices in random order until the first
/// up vertex, grow its component, and return the probability that every
/// still-unrevealed vertex is down.
pub fn conditional_mc<R: Rng + ?Sized>(g: &Graph, cfg: &EstimatorConfig, rng: &mut R) -> Result<EstimateResult> {
    cfg.validate()?;
    let start = Instant::now();
    let n = g.vertex_count();
    let q = 1.0 - cfg.p;
    let mut order: Vec<VertexId> = g.vertices().collect();
    let mut state = vec![UNKNOWN; n];
    let mut queue: Vec<VertexId> = Vec::with_capacity(n);
    let mut total = 0.0;
    let mut size_total = 0.0;

    for _ in 0..cfg.samples {
        order.shuffle(rng);
        state.fill(UNKNOWN);
        let mut revealed = 0usize;
        let mut omega = None;
        for &v in &order {
            revealed += 1;
            if rng.gen::<f64>() < cfg.p {
                state[v.index()] = UP;
                omega = Some(v);
                break;
            }
            state[v.index()] = DOWN;
        }
        let Some(omega) = omega else {
            continue;
        };
        queue.clear();
        queue.push(omega);
        let mut size = 1usize;
        while let Some(v) = queue.pop() {
            for &w in g.neighbors(v) {
                if state[w.index()] != UNKNOWN {
                    continue;
                }
                revealed += 1;
                if rng.gen::<f64>() < cfg.p {
                    state[w.index()] = UP;
                    size += 1;
                    queue.push(w);
                } else {
                    state[w.index()] = DOWN;
                }
            }
        }
        let contribution = pow_prob(q, n - revealed);
        total += contribution;
        size_total += contribution * size as f64;
    }

    let mut out = EstimateResult::new(total / cfg.samples as f64, cfg.samples);
    if total > 0.0 {
        out = out.diag("up_fraction", size_total / (total * n as f64));
    }
    out.wall_time = start.elapsed();
    Ok(out)
}

/// Recursive variance reduction.
///
/// From a partial state with `m` unknown vertices, the all-up completion is
/// evaluated exactly (probability `p^m`) and the recursion continues from the
/// first unknown vertex (in vertex order) that fails. The recursion ends when
/// the known-up vertices can no longer be connected or nothing is unknown.
pub fn rvr<R: Rng + ?Sized>(g: &Graph, cfg: &EstimatorConfig, rng: &mut R) -> Result<EstimateResult> {
    cfg.validate()?;
    let start = Instant::now();
    let n = g.vertex_count();
    let p = cfg.p;
    let ln_p = p.ln();
    let mut total = 0.0;
    let mut depth_total = 0usize;

    for _ in 0..cfg.samples {
        let mut known_up = VertexSet::empty(n);
        let mut possible = VertexSet::full(n);
        let mut unknown: Vec<VertexId> = g.vertices().collect();
        let mut coeff = 1.0;
        let mut value = 0.0;
        loop {
            depth_total += 1;
            if let Some(root) = known_up.min() {
                if !known_up.is_subset(&g.reach_unchecked(&possible, root)) {
                    break;
                }
            }
            if unknown.is_empty() {
                value += coeff * g.is_connected_induced(&known_up) as u8 as f64;
                break;
            }
            let m = unknown.len();
            let all_up = pow_prob(p, m);
            if g.is_connected_induced(&possible) {
                value += coeff * all_up;
            }
            coeff *= 1.0 - all_up;
            // First failure at position i with P(I <= i) = (1 - p^i) / (1 - p^m).
            let u: f64 = rng.gen();
            let target = 1.0 - u * (1.0 - all_up);
            let i = ((target.ln() / ln_p).ceil() as usize).clamp(1, m);
            for &v in &unknown[..i - 1] {
                known_up.insert(v);
            }
            possible.remove(unknown[i - 1]);
            unknown.drain(..i);
        }
        total += value;
    }

    let mut out = EstimateResult::new(total / cfg.samples as f64, cfg.samples)
        .diag("mean_depth", depth_total as f64 / cfg.samples as f64);
    out.wall_time = start.elapsed();
    Ok(out)
}
