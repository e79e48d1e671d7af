//! Fixed-factor splitting over the level process, with optional importance
//! sampling of the final level.

use std::time::Instant;

use rand::Rng;

use super::{EstimateResult, EstimatorConfig, Method};
use crate::chain::{CutMode, LevelProcess, Particle};
use crate::error::{RcrError, Result};
use crate::graph::{biconnected_components, cut_vertices, DistanceMatrix, Graph, VertexSet};

/// Runs the splitting tree from level 0 to `last`, handing every feasible
/// particle that reaches `last` to `visit`. Returns survivor counts per level.
///
/// Each initial particle's tree is explored depth first, so memory stays
/// proportional to `R * max k` rather than to the population size.
fn split_tree<R, F>(
    lp: &LevelProcess<'_>,
    p: f64,
    factors: &[u64],
    samples: usize,
    last: u32,
    rng: &mut R,
    mut visit: F,
) -> Result<Vec<u64>>
where
    R: Rng + ?Sized,
    F: FnMut(&Particle, &mut R) -> Result<()>,
{
    let none = lp.graph().empty_set();
    let mut survivors = vec![0u64; last as usize + 1];
    let mut stack: Vec<Particle> = Vec::new();
    for _ in 0..samples {
        let root = lp.init_particle(p, rng);
        if !lp.is_feasible(&root) {
            continue;
        }
        survivors[0] += 1;
        if last == 0 {
            visit(&root, rng)?;
            continue;
        }
        stack.push(root);
        while let Some(parent) = stack.pop() {
            let level = parent.level();
            for _ in 0..factors[level as usize] {
                let mut child = parent.clone();
                lp.advance(&mut child, p, &none, rng)?;
                if !lp.is_feasible(&child) {
                    continue;
                }
                survivors[level as usize + 1] += 1;
                if level + 1 == last {
                    visit(&child, rng)?;
                } else {
                    stack.push(child);
                }
            }
        }
    }
    Ok(survivors)
}

fn total_effort(samples: usize, factors: &[u64]) -> Result<f64> {
    let total = factors
        .iter()
        .try_fold(samples as u64, |acc, &k| acc.checked_mul(k))
        .ok_or_else(|| RcrError::invalid("N times the product of splitting factors overflows 64 bits"))?;
    Ok(total as f64)
}

struct Setup<'a> {
    lp: LevelProcess<'a>,
    factors: Vec<u64>,
    effort: f64,
}

fn setup<'a>(g: &'a Graph, dm: &'a DistanceMatrix, cfg: &EstimatorConfig) -> Result<Setup<'a>> {
    cfg.validate()?;
    let r = cfg.radius(dm);
    let lp = LevelProcess::new(g, dm, r)?;
    let factors = cfg.factors_for(r)?;
    let effort = total_effort(cfg.samples, &factors)?;
    Ok(Setup { lp, factors, effort })
}

fn finish(estimate: f64, samples: usize, survivors: &[u64], mass: f64, size_mass: f64, n: usize) -> EstimateResult {
    let mut out = EstimateResult::new(estimate, samples);
    for (r, &s) in survivors.iter().enumerate() {
        out = out.diag(format!("survivors_{r}"), s as f64);
    }
    if mass > 0.0 {
        out = out.diag("up_fraction", size_mass / (mass * n as f64));
    }
    out
}

/// Fixed splitting: the fraction of splitting-tree leaves that end connected.
pub fn splitting<R: Rng + ?Sized>(
    g: &Graph,
    dm: &DistanceMatrix,
    cfg: &EstimatorConfig,
    rng: &mut R,
) -> Result<EstimateResult> {
    let start = Instant::now();
    let s = setup(g, dm, cfg)?;
    let r = s.lp.max_radius();
    let mut size_mass = 0.0;
    let survivors = split_tree(&s.lp, cfg.p, &s.factors, cfg.samples, r, rng, |particle, _| {
        size_mass += particle.known_up().len() as f64;
        Ok(())
    })?;
    let hits = survivors[r as usize] as f64;
    let mut out = finish(hits / s.effort, cfg.samples, &survivors, hits, size_mass, g.vertex_count());
    out.wall_time = start.elapsed();
    Ok(out)
}

/// Splitting up to level `R - 1`, then `k_{R-1}` completions per particle with
/// every cut vertex of the possible set forced up and weighted accordingly.
pub fn sis_basic<R: Rng + ?Sized>(
    g: &Graph,
    dm: &DistanceMatrix,
    cfg: &EstimatorConfig,
    rng: &mut R,
) -> Result<EstimateResult> {
    let start = Instant::now();
    let s = setup(g, dm, cfg)?;
    let r = s.lp.max_radius();
    let k_last = s.factors[r as usize - 1];
    let (mut mass, mut size_mass) = (0.0, 0.0);
    let lp = &s.lp;
    let survivors = split_tree(lp, cfg.p, &s.factors, cfg.samples, r - 1, rng, |particle, rng| {
        let cut = lp.required_cut_set(particle, CutMode::All)?;
        for _ in 0..k_last {
            let mut child = particle.clone();
            lp.advance(&mut child, cfg.p, &cut, rng)?;
            if g.is_connected_induced(child.known_up()) {
                mass += child.weight();
                size_mass += child.weight() * child.known_up().len() as f64;
            }
        }
        Ok(())
    })?;
    let mut out = finish(mass / s.effort, cfg.samples, &survivors, mass, size_mass, g.vertex_count());
    out.wall_time = start.elapsed();
    Ok(out)
}

/// Largest `m` with `m^j <= k`.
pub(crate) fn int_root(k: u64, j: usize) -> u64 {
    if j <= 1 {
        return k;
    }
    let fits = |m: u64| -> bool {
        let mut acc: u128 = 1;
        for _ in 0..j {
            acc *= m as u128;
            if acc > k as u128 {
                return false;
            }
        }
        true
    };
    let mut m = (k as f64).powf(1.0 / j as f64).floor() as u64;
    while m > 0 && !fits(m) {
        m -= 1;
    }
    while fits(m + 1) {
        m += 1;
    }
    m
}

/// As [`sis_basic`], but the final level exploits the block structure of
/// the possible set: with every cut vertex up, the outcome is connected iff
/// each biconnected block is, and blocks are independent. `m` joint samples
/// therefore yield `m^J` block combinations; the `k - m^J` leftover attempts
/// are scored directly.
pub fn sis<R: Rng + ?Sized>(
    g: &Graph,
    dm: &DistanceMatrix,
    cfg: &EstimatorConfig,
    rng: &mut R,
) -> Result<EstimateResult> {
    let start = Instant::now();
    let s = setup(g, dm, cfg)?;
    let r = s.lp.max_radius();
    let k_last = s.factors[r as usize - 1];
    let (mut mass, mut size_mass) = (0.0, 0.0);
    let mut block_total = 0usize;
    let mut particles = 0usize;
    let lp = &s.lp;
    let survivors = split_tree(lp, cfg.p, &s.factors, cfg.samples, r - 1, rng, |particle, rng| {
        let comp = lp.possible_component(particle)?;
        if comp != particle.possible() {
            return Err(RcrError::InvalidState(
                "possible set is disconnected at the second-to-last level".into(),
            ));
        }
        particles += 1;
        if comp.len() == 1 {
            mass += k_last as f64;
            size_mass += k_last as f64;
            return Ok(());
        }
        let blocks = biconnected_components(g, &comp)?;
        let cut = cut_vertices(g, &comp)?;
        let private: Vec<VertexSet> = blocks.iter().map(|b| b.difference(&cut)).collect();
        block_total += blocks.len();
        let m = int_root(k_last, blocks.len());
        let mut count = vec![0.0f64; blocks.len()];
        let mut size = vec![0.0f64; blocks.len()];
        let mut weight = 1.0;
        for _ in 0..m {
            let mut child = particle.clone();
            lp.advance(&mut child, cfg.p, &cut, rng)?;
            weight = child.weight();
            let x = child.known_up();
            for (j, block) in blocks.iter().enumerate() {
                if g.is_connected_induced(&x.intersection(block)) {
                    count[j] += 1.0;
                    size[j] += x.intersection(&private[j]).len() as f64;
                }
            }
        }
        let (mut resid, mut resid_size) = (0.0, 0.0);
        let combos = m.pow(blocks.len() as u32);
        for _ in combos..k_last {
            let mut child = particle.clone();
            lp.advance(&mut child, cfg.p, &cut, rng)?;
            weight = child.weight();
            if g.is_connected_induced(child.known_up()) {
                resid += 1.0;
                resid_size += child.known_up().len() as f64;
            }
        }
        let product: f64 = count.iter().product();
        let mut combo_size = cut.len() as f64 * product;
        for (j, s) in size.iter().enumerate() {
            let others: f64 = count.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, c)| c).product();
            combo_size += s * others;
        }
        mass += weight * (product + resid);
        size_mass += weight * (combo_size + resid_size);
        Ok(())
    })?;
    let mut out = finish(mass / s.effort, cfg.samples, &survivors, mass, size_mass, g.vertex_count());
    if particles > 0 {
        out = out.diag("mean_blocks", block_total as f64 / particles as f64);
    }
    out.wall_time = start.elapsed();
    Ok(out)
}

/// Splitting factors `max(1, round(1 / rho))` from per-transition survival
/// fractions; a fraction of zero (no survivors) gives factor 1.
pub fn factors_from_survival(fractions: &[f64]) -> Vec<u64> {
    fractions
        .iter()
        .map(|&rho| {
            if rho > 0.0 {
                ((1.0 / rho).round() as u64).max(1)
            } else {
                1
            }
        })
        .collect()
}

/// Pilot run of splitting with all factors 1. The factor applied when moving
/// from level `r` to `r + 1` is the reciprocal of the survival fraction
/// observed over that transition, which keeps the population roughly level.
pub fn pilot_split_factors<R: Rng + ?Sized>(
    g: &Graph,
    dm: &DistanceMatrix,
    p: f64,
    max_radius: u32,
    samples: usize,
    rng: &mut R,
) -> Result<Vec<u64>> {
    let cfg = EstimatorConfig::new(Method::Split, p, samples).with_radius(max_radius);
    let result = splitting(g, dm, &cfg, rng)?;
    let survivors: Vec<f64> = (0..=max_radius)
        .map(|r| result.diagnostic(&format!("survivors_{r}")).unwrap_or(0.0))
        .collect();
    let fractions: Vec<f64> = survivors
        .windows(2)
        .map(|w| if w[0] > 0.0 { w[1] / w[0] } else { 0.0 })
        .collect();
    Ok(factors_from_survival(&fractions))
}
