//! Sequential importance resampling over the level process.

use std::time::Instant;

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;

use super::{EstimateResult, EstimatorConfig};
use crate::chain::{CutMode, LevelProcess, Particle};
use crate::error::{RcrError, Result};
use crate::graph::{DistanceMatrix, Graph};

/// Sequential importance resampling.
///
/// At every level the surviving particles are resampled (multinomially, in
/// proportion to their weights) back up to `N`. Each copy forces up every cut
/// vertex that separates its known-up vertices, since no connected completion
/// can avoid those, and pays `p` per newly forced vertex. Copies start from
/// the average weight `sum(w) / N` taken over all `N` slots, dead ones
/// counting as zero, which keeps the final mean weight unbiased.
pub fn sir<R: Rng + ?Sized>(
    g: &Graph,
    dm: &DistanceMatrix,
    cfg: &EstimatorConfig,
    rng: &mut R,
) -> Result<EstimateResult> {
    let run = sir_run(g, dm, cfg, rng)?;
    let mut out = run.result;
    let population = run.population;
    let total: f64 = population.iter().map(Particle::weight).sum();
    let squares: f64 = population.iter().map(|q| q.weight() * q.weight()).sum();
    out.estimate = total / cfg.samples as f64;
    if total > 0.0 {
        let size: f64 = population.iter().map(|q| q.weight() * q.known_up().len() as f64).sum();
        out = out
            .diag("up_fraction", size / (total * g.vertex_count() as f64))
            .diag("ess", total * total / squares);
    }
    Ok(out)
}

/// Final population of a SIR run together with the average weight applied
/// at each level.
pub(crate) struct SirRun {
    pub(crate) population: Vec<Particle>,
    #[cfg_attr(not(test), allow(dead_code))]
    pub(crate) averages: Vec<f64>,
    pub(crate) result: EstimateResult,
}

pub(crate) fn sir_run<R: Rng + ?Sized>(
    g: &Graph,
    dm: &DistanceMatrix,
    cfg: &EstimatorConfig,
    rng: &mut R,
) -> Result<SirRun> {
    cfg.validate()?;
    let start = Instant::now();
    let n = cfg.samples;
    let lp = LevelProcess::new(g, dm, cfg.radius(dm))?;
    let r_max = lp.max_radius();

    let mut population: Vec<Particle> = (0..n)
        .map(|_| lp.init_particle(cfg.p, rng))
        .filter(|particle| lp.is_feasible(particle))
        .collect();
    let mut out = EstimateResult::new(0.0, n).diag("survivors_0", population.len() as f64);
    let mut forced_total = 0usize;
    let mut averages = Vec::with_capacity(r_max as usize);

    for level in 1..=r_max {
        if population.is_empty() {
            out.wall_time = start.elapsed();
            return Ok(SirRun {
                population,
                averages,
                result: out.diag("extinct_at", level as f64),
            });
        }
        let weights: Vec<f64> = population.iter().map(Particle::weight).collect();
        let average = weights.iter().sum::<f64>() / n as f64;
        if average <= 0.0 {
            population.clear();
            break;
        }
        averages.push(average);
        let picker = WeightedIndex::new(&weights)
            .map_err(|e| RcrError::InvalidState(format!("resampling weights: {e}")))?;
        let mut picks: Vec<usize> = (0..n).map(|_| picker.sample(rng)).collect();
        picks.sort_unstable();

        let mut next = Vec::with_capacity(n);
        let mut i = 0;
        while i < picks.len() {
            let parent = &population[picks[i]];
            let copies = picks[i..].iter().take_while(|&&j| j == picks[i]).count();
            let cond = lp.required_cut_set(parent, CutMode::Separating)?;
            forced_total += cond.difference_len(parent.known_up()) * copies;
            for _ in 0..copies {
                let mut child = parent.clone().with_weight(average);
                lp.advance(&mut child, cfg.p, &cond, rng)?;
                if lp.is_feasible(&child) {
                    next.push(child);
                }
            }
            i += copies;
        }
        population = next;
        out = out.diag(format!("survivors_{level}"), population.len() as f64);
    }

    out = out.diag("mean_forced", forced_total as f64 / (n as f64 * r_max as f64));
    out.wall_time = start.elapsed();
    Ok(SirRun {
        population,
        averages,
        result: out,
    })
}
