//! Checks shared by the integration tests and the acceptance runner.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rcr::chain::{CutMode, LevelProcess, SubsetValue};
use rcr::estimators::{estimate, pilot_split_factors, EstimatorConfig, Method};
use rcr::exact::{brute_force_counts, parse_probability, rcr_from_counts, BRUTE_FORCE_LIMIT};
use rcr::graph::biconnected_components;
use rcr::rng::{key, substream};
use rcr::{Graph, VertexSet};

/// Violation counts of the level-process properties over `samples` random
/// up sets per maximum radius.
#[derive(Debug, Default)]
pub struct ChainReport {
    pub checked: usize,
    pub sandwich: usize,
    pub minimum: usize,
    pub recovery: usize,
    pub idempotence: usize,
}

impl ChainReport {
    pub fn total(&self) -> usize {
        self.sandwich + self.minimum + self.recovery + self.idempotence
    }
}

pub fn chain_properties(g: &Graph, radii: &[u32], samples: usize, seed: u64) -> ChainReport {
    let dm = g.distances();
    let n = g.vertex_count();
    let mut report = ChainReport::default();
    let none = g.empty_set();
    for &big_r in radii {
        let lp = LevelProcess::new(g, &dm, big_r).unwrap();
        let mut rng = substream(seed, big_r as u64);
        for _ in 0..samples {
            report.checked += 1;
            let (mut particle, first) = lp.init_particle_traced(0.5, &mut rng);
            let mut trace = vec![first];
            if particle.is_alive() {
                for level in 1..=big_r {
                    trace.push(lp.advance(&mut particle, 0.5, &none, &mut rng).unwrap());
                    let d = particle.known_up();
                    let ok = (0..=level).all(|s| lp.generate_subset(d, s) == trace[s as usize])
                        && lp.possible_set(d, level) == particle.known_down().complement();
                    report.recovery += !ok as usize;
                }
            } else if !particle.known_up().is_empty() {
                report.recovery += 1;
            }
            // Once fully advanced the particle has revealed every vertex.
            let x = if particle.is_alive() { particle.known_up().clone() } else { VertexSet::empty(n) };
            if particle.is_alive() && particle.known_down() != &x.complement() {
                report.recovery += 1;
            }
            for r in 0..=big_r {
                let l = lp.generate_subset(&x, r);
                let l_set = l.to_set(n);
                if !(l_set.is_subset(&x) && x.is_subset(&lp.up_set(&l, r))) {
                    report.sandwich += 1;
                }
                if l_set.min() != x.min() {
                    report.minimum += 1;
                }
                let mut ok = lp.generate_subset(&l_set, r) == l;
                let keep: Vec<_> = l.vertices().iter().copied().filter(|_| rng.gen::<bool>()).collect();
                let sub = SubsetValue::new(keep);
                ok &= lp.generate_subset(&sub.to_set(n), r) == sub;
                report.idempotence += !ok as usize;
            }
        }
    }
    report
}

fn weight(p: &BigRational, size: usize, n: usize) -> BigRational {
    let mut w = BigRational::one();
    let q = BigRational::one() - p;
    for _ in 0..size {
        w *= p;
    }
    for _ in size..n {
        w *= &q;
    }
    w
}

/// Compares the closed-form scan probabilities with exact summation over all
/// subsets. Returns (values checked, mismatches).
pub fn kernel_mismatches(g: &Graph, big_r: u32, probs: &[&str]) -> (usize, usize) {
    let dm = g.distances();
    let n = g.vertex_count();
    let lp = LevelProcess::new(g, &dm, big_r).unwrap();
    let (mut checked, mut bad) = (0, 0);
    for text in probs {
        let p = parse_probability(text).unwrap();
        let pf = p.to_f64().unwrap();
        for r in 0..=big_r {
            let mut sums: HashMap<SubsetValue, BigRational> = HashMap::new();
            for mask in 0u64..(1 << n) {
                let x = VertexSet::from_mask(n, mask);
                *sums.entry(lp.generate_subset(&x, r)).or_insert_with(BigRational::zero) +=
                    weight(&p, x.len(), n);
            }
            for (l, total) in &sums {
                checked += 1;
                let exact = lp.subset_probability_exact(l, r, &p);
                let float = lp.subset_probability(l, r, pf);
                if &exact != total || (float - total.to_f64().unwrap()).abs() > 1e-12 {
                    bad += 1;
                }
            }
        }
    }
    (checked, bad)
}

/// Empirical one-step law of `advance` against brute-force conditionals.
#[derive(Debug, Default)]
pub struct TransitionReport {
    pub starts: usize,
    pub outcomes: usize,
    pub failures: usize,
    pub worst_z: f64,
}

pub fn transition_law(g: &Graph, big_r: u32, from_level: u32, samples: usize, seed: u64) -> TransitionReport {
    let dm = g.distances();
    let n = g.vertex_count();
    let lp = LevelProcess::new(g, &dm, big_r).unwrap();
    let p = 0.5f64;
    let uniform = 0.5f64.powi(n as i32);
    let mut start_mass: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
    let mut joint: BTreeMap<(Vec<usize>, Vec<usize>), f64> = BTreeMap::new();
    for mask in 0u64..(1 << n) {
        let x = VertexSet::from_mask(n, mask);
        let d0 = lp.definite_set(&x, from_level).to_vec();
        let d1 = lp.definite_set(&x, from_level + 1).to_vec();
        *start_mass.entry(d0.clone()).or_default() += uniform;
        *joint.entry((d0, d1)).or_default() += uniform;
    }
    let mut report = TransitionReport::default();
    let none = g.empty_set();
    for (si, (d0, mass)) in start_mass.iter().enumerate() {
        let start = lp.particle_at(&VertexSet::from_indices(n, d0.iter().copied()), from_level);
        if !lp.is_feasible(&start) {
            continue;
        }
        report.starts += 1;
        let mut rng = substream(seed, si as u64);
        let mut freq: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for _ in 0..samples {
            let next = lp.advance_particle(&start, p, &none, &mut rng).unwrap();
            *freq.entry(next.known_up().to_vec()).or_default() += 1;
        }
        let expected: BTreeMap<&Vec<usize>, f64> = joint
            .iter()
            .filter(|((a, _), _)| a == d0)
            .map(|((_, b), w)| (b, w / mass))
            .collect();
        if freq.keys().any(|outcome| !expected.contains_key(outcome)) {
            report.failures += 1;
            report.worst_z = f64::INFINITY;
        }
        for (outcome, q) in expected {
            report.outcomes += 1;
            let observed = *freq.get(outcome).unwrap_or(&0) as f64 / samples as f64;
            let sigma = (q * (1.0 - q) / samples as f64).sqrt();
            let z = if sigma > 0.0 { (observed - q).abs() / sigma } else if observed == q { 0.0 } else { f64::INFINITY };
            report.worst_z = report.worst_z.max(z);
            if z > 4.0 {
                report.failures += 1;
            }
        }
    }
    report
}

/// Exhaustive check of the cut-vertex and block conditions at level `R - 1`.
#[derive(Debug, Default)]
pub struct ConditioningReport {
    pub particles: usize,
    pub completions: usize,
    /// Connected completions missing a required cut vertex.
    pub cut_violations: usize,
    /// Completions where "connected" and "cut up and every block connected" disagree.
    pub block_violations: usize,
    /// Particles whose preimage differs from the interval between known-up and possible.
    pub interval_violations: usize,
}

pub fn conditioning(g: &Graph, big_r: u32) -> ConditioningReport {
    let dm = g.distances();
    let n = g.vertex_count();
    let lp = LevelProcess::new(g, &dm, big_r).unwrap();
    let level = big_r - 1;
    let mut preimages: BTreeMap<Vec<usize>, Vec<u64>> = BTreeMap::new();
    for mask in 0u64..(1 << n) {
        let x = VertexSet::from_mask(n, mask);
        preimages.entry(lp.definite_set(&x, level).to_vec()).or_default().push(mask);
    }
    let mut report = ConditioningReport::default();
    for (d, pre) in &preimages {
        let d = VertexSet::from_indices(n, d.iter().copied());
        let particle = lp.particle_at(&d, level);
        if !lp.is_feasible(&particle) {
            continue;
        }
        report.particles += 1;
        let possible = particle.possible();
        let interval: Vec<u64> = (0u64..(1 << n))
            .filter(|&m| {
                let x = VertexSet::from_mask(n, m);
                d.is_subset(&x) && x.is_subset(&possible)
            })
            .collect();
        if &interval != pre {
            report.interval_violations += 1;
        }
        let cut = lp.required_cut_set(&particle, CutMode::All).unwrap();
        let comp = lp.possible_component(&particle).unwrap();
        let blocks = if comp.len() >= 2 { biconnected_components(g, &comp).unwrap() } else { vec![comp.clone()] };
        for &m in &interval {
            report.completions += 1;
            let x = VertexSet::from_mask(n, m);
            let connected = g.is_connected_induced(&x);
            let cut_up = cut.is_subset(&x);
            if connected && !cut_up {
                report.cut_violations += 1;
            }
            let blocks_ok = blocks.iter().all(|b| g.is_connected_induced(&x.intersection(b)));
            if connected != (cut_up && blocks_ok && x.is_subset(&comp)) {
                report.block_violations += 1;
            }
        }
    }
    report
}

pub fn exact_value(g: &Graph, p: f64) -> f64 {
    let counts = brute_force_counts(g, BRUTE_FORCE_LIMIT).unwrap();
    rcr_from_counts(&counts, &parse_probability(&p.to_string()).unwrap())
        .unwrap()
        .to_f64()
        .unwrap()
}

/// Mean and standard error of `runs` independent estimates.
pub struct Replicates {
    pub mean: f64,
    pub se: f64,
}

impl Replicates {
    pub fn z(&self, truth: f64) -> f64 {
        if self.se > 0.0 {
            (self.mean - truth).abs() / self.se
        } else if self.mean == truth {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

/// Runs `method` `runs` times; splitting-family methods use pilot factors.
pub fn replicate(g: &Graph, method: Method, p: f64, samples: usize, runs: usize, seed: u64) -> Replicates {
    let dm = g.distances();
    let mut cfg = EstimatorConfig::new(method, p, samples).with_seed(seed);
    if method.uses_factors() {
        let r = cfg.radius(&dm);
        let factors = pilot_split_factors(g, &dm, p, r, samples, &mut substream(seed, u64::MAX)).unwrap();
        cfg = cfg.with_factors(factors);
    }
    let base = key([g.name().as_bytes(), method.name().as_bytes(), &p.to_bits().to_le_bytes()[..]]);
    let xs: Vec<f64> = (0..runs)
        .map(|i| estimate(g, &dm, &cfg, &mut substream(seed ^ base, i as u64)).unwrap().estimate)
        .collect();
    let mean = xs.iter().sum::<f64>() / runs as f64;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (runs - 1) as f64;
    Replicates {
        mean,
        se: (var / runs as f64).sqrt(),
    }
}
