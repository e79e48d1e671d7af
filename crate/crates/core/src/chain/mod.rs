//! The radius-indexed level process.
//!
//! For a maximum radius `R` and level `r`, [`LevelProcess::generate_subset`]
//! scans the up vertices in increasing order and keeps those farther than
//! `R - r` hops from everything kept so far. The union of these scans over
//! levels `0..=r` is the set of vertices known to be up; the intersection of
//! their up-sets is the set of vertices that may still be up. Both sets only
//! tighten as `r` grows and coincide with the true up set at `r = R`.
//!
//! A [`Particle`] carries that knowledge as explicit `known_up` /
//! `known_down` sets. Vertex states are revealed lazily (one Bernoulli draw
//! per vertex, the first time the scan needs it), so a particle is a partial
//! sample of the up set and advancing it samples the next level exactly from
//! its conditional law.

mod particle;

pub use particle::{CutMode, Particle};

use num_rational::BigRational;
use num_traits::{One, Pow};
use rand::Rng;

use crate::error::{RcrError, Result};
use crate::graph::{cut_vertices, separating_cut_vertices, DistanceMatrix, Graph, VertexId, VertexSet};

/// A value of the level-`r` scan: strictly increasing vertices, pairwise
/// farther apart than `R - r` in scan order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SubsetValue(Vec<VertexId>);

impl SubsetValue {
    pub fn new(vertices: Vec<VertexId>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        SubsetValue(vertices)
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_set(&self, universe: usize) -> VertexSet {
        VertexSet::from_indices(universe, self.0.iter().map(|v| v.index()))
    }

    pub fn to_indices(&self) -> Vec<usize> {
        self.0.iter().map(|v| v.index()).collect()
    }
}

/// `p^k`, switching to log space for very large exponents.
#[inline]
pub(crate) fn pow_prob(p: f64, k: usize) -> f64 {
    if k <= 1000 {
        p.powi(k as i32)
    } else {
        (k as f64 * p.ln()).exp()
    }
}

/// The level process on a fixed graph and maximum radius.
#[derive(Clone, Copy, Debug)]
pub struct LevelProcess<'a> {
    graph: &'a Graph,
    distances: &'a DistanceMatrix,
    max_radius: u32,
}

impl<'a> LevelProcess<'a> {
    pub fn new(graph: &'a Graph, distances: &'a DistanceMatrix, max_radius: u32) -> Result<Self> {
        if max_radius == 0 {
            return Err(RcrError::invalid("maximum radius must be at least 1"));
        }
        if distances.vertex_count() != graph.vertex_count() {
            return Err(RcrError::invalid("distance matrix does not match graph"));
        }
        Ok(LevelProcess {
            graph,
            distances,
            max_radius,
        })
    }

    /// Maximum radius defaulting to the graph diameter (at least 1).
    pub fn default_radius(distances: &DistanceMatrix) -> u32 {
        distances.diameter().max(1)
    }

    pub fn graph(&self) -> &'a Graph {
        self.graph
    }

    pub fn distances(&self) -> &'a DistanceMatrix {
        self.distances
    }

    pub fn max_radius(&self) -> u32 {
        self.max_radius
    }

    fn radius(&self, level: u32) -> u32 {
        assert!(level <= self.max_radius, "level {level} exceeds maximum radius {}", self.max_radius);
        self.max_radius - level
    }

    fn n(&self) -> usize {
        self.graph.vertex_count()
    }

    /// Adds `{w >= x : d(w, x) <= radius}` to `up`.
    #[inline]
    fn add_forward_ball(&self, up: &mut VertexSet, x: VertexId, radius: u32) {
        let row = self.distances.row(x);
        for (w, &d) in row.iter().enumerate().skip(x.index()) {
            if d <= radius {
                up.insert(VertexId::new(w));
            }
        }
    }

    /// The level-`r` scan of a fully known up set `x`.
    pub fn generate_subset(&self, x: &VertexSet, level: u32) -> SubsetValue {
        let radius = self.radius(level);
        let mut reach = VertexSet::empty(self.n());
        let mut kept = Vec::new();
        for v in x {
            if !reach.contains(v) {
                kept.push(v);
                self.add_forward_ball(&mut reach, v, radius);
            }
        }
        SubsetValue(kept)
    }

    /// Vertices that may be up given the level-`r` scan value `l`:
    /// the union over `x in l` of the closed ball of radius `R - r` around `x`,
    /// restricted to vertices `>= x`.
    pub fn up_set(&self, l: &SubsetValue, level: u32) -> VertexSet {
        let radius = self.radius(level);
        let mut up = VertexSet::empty(self.n());
        for &x in l.vertices() {
            self.add_forward_ball(&mut up, x, radius);
        }
        up
    }

    /// Intersection of the up-sets of all scans of `d` at levels `0..=r`.
    pub fn possible_set(&self, d: &VertexSet, level: u32) -> VertexSet {
        let mut out = VertexSet::full(self.n());
        for s in 0..=level {
            out.intersect_with(&self.up_set(&self.generate_subset(d, s), s));
        }
        out
    }

    /// Union of the scans of `x` at levels `0..=r`.
    pub fn definite_set(&self, x: &VertexSet, level: u32) -> VertexSet {
        let mut out = VertexSet::empty(self.n());
        for s in 0..=level {
            out.union_with(&self.generate_subset(x, s).to_set(self.n()));
        }
        out
    }

    /// Probability that the level-`r` scan of the random up set equals `l`.
    pub fn subset_probability(&self, l: &SubsetValue, level: u32, p: f64) -> f64 {
        let excluded = self.n() - self.up_set(l, level).len();
        pow_prob(p, l.len()) * pow_prob(1.0 - p, excluded)
    }

    /// Exact rational version of [`subset_probability`](Self::subset_probability).
    pub fn subset_probability_exact(&self, l: &SubsetValue, level: u32, p: &BigRational) -> BigRational {
        let excluded = self.n() - self.up_set(l, level).len();
        p.clone().pow(l.len() as u32) * (BigRational::one() - p).pow(excluded as u32)
    }

    /// Level-`r` scan over a partially known state, drawing unknown vertices lazily.
    fn scan<R: Rng + ?Sized>(&self, particle: &mut Particle, level: u32, p: f64, rng: &mut R) -> Result<SubsetValue> {
        let radius = self.radius(level);
        let mut up = VertexSet::empty(self.n());
        let mut kept = Vec::new();
        for v in self.graph.vertices() {
            if up.contains(v) {
                continue;
            }
            let is_up = if particle.known_up.contains(v) {
                true
            } else if particle.known_down.contains(v) {
                false
            } else if rng.gen::<f64>() < p {
                particle.known_up.insert(v);
                true
            } else {
                particle.known_down.insert(v);
                false
            };
            if is_up {
                kept.push(v);
                self.add_forward_ball(&mut up, v, radius);
            }
        }
        if !particle.known_up.is_subset(&up) {
            return Err(RcrError::InvalidState(
                "a known-up vertex fell outside the up-set of the scan".into(),
            ));
        }
        particle.known_down.union_with(&up.complement());
        Ok(SubsetValue(kept))
    }

    /// Samples the level-0 state.
    pub fn init_particle<R: Rng + ?Sized>(&self, p: f64, rng: &mut R) -> Particle {
        self.init_particle_traced(p, rng).0
    }

    /// As [`init_particle`](Self::init_particle), also returning the level-0 scan value.
    pub fn init_particle_traced<R: Rng + ?Sized>(&self, p: f64, rng: &mut R) -> (Particle, SubsetValue) {
        let mut particle = Particle::new(self.graph.empty_set(), self.graph.empty_set(), 0);
        let scanned = self
            .scan(&mut particle, 0, p, rng)
            .expect("scan of a fresh particle cannot conflict");
        particle.alive = !particle.known_up.is_empty();
        (particle, scanned)
    }

    /// Particle whose knowledge is exactly the definite set `d` at `level`
    /// (known-down = everything outside the possible set).
    pub fn particle_at(&self, d: &VertexSet, level: u32) -> Particle {
        let down = self.possible_set(d, level).complement();
        Particle::new(d.clone(), down, level)
    }

    /// Advances a particle one level, forcing `forced_up` to be up first.
    ///
    /// The weight is multiplied by `p` for every forced vertex that was not
    /// already known to be up. Returns the scan value of the new level.
    pub fn advance<R: Rng + ?Sized>(
        &self,
        particle: &mut Particle,
        p: f64,
        forced_up: &VertexSet,
        rng: &mut R,
    ) -> Result<SubsetValue> {
        if !particle.alive {
            return Err(RcrError::InvalidState("cannot advance a dead particle".into()));
        }
        if particle.level >= self.max_radius {
            return Err(RcrError::InvalidState(format!(
                "particle already at the final level {}",
                self.max_radius
            )));
        }
        if !forced_up.is_disjoint(&particle.known_down) {
            return Err(RcrError::InvalidState("forced vertex is known to be down".into()));
        }
        let newly_forced = forced_up.difference_len(&particle.known_up);
        particle.known_up.union_with(forced_up);
        particle.level += 1;
        let scanned = self.scan(particle, particle.level, p, rng)?;
        particle.weight *= pow_prob(p, newly_forced);
        Ok(scanned)
    }

    /// Copying form of [`advance`](Self::advance).
    pub fn advance_particle<R: Rng + ?Sized>(
        &self,
        particle: &Particle,
        p: f64,
        forced_up: &VertexSet,
        rng: &mut R,
    ) -> Result<Particle> {
        let mut next = particle.clone();
        self.advance(&mut next, p, forced_up, rng)?;
        Ok(next)
    }

    /// Whether a connected `X` with `known_up ⊆ X ⊆ possible` still exists.
    pub fn is_feasible(&self, particle: &Particle) -> bool {
        let Some(root) = particle.known_up.min() else {
            return false;
        };
        let possible = particle.known_down.complement();
        if !possible.contains(root) {
            return false;
        }
        particle
            .known_up
            .is_subset(&self.graph.reach_unchecked(&possible, root))
    }

    /// Component of the possible set that contains the known-up vertices.
    pub fn possible_component(&self, particle: &Particle) -> Result<VertexSet> {
        let root = particle
            .known_up
            .min()
            .ok_or_else(|| RcrError::InvalidState("particle has no known-up vertex".into()))?;
        let possible = particle.known_down.complement();
        let comp = self.graph.reach_unchecked(&possible, root);
        if !particle.known_up.is_subset(&comp) {
            return Err(RcrError::InvalidState(
                "known-up vertices are split across components of the possible set".into(),
            ));
        }
        Ok(comp)
    }

    /// Cut vertices that any connected completion of the particle must contain.
    ///
    /// Computed on the component of the possible set holding the known-up
    /// vertices. `All` returns every cut vertex of it (sound at level `R - 1`
    /// of an unconditioned run); `Separating` returns only those whose removal
    /// splits the known-up vertices (sound at every level).
    pub fn required_cut_set(&self, particle: &Particle, mode: CutMode) -> Result<VertexSet> {
        let comp = self.possible_component(particle)?;
        match mode {
            CutMode::All => cut_vertices(self.graph, &comp),
            CutMode::Separating => separating_cut_vertices(self.graph, &comp, &particle.known_up),
        }
    }
}
