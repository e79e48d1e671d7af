use crate::graph::VertexSet;

/// Which cut vertices [`LevelProcess::required_cut_set`](super::LevelProcess::required_cut_set) returns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CutMode {
    /// Every cut vertex of the possible set.
    All,
    /// Cut vertices whose removal leaves known-up vertices in two or more components.
    Separating,
}

/// Partial state of the level process.
///
/// `known_up` and `known_down` are disjoint; vertices in neither are still
/// unrevealed. In runs without forced vertices, `known_up` is the definite
/// set at `level` and `known_down` the complement of the possible set.
#[derive(Clone, Debug, PartialEq)]
pub struct Particle {
    pub(crate) known_up: VertexSet,
    pub(crate) known_down: VertexSet,
    pub(crate) level: u32,
    pub(crate) weight: f64,
    pub(crate) alive: bool,
}

impl Particle {
    pub fn new(known_up: VertexSet, known_down: VertexSet, level: u32) -> Self {
        assert!(known_up.is_disjoint(&known_down), "known-up and known-down must be disjoint");
        let alive = !known_up.is_empty();
        Particle {
            known_up,
            known_down,
            level,
            weight: 1.0,
            alive,
        }
    }

    pub fn known_up(&self) -> &VertexSet {
        &self.known_up
    }

    pub fn known_down(&self) -> &VertexSet {
        &self.known_down
    }

    /// Complement of `known_down`.
    pub fn possible(&self) -> VertexSet {
        self.known_down.complement()
    }

    /// Vertices whose state has not been revealed.
    pub fn unknown(&self) -> VertexSet {
        let mut out = self.known_down.complement();
        out.difference_with(&self.known_up);
        out
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn with_weight(mut self, weight: f64) -> Self {
        self.weight = weight;
        self
    }

    pub fn is_alive(&self) -> bool {
        self.alive
    }
}
