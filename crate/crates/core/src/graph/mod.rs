//! Graph representation, hop metric and connectivity primitives.
//!
//! Every vertex subset is a [`VertexSet`]; all connectivity questions are
//! asked about the subgraph *induced* by such a set.

mod blocks;
mod distance;
mod parse;
mod vertex_set;

pub use blocks::{biconnected_components, cut_vertices, separating_cut_vertices};
pub use distance::DistanceMatrix;
pub use parse::parse_edge_list;
pub use vertex_set::{Iter as VertexSetIter, VertexId, VertexSet};

use crate::error::{RcrError, Result};

/// Connected simple undirected graph with sorted adjacency lists.
#[derive(Clone, Debug)]
pub struct Graph {
    name: String,
    adjacency: Vec<Vec<VertexId>>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph from an edge list, validating simplicity and connectivity.
    pub fn from_edges(name: impl Into<String>, n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(RcrError::invalid("graph must have at least one vertex"));
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(RcrError::invalid(format!("edge ({u}, {v}) out of range for n = {n}")));
            }
            if u == v {
                return Err(RcrError::invalid(format!("loop at vertex {u}")));
            }
            adjacency[u].push(VertexId::new(v));
            adjacency[v].push(VertexId::new(u));
        }
        for (u, list) in adjacency.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(RcrError::invalid(format!("duplicate edge at vertex {u}")));
            }
        }
        let g = Graph {
            name: name.into(),
            adjacency,
            edge_count: edges.len(),
        };
        if !g.is_connected_induced(&VertexSet::full(n)) {
            return Err(RcrError::invalid("graph is disconnected"));
        }
        Ok(g)
    }

    /// Width×height grid graph, vertices numbered row-major (`row * width + col`).
    pub fn grid(width: usize, height: usize) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(RcrError::invalid(format!("grid dimensions must be positive, got {width}x{height}")));
        }
        let mut edges = Vec::with_capacity(2 * width * height);
        for row in 0..height {
            for col in 0..width {
                let id = row * width + col;
                if col + 1 < width {
                    edges.push((id, id + 1));
                }
                if row + 1 < height {
                    edges.push((id, id + width));
                }
            }
        }
        Graph::from_edges(format!("grid:{width}x{height}"), width * height, &edges)
    }

    /// Path graph `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(format!("path:{n}"), n, &edges)
    }

    /// Cycle graph on `n >= 3` vertices.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(RcrError::invalid("a simple cycle needs at least 3 vertices"));
        }
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        edges.push((n - 1, 0));
        Graph::from_edges(format!("cycle:{n}"), n, &edges)
    }

    /// Complete graph on `n` vertices.
    pub fn complete(n: usize) -> Result<Self> {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph::from_edges(format!("complete:{n}"), n, &edges)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline]
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency[v.index()]
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertex_count()).map(VertexId::new)
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn empty_set(&self) -> VertexSet {
        VertexSet::empty(self.vertex_count())
    }

    pub fn full_set(&self) -> VertexSet {
        VertexSet::full(self.vertex_count())
    }

    /// Component of `start` in the subgraph induced by `allowed`.
    pub fn reach_within(&self, allowed: &VertexSet, start: VertexId) -> Result<VertexSet> {
        if !allowed.contains(start) {
            return Err(RcrError::invalid(format!("start vertex {start} is not in the allowed set")));
        }
        Ok(self.reach_unchecked(allowed, start))
    }

    pub(crate) fn reach_unchecked(&self, allowed: &VertexSet, start: VertexId) -> VertexSet {
        let mut seen = self.empty_set();
        let mut stack = Vec::with_capacity(16);
        seen.insert(start);
        stack.push(start);
        while let Some(u) = stack.pop() {
            for &w in self.neighbors(u) {
                if allowed.contains(w) && seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// φ: whether `s` is non-empty and induces a connected subgraph.
    pub fn is_connected_induced(&self, s: &VertexSet) -> bool {
        match s.min() {
            None => false,
            Some(root) => self.reach_unchecked(s, root).len() == s.len(),
        }
    }

    /// Partition of `s` into maximal connected induced pieces, ordered by minimum vertex.
    pub fn connected_components(&self, s: &VertexSet) -> Vec<VertexSet> {
        let mut rest = s.clone();
        let mut out = Vec::new();
        while let Some(root) = rest.min() {
            let comp = self.reach_unchecked(&rest, root);
            rest.difference_with(&comp);
            out.push(comp);
        }
        out
    }

    /// Hop distance from every vertex to every other.
    pub fn distances(&self) -> DistanceMatrix {
        DistanceMatrix::new(self)
    }
}
