use std::collections::VecDeque;

use super::{Graph, VertexId, VertexSet};

/// All-pairs hop distances, stored densely.
#[derive(Clone, Debug)]
pub struct DistanceMatrix {
    n: usize,
    dist: Vec<u32>,
    diameter: u32,
}

impl DistanceMatrix {
    /// Distance reported for the empty set by [`set_distance`](Self::set_distance).
    pub const INFINITY: u32 = u32::MAX;

    /// One breadth-first search per source vertex.
    pub fn new(g: &Graph) -> Self {
        let n = g.vertex_count();
        let mut dist = vec![Self::INFINITY; n * n];
        let mut queue = VecDeque::with_capacity(n);
        for src in 0..n {
            let row = &mut dist[src * n..(src + 1) * n];
            row[src] = 0;
            queue.clear();
            queue.push_back(src);
            while let Some(u) = queue.pop_front() {
                let du = row[u];
                for w in g.neighbors(VertexId::new(u)) {
                    let w = w.index();
                    if row[w] == Self::INFINITY {
                        row[w] = du + 1;
                        queue.push_back(w);
                    }
                }
            }
        }
        let diameter = dist.iter().copied().max().unwrap_or(0);
        debug_assert!(diameter != Self::INFINITY, "graph must be connected");
        DistanceMatrix { n, dist, diameter }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, u: VertexId, v: VertexId) -> u32 {
        self.dist[u.index() * self.n + v.index()]
    }

    #[inline]
    pub fn row(&self, u: VertexId) -> &[u32] {
        &self.dist[u.index() * self.n..(u.index() + 1) * self.n]
    }

    pub fn diameter(&self) -> u32 {
        self.diameter
    }

    /// Minimum distance from `v` to a member of `s`; [`Self::INFINITY`] for the empty set.
    pub fn set_distance(&self, v: VertexId, s: &VertexSet) -> u32 {
        let row = self.row(v);
        s.iter().map(|w| row[w.index()]).min().unwrap_or(Self::INFINITY)
    }

    /// Closed ball `{w : d(v, w) <= radius}`.
    pub fn ball(&self, v: VertexId, radius: u32) -> VertexSet {
        let mut out = VertexSet::empty(self.n);
        for (w, &d) in self.row(v).iter().enumerate() {
            if d <= radius {
                out.insert(VertexId::new(w));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_distances() {
        let g = Graph::path(5).unwrap();
        let dm = g.distances();
        let v = VertexId::new;
        assert_eq!(dm.get(v(0), v(2)), 2);
        assert_eq!(dm.get(v(3), v(3)), 0);
        assert_eq!(dm.get(v(1), v(2)), 1);
        assert_eq!(dm.diameter(), 4);
        let s = VertexSet::from_indices(5, [0, 3]);
        assert_eq!(dm.set_distance(v(4), &s), 1);
        assert_eq!(dm.set_distance(v(3), &s), 0);
        assert_eq!(dm.set_distance(v(4), &VertexSet::empty(5)), DistanceMatrix::INFINITY);
    }

    #[test]
    fn grid_diameter() {
        let g = Graph::grid(4, 3).unwrap();
        assert_eq!(g.distances().diameter(), 5);
    }

    #[test]
    fn ball_is_closed() {
        let g = Graph::path(5).unwrap();
        let dm = g.distances();
        assert_eq!(dm.ball(VertexId::new(2), 1).to_vec(), vec![1, 2, 3]);
        assert_eq!(dm.ball(VertexId::new(2), 0).to_vec(), vec![2]);
    }
}
