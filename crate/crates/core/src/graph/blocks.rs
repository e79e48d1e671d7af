//! Articulation points and biconnected components of induced subgraphs,
//! via iterative lowpoint depth-first search.

use super::{Graph, VertexId, VertexSet};
use crate::error::{RcrError, Result};

const UNSEEN: u32 = u32::MAX;

struct Lowpoint {
    root: VertexId,
    disc: Vec<u32>,
    /// Per vertex: subtrees cut off by this vertex (child with `low >= disc`).
    separated_children: Vec<u32>,
    /// Per vertex: separated subtrees that contain at least one marked vertex.
    marked_components: Vec<u32>,
    /// Per vertex: marked vertices inside the separated subtrees.
    separated_marked: Vec<u32>,
    blocks: Vec<VertexSet>,
}

/// One DFS over the subgraph induced by `s`, rooted at `min s`.
///
/// Fails if `s` is empty or induces a disconnected subgraph.
fn lowpoint(g: &Graph, s: &VertexSet, marked: Option<&VertexSet>, want_blocks: bool) -> Result<Lowpoint> {
    let root = s
        .min()
        .ok_or_else(|| RcrError::invalid("vertex set is empty"))?;
    let n = g.vertex_count();
    let mut disc = vec![UNSEEN; n];
    let mut low = vec![0u32; n];
    let mut parent = vec![UNSEEN; n];
    let mut marked_sub = vec![0u32; n];
    let mut separated_children = vec![0u32; n];
    let mut marked_components = vec![0u32; n];
    let mut separated_marked = vec![0u32; n];
    let mut blocks = Vec::new();
    let mut edge_stack: Vec<(VertexId, VertexId)> = Vec::new();

    let is_marked = |v: VertexId| marked.is_some_and(|m| m.contains(v));

    let mut time = 0u32;
    let mut visited = 0usize;
    let mut stack: Vec<(VertexId, usize)> = vec![(root, 0)];
    disc[root.index()] = time;
    low[root.index()] = time;
    marked_sub[root.index()] = is_marked(root) as u32;
    time += 1;
    visited += 1;

    while let Some(&mut (v, ref mut next)) = stack.last_mut() {
        let nbrs = g.neighbors(v);
        if *next < nbrs.len() {
            let w = nbrs[*next];
            *next += 1;
            if !s.contains(w) {
                continue;
            }
            let (vi, wi) = (v.index(), w.index());
            if disc[wi] == UNSEEN {
                disc[wi] = time;
                low[wi] = time;
                parent[wi] = vi as u32;
                marked_sub[wi] = is_marked(w) as u32;
                time += 1;
                visited += 1;
                if want_blocks {
                    edge_stack.push((v, w));
                }
                stack.push((w, 0));
            } else if parent[vi] != wi as u32 && disc[wi] < disc[vi] {
                low[vi] = low[vi].min(disc[wi]);
                if want_blocks {
                    edge_stack.push((v, w));
                }
            }
        } else {
            stack.pop();
            let wi = v.index();
            if parent[wi] == UNSEEN {
                continue;
            }
            let pi = parent[wi] as usize;
            low[pi] = low[pi].min(low[wi]);
            marked_sub[pi] += marked_sub[wi];
            if low[wi] >= disc[pi] {
                separated_children[pi] += 1;
                separated_marked[pi] += marked_sub[wi];
                if marked_sub[wi] > 0 {
                    marked_components[pi] += 1;
                }
                if want_blocks {
                    let mut block = VertexSet::empty(n);
                    while let Some((a, b)) = edge_stack.pop() {
                        block.insert(a);
                        block.insert(b);
                        if a.index() == pi && b == v {
                            break;
                        }
                    }
                    blocks.push(block);
                }
            }
        }
    }

    if visited != s.len() {
        return Err(RcrError::invalid("vertex set induces a disconnected subgraph"));
    }
    Ok(Lowpoint {
        root,
        disc,
        separated_children,
        marked_components,
        separated_marked,
        blocks,
    })
}

impl Lowpoint {
    fn is_cut(&self, v: VertexId) -> bool {
        let k = self.separated_children[v.index()];
        if v == self.root {
            k >= 2
        } else {
            k >= 1
        }
    }
}

/// Articulation points of the subgraph induced by `s`.
///
/// `s` must be non-empty and induce a connected subgraph.
pub fn cut_vertices(g: &Graph, s: &VertexSet) -> Result<VertexSet> {
    let lp = lowpoint(g, s, None, false)?;
    let mut out = VertexSet::empty(g.vertex_count());
    for v in s {
        debug_assert!(lp.disc[v.index()] != UNSEEN);
        if lp.is_cut(v) {
            out.insert(v);
        }
    }
    Ok(out)
}

/// Cut vertices `c` of the subgraph induced by `s` such that at least two
/// components of `s \ {c}` contain a vertex of `marked`.
///
/// Such a vertex must belong to every connected `X` with `marked ⊆ X ⊆ s`.
pub fn separating_cut_vertices(g: &Graph, s: &VertexSet, marked: &VertexSet) -> Result<VertexSet> {
    let lp = lowpoint(g, s, Some(marked), false)?;
    let total = s.intersection(marked).len() as u32;
    let mut out = VertexSet::empty(g.vertex_count());
    for v in s {
        if !lp.is_cut(v) {
            continue;
        }
        let vi = v.index();
        let rest = total - marked.contains(v) as u32 - lp.separated_marked[vi];
        let count = lp.marked_components[vi] + (rest > 0) as u32;
        if count >= 2 {
            out.insert(v);
        }
    }
    Ok(out)
}

/// Vertex sets of the biconnected components (blocks) of the subgraph induced by `s`.
///
/// Requires `|s| >= 2` and a connected induced subgraph. Blocks may share cut vertices.
pub fn biconnected_components(g: &Graph, s: &VertexSet) -> Result<Vec<VertexSet>> {
    if s.len() < 2 {
        return Err(RcrError::invalid("biconnected components need at least two vertices"));
    }
    Ok(lowpoint(g, s, None, true)?.blocks)
}
