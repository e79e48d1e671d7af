use proptest::prelude::*;
use rcr::graph::{biconnected_components, cut_vertices, separating_cut_vertices};
use rcr::{Graph, VertexId, VertexSet};

/// Random connected graph: a random spanning tree plus extra edges.
fn connected_graph() -> impl Strategy<Value = Graph> {
    (2usize..11).prop_flat_map(|n| {
        let parents: Vec<BoxedStrategy<usize>> = (1..n).map(|v| (0..v).boxed()).collect();
        let extra = proptest::collection::vec((0..n, 0..n), 0..n);
        (Just(n), parents, extra).prop_map(|(n, parents, extra)| {
            let mut edges: Vec<(usize, usize)> = parents.iter().enumerate().map(|(i, &p)| (p, i + 1)).collect();
            for (a, b) in extra {
                let e = (a.min(b), a.max(b));
                if a != b && !edges.iter().any(|&(x, y)| (x.min(y), x.max(y)) == e) {
                    edges.push(e);
                }
            }
            Graph::from_edges("random", n, &edges).unwrap()
        })
    })
}

fn components_naive(g: &Graph, s: &VertexSet) -> usize {
    let mut seen = VertexSet::empty(g.vertex_count());
    let mut count = 0;
    for v in s {
        if seen.contains(v) {
            continue;
        }
        count += 1;
        let mut stack = vec![v];
        seen.insert(v);
        while let Some(u) = stack.pop() {
            for &w in g.neighbors(u) {
                if s.contains(w) && seen.insert(w) {
                    stack.push(w);
                }
            }
        }
    }
    count
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn induced_connectivity_matches_naive(g in connected_graph(), mask in any::<u64>()) {
        let n = g.vertex_count();
        let s = VertexSet::from_mask(n, mask & ((1u64 << n) - 1));
        prop_assert_eq!(g.is_connected_induced(&s), components_naive(&g, &s) == 1);
        prop_assert_eq!(g.connected_components(&s).len(), components_naive(&g, &s));
    }

    #[test]
    fn cut_vertices_match_definition(g in connected_graph(), mask in any::<u64>()) {
        let n = g.vertex_count();
        let s = VertexSet::from_mask(n, mask & ((1u64 << n) - 1));
        let comps = g.connected_components(&s);
        prop_assume!(!comps.is_empty());
        let comp = &comps[0];
        let cuts = cut_vertices(&g, comp).unwrap();
        for v in comp {
            let mut rest = comp.clone();
            rest.remove(v);
            let splits = components_naive(&g, &rest) > 1;
            prop_assert_eq!(cuts.contains(v), splits, "vertex {}", v);
        }
        let marked = s.intersection(&VertexSet::from_mask(n, mask.rotate_left(7) & ((1u64 << n) - 1)));
        let marked = marked.intersection(comp);
        let sep = separating_cut_vertices(&g, comp, &marked).unwrap();
        for v in comp {
            let mut rest = comp.clone();
            rest.remove(v);
            let touched = g.connected_components(&rest).iter().filter(|c| !c.is_disjoint(&marked)).count();
            prop_assert_eq!(sep.contains(v), cuts.contains(v) && touched >= 2, "vertex {}", v);
        }
    }

    #[test]
    fn blocks_partition_edges(g in connected_graph()) {
        let full = g.full_set();
        let blocks = biconnected_components(&g, &full).unwrap();
        let cuts = cut_vertices(&g, &full).unwrap();
        for u in g.vertices() {
            for &w in g.neighbors(u) {
                if u < w {
                    let holders = blocks.iter().filter(|b| b.contains(u) && b.contains(w)).count();
                    prop_assert_eq!(holders, 1);
                }
            }
            let memberships = blocks.iter().filter(|b| b.contains(u)).count();
            prop_assert_eq!(memberships > 1, cuts.contains(u));
        }
        for b in &blocks {
            prop_assert!(g.is_connected_induced(b));
            if b.len() > 2 {
                prop_assert!(cut_vertices(&g, b).unwrap().is_empty());
            }
        }
    }

    #[test]
    fn distances_form_a_metric(g in connected_graph()) {
        let dm = g.distances();
        let n = g.vertex_count();
        let mut diameter = 0;
        for a in 0..n {
            for b in 0..n {
                let (va, vb) = (VertexId::new(a), VertexId::new(b));
                prop_assert_eq!(dm.get(va, vb), dm.get(vb, va));
                prop_assert_eq!(dm.get(va, vb) == 0, a == b);
                prop_assert_eq!(dm.get(va, vb) == 1, g.has_edge(va, vb));
                diameter = diameter.max(dm.get(va, vb));
                for c in 0..n {
                    let vc = VertexId::new(c);
                    prop_assert!(dm.get(va, vc) <= dm.get(va, vb) + dm.get(vb, vc));
                }
            }
        }
        prop_assert_eq!(dm.diameter(), diameter);
    }
}
