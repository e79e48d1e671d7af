//! Cut vertices and biconnected blocks of a graph read from an edge list.
//!
//! Usage: `cargo run --example blocks -- [EDGE_LIST]`
//! Without an argument a small built-in graph (two triangles on a path) is used.

use std::fs::File;
use std::io::BufReader;

use rcr::graph::{biconnected_components, cut_vertices, parse_edge_list};
use rcr::Graph;

fn main() -> rcr::Result<()> {
    let g = match std::env::args().nth(1) {
        Some(path) => parse_edge_list(BufReader::new(File::open(&path)?))?.with_name(path),
        None => Graph::from_edges("bowtie-path", 7, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 6), (6, 4)])?,
    };
    let all = g.full_set();
    println!("{}: {} vertices, {} edges", g.name(), g.vertex_count(), g.edge_count());
    println!("cut vertices: {:?}", cut_vertices(&g, &all)?);
    for (i, block) in biconnected_components(&g, &all)?.iter().enumerate() {
        println!("block {i}: {block:?}");
    }
    let dm = g.distances();
    println!("diameter: {}", dm.diameter());
    Ok(())
}
