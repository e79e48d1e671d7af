//! Estimates the reliability of an arbitrary graph and checks it against
//! brute-force enumeration when the graph is small enough.
//!
//! Usage: `cargo run --release --example edge_list -- [EDGE_LIST] [P] [N]`
//! Without a file (or with `-`) a 12-vertex wheel is used.

use std::fs::File;
use std::io::BufReader;

use num_traits::ToPrimitive;
use rcr::estimators::{estimate, EstimatorConfig, Method};
use rcr::exact::{brute_force_counts, parse_probability, rcr_from_counts, BRUTE_FORCE_LIMIT};
use rcr::graph::parse_edge_list;
use rcr::rng::stream;
use rcr::Graph;

fn wheel(rim: usize) -> rcr::Result<Graph> {
    let mut edges: Vec<(usize, usize)> = (1..=rim).map(|v| (0, v)).collect();
    edges.extend((1..=rim).map(|v| (v, v % rim + 1)));
    Graph::from_edges(format!("wheel:{rim}"), rim + 1, &edges)
}

fn main() -> rcr::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let g = match args.first() {
        Some(path) if path != "-" => parse_edge_list(BufReader::new(File::open(path)?))?.with_name(path.as_str()),
        _ => wheel(11)?,
    };
    let p_text = args.get(1).map_or("0.3", String::as_str);
    let p: f64 = p_text.parse().expect("p");
    let samples: usize = args.get(2).map_or(Ok(20_000), |s| s.parse()).expect("N");
    let dm = g.distances();

    if g.vertex_count() <= BRUTE_FORCE_LIMIT {
        let counts = brute_force_counts(&g, BRUTE_FORCE_LIMIT)?;
        let exact = rcr_from_counts(&counts, &parse_probability(p_text)?)?;
        println!("exact      {:.6e}", exact.to_f64().unwrap_or(f64::NAN));
    }
    for method in [Method::Crude, Method::Cond, Method::Rvr, Method::Sir] {
        let cfg = EstimatorConfig::new(method, p, samples);
        let r = estimate(&g, &dm, &cfg, &mut stream(17))?;
        println!("{method:<10} {:.6e}  ({:.3}s)", r.estimate, r.wall_time.as_secs_f64());
    }
    Ok(())
}
