//! Runs every estimator once on a grid and prints estimate, time and diagnostics.
//!
//! Usage: `cargo run --release --example compare_methods -- [SIDE] [P] [N]`

use rcr::estimators::{estimate, pilot_split_factors, EstimatorConfig, Method};
use rcr::rng::substream;
use rcr::Graph;

fn main() -> rcr::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let side: usize = args.first().map_or(6, |s| s.parse().expect("side"));
    let p: f64 = args.get(1).map_or(0.5, |s| s.parse().expect("p"));
    let n: usize = args.get(2).map_or(10_000, |s| s.parse().expect("N"));

    let g = Graph::grid(side, side)?;
    let dm = g.distances();
    let r = dm.diameter();
    let factors = pilot_split_factors(&g, &dm, p, r, n, &mut substream(1, 0))?;
    println!("{} p={p} N={n} R={r} pilot factors {factors:?}", g.name());

    for (i, method) in Method::ALL.into_iter().enumerate() {
        let mut cfg = EstimatorConfig::new(method, p, n);
        if method.uses_factors() {
            cfg = cfg.with_factors(factors.clone());
        }
        let out = estimate(&g, &dm, &cfg, &mut substream(2, i as u64))?;
        println!(
            "{:>10} {:.6e} {:>8.3}s {:?}",
            method.name(),
            out.estimate,
            out.wall_time.as_secs_f64(),
            out.method_diag
        );
    }
    Ok(())
}
