//! One trajectory of the radius-indexed level process on a grid.
//!
//! Usage: `cargo run --example level_process -- [SIDE] [P] [SEED]`

use rcr::chain::{CutMode, LevelProcess};
use rcr::rng::stream;
use rcr::Graph;

fn main() -> rcr::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let side: usize = args.first().map_or(Ok(5), |s| s.parse()).expect("side");
    let p: f64 = args.get(1).map_or(Ok(0.6), |s| s.parse()).expect("p");
    let seed: u64 = args.get(2).map_or(Ok(3), |s| s.parse()).expect("seed");

    let g = Graph::grid(side, side)?;
    let dm = g.distances();
    let big_r = LevelProcess::default_radius(&dm);
    let lp = LevelProcess::new(&g, &dm, big_r)?;
    let mut rng = stream(seed);
    let none = g.empty_set();

    let (mut particle, first) = lp.init_particle_traced(p, &mut rng);
    if !particle.is_alive() {
        println!("every vertex is down");
        return Ok(());
    }
    println!("{} with R = {big_r}, p = {p}", g.name());
    println!("level 0: scan {:?}", first.to_indices());
    for level in 1..=big_r {
        if level == big_r && lp.is_feasible(&particle) {
            let cut = lp.required_cut_set(&particle, CutMode::All)?;
            println!("  cut vertices every connected completion needs: {cut:?}");
        }
        let scan = lp.advance(&mut particle, p, &none, &mut rng)?;
        println!(
            "level {level}: scan {:?}, up {}, down {}, unknown {}, feasible {}",
            scan.to_indices(),
            particle.known_up().len(),
            particle.known_down().len(),
            particle.unknown().len(),
            lp.is_feasible(&particle)
        );
    }
    let connected = g.is_connected_induced(particle.known_up());
    println!("final up set {:?} is connected: {connected}", particle.known_up());
    Ok(())
}
