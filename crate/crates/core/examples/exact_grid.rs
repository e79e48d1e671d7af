//! Exact reliability of a grid graph via the transfer matrix.
//!
//! Usage: `cargo run --release --example exact_grid -- [WIDTH] [HEIGHT] [P]`

use std::time::Instant;

use rcr::exact::{conditional_mean_size, p_star, parse_probability, rcr_from_counts, tm_counts, to_decimal};

fn main() -> rcr::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let width: usize = args.first().map_or(Ok(4), |s| s.parse()).expect("width");
    let height: usize = args.get(1).map_or(Ok(width), |s| s.parse()).expect("height");
    let p = parse_probability(args.get(2).map_or("1/2", String::as_str))?;

    let start = Instant::now();
    let counts = tm_counts(width, height)?;
    let elapsed = start.elapsed();

    println!("grid {width}x{height}: {} connected induced subgraphs", counts.total());
    println!("most common size: {}", counts.argmax());
    let value = rcr_from_counts(&counts, &p)?;
    println!("RCR({}) = {}", to_decimal(&p, 6), to_decimal(&value, 20));
    if let Ok(mean) = conditional_mean_size(&counts, &p) {
        println!("E[|X| | connected] = {}", to_decimal(&mean, 6));
    }
    println!("counted in {:.3}s", elapsed.as_secs_f64());

    let start = Instant::now();
    match p_star(&counts, counts.n(), 1e-10) {
        Ok(fixed) => println!(
            "p* = {:.6} ({} sign changes, {:.3}s)",
            fixed.value,
            fixed.sign_changes,
            start.elapsed().as_secs_f64()
        ),
        Err(e) => println!("p* undefined: {e}"),
    }
    Ok(())
}
