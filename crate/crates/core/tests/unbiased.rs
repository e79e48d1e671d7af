mod common;

use rcr::estimators::Method;
use rcr::Graph;

const RUNS: usize = 50;
const SAMPLES: usize = 20_000;

fn check(g: Graph, seed: u64) {
    let mut failures = Vec::new();
    for p in [0.2, 0.5, 0.8] {
        let truth = common::exact_value(&g, p);
        for method in Method::ALL {
            let r = common::replicate(&g, method, p, SAMPLES, RUNS, seed);
            let z = r.z(truth);
            if z > 4.0 {
                failures.push(format!("{method} p={p}: mean {} vs {truth} (z = {z:.2})", r.mean));
            }
        }
    }
    assert!(failures.is_empty(), "{}: {failures:#?}", g.name());
}

#[test]
fn unbiased_on_path3() {
    check(Graph::path(3).unwrap(), 21);
}

#[test]
fn unbiased_on_2x2() {
    check(Graph::grid(2, 2).unwrap(), 22);
}

#[test]
fn unbiased_on_2x3() {
    check(Graph::grid(2, 3).unwrap(), 23);
}

#[test]
fn unbiased_on_3x3() {
    check(Graph::grid(3, 3).unwrap(), 24);
}
