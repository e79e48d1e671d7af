mod common;

use std::path::Path;
use std::time::Instant;

use num_bigint::BigUint;
use rcr::estimators::Method;
use rcr::exact::{brute_force_counts, p_star, parse_probability, rcr_from_counts, tm_counts, tm_state_space};
use rcr::harness::{run_and_summarize, write_csv, ExperimentSpec, GraphSpec, ReferencePolicy};
use rcr::Graph;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn state_count() -> Outcome {
    let start = Instant::now();
    let states = tm_state_space(5).map(|s| s.len()).unwrap_or(0);
    let secs = start.elapsed().as_secs_f64();
    outcome(states == 52 && secs < 1.0, format!("{states} states in {secs:.3}s"))
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut shapes: Vec<(usize, usize)> = (1..=6).map(|k| (1, k)).collect();
    shapes.extend([(2, 2), (2, 3), (2, 4), (2, 5), (3, 3), (3, 4), (4, 4)]);
    let mismatched: Vec<String> = shapes
        .iter()
        .filter(|&&(w, h)| {
            let g = Graph::grid(w, h).unwrap();
            tm_counts(w, h).ok() != brute_force_counts(&g, 26).ok()
        })
        .map(|(w, h)| format!("{w}x{h}"))
        .collect();
    let secs = start.elapsed().as_secs_f64();
    outcome(
        mismatched.is_empty() && secs < 120.0,
        format!("{} grids, mismatches {mismatched:?}, {secs:.2}s", shapes.len()),
    )
}

fn exact_values() -> Outcome {
    let half = parse_probability("1/2").unwrap();
    let square = rcr_from_counts(&tm_counts(2, 2).unwrap(), &half).unwrap().to_string();
    let path = rcr_from_counts(&tm_counts(1, 3).unwrap(), &half).unwrap().to_string();
    outcome(square == "13/16" && path == "3/4", format!("2x2: {square}, 1x3: {path}"))
}

fn unbiasedness() -> Outcome {
    let mut worst = (0.0f64, String::new());
    let mut failures = Vec::new();
    let mut cells = 0;
    for (w, h) in [(2, 3), (3, 3), (4, 4)] {
        let g = Graph::grid(w, h).unwrap();
        for p in [0.2, 0.5] {
            let truth = common::exact_value(&g, p);
            for method in Method::ALL {
                cells += 1;
                let r = common::replicate(&g, method, p, 20_000, 50, 4);
                let z = r.z(truth);
                let label = format!("{w}x{h} p={p} {method}");
                if z > worst.0 {
                    worst = (z, label.clone());
                }
                if z > 4.0 {
                    failures.push(format!("{label} z={z:.2}"));
                }
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!("{cells} cells, worst z {:.2} ({}), failures {failures:?}", worst.0, worst.1),
    )
}

fn chain_properties() -> Outcome {
    let g = Graph::grid(5, 5).unwrap();
    let r = common::chain_properties(&g, &[1, 2, 3], 10_000, 5);
    outcome(
        r.total() == 0 && r.checked == 30_000,
        format!(
            "{} trajectories; violations: sandwich {}, minimum {}, recovery {}, idempotence {}",
            r.checked, r.sandwich, r.minimum, r.recovery, r.idempotence
        ),
    )
}

fn kernel_and_law() -> Outcome {
    let g = Graph::grid(3, 3).unwrap();
    let (checked, bad) = common::kernel_mismatches(&g, 2, &["1/2", "1/3", "3/4"]);
    let a = common::transition_law(&g, 2, 0, 100_000, 6);
    let b = common::transition_law(&g, 2, 1, 100_000, 7);
    outcome(
        bad == 0 && checked > 0 && a.failures + b.failures == 0 && a.starts > 0 && b.starts > 0,
        format!(
            "{checked} scan values, {bad} mismatches; {} start states, {} outcomes, {} beyond 4 sigma, worst z {:.2}",
            a.starts + b.starts,
            a.outcomes + b.outcomes,
            a.failures + b.failures,
            a.worst_z.max(b.worst_z)
        ),
    )
}

fn conditioning() -> Outcome {
    let g = Graph::grid(3, 3).unwrap();
    let r = common::conditioning(&g, 2);
    outcome(
        r.particles > 0 && r.cut_violations + r.block_violations + r.interval_violations == 0,
        format!(
            "{} particles, {} completions; violations: cut {}, block {}, interval {}",
            r.particles, r.completions, r.cut_violations, r.block_violations, r.interval_violations
        ),
    )
}

fn regime_ordering() -> Outcome {
    let spec = ExperimentSpec {
        graphs: vec![GraphSpec::Grid { width: 8, height: 8 }],
        methods: vec![Method::Cond, Method::Sir],
        p_grid: vec![0.15, 0.5],
        samples: 100_000,
        reps: 20,
        seed: 8,
        reference: ReferencePolicy::BestMethod,
        ..ExperimentSpec::default()
    };
    let rows = match run_and_summarize(&spec) {
        Ok(rows) => rows,
        Err(e) => return outcome(false, e.to_string()),
    };
    let re = |m: Method, p: f64| {
        rows.iter()
            .find(|r| r.method == m && r.p == p)
            .map(|r| r.re)
            .unwrap_or(f64::NAN)
    };
    let (c50, s50, c15, s15) = (re(Method::Cond, 0.5), re(Method::Sir, 0.5), re(Method::Cond, 0.15), re(Method::Sir, 0.15));
    outcome(
        s50 < c50 && c15 < s15,
        format!("p=0.50: RE sir {s50:.3e} vs cond {c50:.3e}; p=0.15: RE cond {c15:.3e} vs sir {s15:.3e}"),
    )
}

fn eleven_by_eleven() -> Outcome {
    let start = Instant::now();
    let c = match tm_counts(11, 11) {
        Ok(c) => c,
        Err(e) => return outcome(false, e.to_string()),
    };
    let arg = c.argmax();
    let c75 = c.get(75).clone();
    let lo = BigUint::from(10u32).pow(31);
    let hi = BigUint::from(10u32).pow(32);
    let digits = c75.to_string();
    let star = p_star(&c, 121, 1e-9).map(|s| s.value).unwrap_or(f64::NAN);
    outcome(
        arg == 75 && c75 >= lo && c75 < hi && (star - 0.2454).abs() <= 0.0005,
        format!(
            "argmax {arg}, c_75 = {}.{}e{}, p* = {star:.6}, {:.1}s",
            &digits[..1],
            &digits[1..4],
            digits.len() - 1,
            start.elapsed().as_secs_f64()
        ),
    )
}

const TIME_COLUMNS: [&str; 2] = ["time_mean_s", "wnrv"];

fn split_columns(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let timed: Vec<usize> = header
        .iter()
        .enumerate()
        .filter(|(_, h)| TIME_COLUMNS.contains(h))
        .map(|(i, _)| i)
        .collect();
    let mut stable = Vec::new();
    let mut times = Vec::new();
    for line in std::iter::once(header.join(",").as_str()).chain(lines) {
        let fields: Vec<&str> = line.split(',').collect();
        let kept: Vec<&str> = fields.iter().enumerate().filter(|(i, _)| !timed.contains(i)).map(|(_, f)| *f).collect();
        stable.push(kept.join(","));
        times.push(timed.iter().filter_map(|&i| fields[i].parse().ok()).collect());
    }
    (stable, times)
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let base = ExperimentSpec {
        graphs: vec![GraphSpec::Grid { width: 4, height: 4 }],
        methods: Method::ALL.to_vec(),
        p_grid: vec![0.3, 0.6],
        samples: 2_000,
        reps: 4,
        seed: 10,
        reference: ReferencePolicy::ExactTm,
        bootstrap: 200,
        ..ExperimentSpec::default()
    };
    let mut paths = Vec::new();
    for threads in [1, 4] {
        let spec = ExperimentSpec {
            threads: Some(threads),
            ..base.clone()
        };
        let path = dir.path().join(format!("summary_{threads}.csv"));
        if let Err(e) = run_and_summarize(&spec).and_then(|rows| write_csv(&rows, &path)) {
            return outcome(false, e.to_string());
        }
        paths.push(path);
    }
    let (a, ta) = split_columns(&paths[0]);
    let (b, tb) = split_columns(&paths[1]);
    let times_close = ta.iter().zip(&tb).skip(1).all(|(x, y)| {
        x.len() == y.len() && x.iter().zip(y).all(|(u, v)| *u > 0.0 && *v > 0.0 && (u / v) < 10.0 && (v / u) < 10.0)
    });
    outcome(
        a == b && times_close,
        format!("{} rows identical: {}, time columns within a factor of 10: {times_close}", a.len() - 1, a == b),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("transfer-matrix state count", state_count),
        ("transfer matrix equals brute force", oracle_equivalence),
        ("exact small values", exact_values),
        ("estimator unbiasedness", unbiasedness),
        ("level-process properties", chain_properties),
        ("scan probabilities and transition law", kernel_and_law),
        ("cut-vertex and block conditioning", conditioning),
        ("regime ordering on 8x8", regime_ordering),
        ("11x11 counts and p*", eleven_by_eleven),
        ("determinism across thread counts", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = check();
        failed += !o.pass as usize;
        println!(
            "{} {:>2} {name}: {} [{:.1}s]",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
