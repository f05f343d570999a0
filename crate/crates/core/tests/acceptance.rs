//! The eight acceptance criteria, one PASS/FAIL line each.

use std::time::Instant;

use finepoly::verify::{self, Check, INSTANCES, SEED};

fn criterion(n: usize, title: &str, checks: Vec<Check>, started: Instant) -> bool {
    let passed = verify::all_passed(&checks);
    for c in checks.iter().filter(|c| !c.passed) {
        println!("    {c}");
    }
    println!(
        "{} criterion {n}: {title} ({} checks, {:.1?})",
        if passed { "PASS" } else { "FAIL" },
        checks.len(),
        started.elapsed()
    );
    passed
}

fn main() {
    let mut results = Vec::new();
    let t = Instant::now();
    results.push(criterion(1, "segments [0,k] have mu = 2/k", verify::segment_checks(), t));
    let t = Instant::now();
    results.push(criterion(2, "planar witnesses and the [0,3]^2 corpus", verify::planar_checks(), t));
    let t = Instant::now();
    results.push(criterion(3, "named three-dimensional polytopes", verify::named_checks(), t));
    let t = Instant::now();
    let numerators = [verify::numerator_checks_3d(), verify::numerator_checks_2d()].concat();
    results.push(criterion(4, "numerators in dimensions 2 and 3", numerators, t));
    let t = Instant::now();
    results.push(criterion(5, "pyramids", verify::pyramid_checks(), t));
    let t = Instant::now();
    results.push(criterion(6, "general dimension families and gaps", verify::general_d_checks(), t));
    let t = Instant::now();
    results.push(criterion(7, "property suites", verify::property_checks(SEED, INSTANCES), t));
    let t = Instant::now();
    results.push(criterion(8, "MILP soundness", verify::milp_checks(), t));
    if !results.iter().all(|&r| r) {
        eprintln!("some acceptance criteria failed");
        std::process::exit(1);
    }
}
