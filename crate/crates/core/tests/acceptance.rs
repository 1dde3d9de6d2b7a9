//! One PASS/FAIL line per acceptance criterion. Runs without the libtest
//! harness so the lines always reach the output; exits nonzero on failure.

use std::time::{Duration, Instant};

use extremal::cli;
use extremal::suite::{CriterionResult, CRITERIA};

fn line(id: u32, name: &str, passed: bool, elapsed: Duration) -> String {
    format!("{} criterion {id:>2}: {name} ({:.2}s)", if passed { "PASS" } else { "FAIL" }, elapsed.as_secs_f64())
}

fn quick_suite_bytes() -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(["extremal", "verify", "--suite", "quick", "--no-envelope"], &mut out, &mut err);
    (code, out)
}

fn main() {
    let mut failures = Vec::new();
    for (id, f) in CRITERIA {
        let t = Instant::now();
        let r: CriterionResult = f();
        let elapsed = t.elapsed();
        // Criterion 3 carries its own wall-clock budget.
        let passed = r.passed && (id != 3 || elapsed < Duration::from_secs(60));
        println!("{}", line(id, &r.name, passed, elapsed));
        if !passed {
            println!("    details: {}", r.details);
            failures.push(id);
        }
    }

    let t = Instant::now();
    let (c1, a) = quick_suite_bytes();
    let (c2, b) = quick_suite_bytes();
    let same = c1 == 0 && c2 == 0 && a == b && !a.is_empty();
    println!("{}", line(11, "determinism of `verify --suite quick`", same, t.elapsed()));
    if !same {
        failures.push(11);
    }

    if failures.is_empty() {
        println!("acceptance: all {} criteria passed", CRITERIA.len() + 1);
    } else {
        println!("acceptance: failed criteria {failures:?}");
        std::process::exit(1);
    }
}
