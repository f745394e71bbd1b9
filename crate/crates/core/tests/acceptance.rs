//! One line per acceptance criterion. Runs without the test harness so the
//! lines are always printed; exits nonzero if any criterion fails.

use alblab::paths::QuadratureConfig;
use alblab::selftest::{run_criterion, CriterionResult};

fn report(r: &CriterionResult) -> String {
    format!(
        "criterion {:>2} {:<30} {} cases={} failures={} worst={:.2e} threshold={:.0e} time={:.2}s budget={}s{}",
        r.id,
        r.name,
        if r.passed { "PASS" } else { "FAIL" },
        r.cases,
        r.failures,
        r.worst,
        r.threshold,
        r.seconds,
        r.budget_seconds,
        if r.detail.is_empty() { String::new() } else { format!(" ({})", r.detail) }
    )
}

fn main() {
    let cfg = QuadratureConfig::default();
    let results: Vec<CriterionResult> = (1..=11).map(|id| run_criterion(id, &cfg)).collect();
    for r in &results {
        println!("{}", report(r));
    }
    let failed: Vec<u8> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    if failed.is_empty() {
        println!("all {} criteria pass", results.len());
    } else {
        eprintln!("failing criteria: {failed:?}");
        std::process::exit(1);
    }
}
