//! Acceptance suite: one PASS/FAIL line per criterion with its wall time and budget.
//! Optional arguments restrict the run to the listed criterion numbers.

use oddu_core::selftest::{run_criterion, CRITERIA};
use std::process::ExitCode;
use std::time::Instant;

fn main() -> ExitCode {
    let only: Vec<u8> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let seed = std::env::var("ODDU_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(0);
    let mut failed = 0;
    for (id, name, budget) in CRITERIA {
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let res = run_criterion(id, seed);
        let secs = start.elapsed().as_secs_f64();
        let in_time = secs <= budget as f64;
        match res {
            Ok(r) if r.passed && in_time => {
                println!("PASS  {id} {name}: {} checks, {:.2}s (budget {budget}s); {}", r.checks, secs, r.detail);
            }
            Ok(r) => {
                failed += 1;
                let why = if r.passed { "over budget".to_string() } else { format!("{} failures", r.failures.len()) };
                println!("FAIL  {id} {name}: {why}, {} checks, {:.2}s (budget {budget}s); {}", r.checks, secs, r.detail);
                for f in &r.failures {
                    println!("      {f}");
                }
            }
            Err(e) => {
                failed += 1;
                println!("FAIL  {id} {name}: error {e}, {:.2}s (budget {budget}s)", secs);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
