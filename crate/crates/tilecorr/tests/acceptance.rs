//! Acceptance suite: one line per criterion, then the failing checks in detail.
//! Runs without the test harness so the report is always printed.

use std::process::ExitCode;

use tilecorr::verify::{run_all, Status, KNOWN_DEVIATIONS};

fn main() -> ExitCode {
    let reports = match run_all() {
        Ok(r) => r,
        Err(e) => {
            eprintln!("acceptance: evaluation error: {e}");
            return ExitCode::FAILURE;
        }
    };
    println!("\nacceptance criteria");
    for r in &reports {
        println!("{}", r.line());
    }
    for r in &reports {
        for c in r.checks.iter().filter(|c| !c.passed) {
            println!("  criterion {} {:?} check failed: {}: {}", r.id, c.kind, c.label, c.detail);
        }
    }
    let failed: Vec<u8> = reports.iter().filter(|r| r.status() == Status::Fail).map(|r| r.id).collect();
    let mut literal: Vec<String> = reports.iter().flat_map(|r| r.literal_failures()).collect();
    literal.sort();
    let mut known: Vec<String> = KNOWN_DEVIATIONS.iter().map(|s| s.to_string()).collect();
    known.sort();
    let mut ok = true;
    if reports.len() != 11 {
        println!("expected 11 criteria, got {}", reports.len());
        ok = false;
    }
    if !failed.is_empty() {
        println!("failing criteria: {failed:?}");
        ok = false;
    }
    if literal != known {
        println!("documented deviations changed: observed {literal:?}");
        ok = false;
    }
    println!("acceptance: {}", if ok { "ok" } else { "FAILED" });
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
