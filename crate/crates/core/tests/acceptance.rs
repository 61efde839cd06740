//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs every experiment at full size. Pass experiment ids as arguments to run
//! a subset, e.g. `cargo test --test acceptance -- ac7 ac8`.

use std::process::ExitCode;

use isde::experiments::{run, IDS};

fn main() -> ExitCode {
    let requested: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).map(|a| a.to_ascii_lowercase()).collect();
    let ids: Vec<&str> = IDS.iter().copied().filter(|id| requested.is_empty() || requested.iter().any(|r| r == id)).collect();
    let mut failed = 0;
    for id in &ids {
        match run(id) {
            Ok(outcome) => {
                println!("{}", outcome.summary_line());
                if !outcome.passed {
                    failed += 1;
                }
            }
            Err(e) => {
                println!("FAIL {}: {e}", id.to_uppercase());
                failed += 1;
            }
        }
    }
    println!("{} of {} acceptance criteria passed", ids.len() - failed, ids.len());
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
