//! The acceptance suite: one PASS/FAIL line per criterion, nonzero exit if
//! any criterion fails.  Set `DERIVATOR_SEED` to vary the random inputs.

use std::process::ExitCode;

use derivator::acceptance::{run_criterion, CRITERIA};

fn main() -> ExitCode {
    let seed = std::env::var("DERIVATOR_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(0);
    println!("acceptance suite, seed {seed}");
    let mut failed = 0;
    for &(id, _) in CRITERIA.iter() {
        let r = run_criterion(id, seed);
        println!("{r}");
        failed += usize::from(!r.pass);
    }
    println!("{} of {} criteria passed", CRITERIA.len() - failed, CRITERIA.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
