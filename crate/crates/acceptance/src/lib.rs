//! Scorecard runner for the acceptance target: one PASS/FAIL line per
//! criterion, then a summary.

use std::process::ExitCode;
use std::time::Instant;

pub type Outcome = Result<(), String>;

/// A titled check.
pub type Criterion = (&'static str, fn() -> Outcome);

/// Returns `Err(format!(...))` from the enclosing function unless `cond`.
#[macro_export]
macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

/// Runs every criterion, printing its line as soon as it finishes. A panic
/// counts as a failure.
pub fn report(criteria: &[Criterion]) -> ExitCode {
    let mut failures = 0;
    for (i, (title, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("PASS  criterion {}: {title} ({secs:.2}s)", i + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL  criterion {}: {title} ({secs:.2}s): {why}", i + 1);
            }
        }
    }
    println!("{}/{} criteria pass", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
