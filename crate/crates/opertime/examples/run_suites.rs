//! Run every experiment suite into ./reports and summarize the verdicts.

use opertime::suites::{run_experiment, ExperimentConfig, SuiteName};

fn main() -> opertime::Result<()> {
    let mut all = true;
    for suite in SuiteName::ALL {
        let cfg = ExperimentConfig::new(suite);
        let outcome = run_experiment(&cfg)?;
        println!(
            "{:<18} {}",
            suite.as_str(),
            if outcome.passed { "PASS" } else { "FAIL" }
        );
        all &= outcome.passed;
    }
    println!("overall: {}", if all { "PASS" } else { "FAIL" });
    Ok(())
}
