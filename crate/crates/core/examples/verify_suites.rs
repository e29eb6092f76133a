//! Runs the built-in verification suites and prints each check.
//!
//! `cargo run --release --example verify_suites`

use skewscope::verify::{run_suite, Suite, VerifyOptions};

fn main() -> skewscope::Result<()> {
    let opts = VerifyOptions { trials: 5, ..VerifyOptions::default() };
    for suite in [Suite::Identities, Suite::Generators, Suite::OracleEquivalence, Suite::LevelK] {
        let report = run_suite(suite, &opts)?;
        println!("== {} ({})", suite.name(), if report.passed() { "ok" } else { "FAILED" });
        for check in &report.checks {
            println!("  {check}");
        }
    }
    Ok(())
}
