//! Running a configured verification suite and printing the per-family
//! tally. The configuration is the same JSON the command line accepts.

use qaffine::relations::{run_suite, SuiteConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = SuiteConfig::from_json(r#"{"type": "A", "rank": 2, "families": ["D1..D5", "X1"], "seed": 7}"#)?;
    for (key, value) in cfg.summary() {
        println!("{key:<14} {value}");
    }
    let report = run_suite(&cfg)?;
    for (family, t) in report.by_family() {
        println!(
            "{family:<8} pass {:>4}  fail {:>2}  skipped {:>2}  states {}",
            t.pass, t.fail, t.skipped, t.tested_states
        );
    }
    println!("failures: {}", report.failures());
    Ok(())
}
