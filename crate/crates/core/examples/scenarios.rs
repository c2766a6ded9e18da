//! Run the three built-in scenarios and print their assertion tables.
//!
//! ```bash
//! cargo run -p knorbit --example scenarios
//! ```

use knorbit::scenarios::{run_example, scenario_names};

fn main() -> knorbit::Result<()> {
    let mut all = true;
    for name in scenario_names() {
        let report = run_example(name)?;
        println!("{name} — {}", if report.passed { "PASS" } else { "FAIL" });
        for a in &report.assertions {
            println!("  [{}] {:32} {}", if a.passed { "ok" } else { "XX" }, a.name, a.detail);
        }
        all &= report.passed;
    }
    std::process::exit(if all { 0 } else { 1 });
}
