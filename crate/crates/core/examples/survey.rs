//! Randomized orbit survey: sample Gaussian states, flow each one, and
//! aggregate stabilizer statistics.
//!
//! ```bash
//! cargo run -p knorbit --example survey
//! ```

use knorbit::atlas::{run_survey, SurveyConfig};

fn main() -> knorbit::Result<()> {
    let mut cfg = SurveyConfig::new("sl2x4", 40, 42);
    cfg.with_invariants = true;
    let report = run_survey(&cfg)?;

    println!(
        "{}: {} samples, {} critical, d_estimate = {:?}, modal stabilizer dim = {:?}",
        cfg.rep_label, cfg.n_samples, report.n_critical, report.d_estimate, report.generic_stab_dim
    );
    for (key, count) in &report.histogram {
        println!("  {key:16} {count}");
    }
    Ok(())
}
