//! Build every registered representation and print its validation report.
//!
//! ```bash
//! cargo run -p knorbit --example build_reps
//! ```

use knorbit::rep::{registry_labels, rep_from_label, validate_rep};

fn main() -> knorbit::Result<()> {
    for label in registry_labels() {
        let rep = rep_from_label(label)?;
        let diag = validate_rep(&rep);
        println!(
            "{:8} dim_v = {:2}  group_dim = {:2}  skew-Hermitian: {}  bracket residual: {:.2e}  min sv: {:.2e}  [{}]",
            rep.label(),
            rep.dim_v(),
            rep.group_dim(),
            diag.skew_hermitian.passed,
            diag.bracket_closure.measure,
            diag.linear_independence.measure,
            if diag.all_passed() { "ok" } else { "FAILED" },
        );

        let ext = rep_from_label(&format!("{label}+scalars"))?;
        println!(
            "{:8}   scalar extension: group_dim = {} ({})",
            "", ext.group_dim(), ext.label()
        );
    }
    Ok(())
}
