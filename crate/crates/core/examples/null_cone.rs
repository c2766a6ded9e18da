//! Classify orbits as closed or null-cone, cross-checking the flow verdict
//! against the polynomial invariants.
//!
//! ```bash
//! cargo run -p knorbit --example null_cone
//! ```

use knorbit::atlas::{sample_gaussian_vector, sample_rng};
use knorbit::flow::{classify_orbit, FlowConfig};
use knorbit::invariants::d4_invariant_set;
use knorbit::rep::rep_from_label;
use knorbit::scenarios::nilpotent_4qubit;

fn main() -> knorbit::Result<()> {
    let rep = rep_from_label("sl2x4")?;
    let invariants = d4_invariant_set().pullback_via_spin()?;

    let nilpotent = nilpotent_4qubit();
    let verdict = classify_orbit(&rep, &nilpotent, &FlowConfig::default(), Some(&invariants))?;
    println!(
        "nilpotent element: {:?} ({}; {} iterations, max invariant {:.2e})",
        verdict.class,
        verdict.note,
        verdict.flow.iterations,
        verdict.invariant_values.as_ref().map(|e| e.max_relative()).unwrap_or(f64::NAN),
    );

    let mut rng = sample_rng(7, 0);
    let generic = sample_gaussian_vector(rep.dim_v(), &mut rng);
    let verdict = classify_orbit(&rep, &generic, &FlowConfig::default(), Some(&invariants))?;
    println!(
        "generic Gaussian:  {:?} ({}; {} iterations, max invariant {:.2e})",
        verdict.class,
        verdict.note,
        verdict.flow.iterations,
        verdict.invariant_values.as_ref().map(|e| e.max_relative()).unwrap_or(f64::NAN),
    );
    Ok(())
}
