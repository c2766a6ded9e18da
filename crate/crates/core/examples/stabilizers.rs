//! Stabilizer algebras and phase stabilizers at the built-in 5-qubit
//! critical state.
//!
//! ```bash
//! cargo run -p knorbit --example stabilizers
//! ```

use knorbit::rep::rep_from_label;
use knorbit::scenarios::{critical_5qubit, phase_gate_a_pow5};
use knorbit::stabilizer::{extended_stabilizer_lie, phase_check, stabilizer_lie};
use knorbit::tol;

fn main() -> knorbit::Result<()> {
    let rep = rep_from_label("sl2x5")?;
    let v = critical_5qubit();

    let base = stabilizer_lie(&rep, &v)?;
    println!(
        "base:     lie_dim = {}  orbit_dim = {}  (smallest sigma {:.2e})",
        base.lie_dim,
        base.orbit_dim,
        base.singular_values.last().copied().unwrap_or(0.0)
    );

    let ext = extended_stabilizer_lie(&rep, &v)?;
    println!("extended: lie_dim = {}  orbit_dim = {}", ext.lie_dim, ext.orbit_dim);

    // the diagonal tensor-power gate multiplies v by an eighth root of unity
    let g = phase_gate_a_pow5();
    match phase_check(&g, &v, tol::PHASE_TOL)? {
        Some(hit) => println!(
            "phase stabilizer: chi = {:.6} + {:.6}i, order {}",
            hit.phase.re, hit.phase.im, hit.phase_order
        ),
        None => println!("phase stabilizer: no hit"),
    }
    Ok(())
}
