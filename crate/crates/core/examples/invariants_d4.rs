//! Evaluate the degree-(2,4,4,6) invariants on 4x4 matrices, pull them back
//! to 4-qubit tensors, and use them as a null-cone oracle.
//!
//! ```bash
//! cargo run -p knorbit --example invariants_d4
//! ```

use knorbit::invariants::d4_invariant_set;
use knorbit::scenarios::{diag_1234_vector, nilpotent_4qubit};
use knorbit::stabilizer::compute_r;
use knorbit::tol;

fn main() -> knorbit::Result<()> {
    let set = d4_invariant_set();
    let d = diag_1234_vector();
    let ev = set.evaluate_all(d.as_vector())?;
    println!("at diag(1,2,3,4):");
    for ((name, deg), val) in ev.names.iter().zip(&ev.degrees).zip(&ev.values) {
        println!("  {name:12} (degree {deg}): {:.6} + {:.6}i", val.re, val.im);
    }
    println!("  null cone: {}", set.null_cone_test(d.as_vector(), tol::NULL_CONE_TEST)?);
    println!("  r = {}", compute_r(&set, d.as_vector())?);

    let pulled = set.pullback_via_spin()?;
    let x = nilpotent_4qubit();
    let ev = pulled.evaluate_all(x.as_vector())?;
    println!("pulled back to the 4-qubit nilpotent:");
    for ((name, deg), val) in ev.names.iter().zip(&ev.degrees).zip(&ev.values) {
        println!("  {name:12} (degree {deg}): {:.2e}", val.norm());
    }
    println!("  null cone: {}", pulled.null_cone_test(x.as_vector(), tol::NULL_CONE_TEST)?);
    match compute_r(&pulled, x.as_vector()) {
        Ok(r) => println!("  r = {r}"),
        Err(e) => println!("  r: {e}"),
    }
    Ok(())
}
