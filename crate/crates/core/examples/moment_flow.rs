//! Flow a random 4-qubit state to its orbit-norm minimizer and print the
//! JSON report (down-sampled energy trace included).
//!
//! ```bash
//! cargo run -p knorbit --example moment_flow
//! ```

use knorbit::atlas::{sample_gaussian_vector, sample_rng};
use knorbit::flow::{minimize_norm, moment_components, FlowConfig};
use knorbit::rep::rep_from_label;

fn main() -> knorbit::Result<()> {
    let rep = rep_from_label("sl2x4")?;
    let mut rng = sample_rng(2024, 0);
    let v0 = sample_gaussian_vector(rep.dim_v(), &mut rng);

    let before = moment_components(&rep, &v0)?;
    println!("start:  |v|^2 = {:.6}  |moment| = {:.6}", before.norm_sq_v, before.norm());

    let result = minimize_norm(&rep, &v0, &FlowConfig::default())?;
    let after = moment_components(&rep, &result.final_vector)?;
    println!(
        "end:    |v|^2 = {:.6}  |moment| = {:.3e}  ({:?} in {} iterations)",
        after.norm_sq_v,
        after.norm(),
        result.status,
        result.iterations
    );

    println!("{}", serde_json::to_string_pretty(&result.to_json()).expect("serializable"));
    Ok(())
}
