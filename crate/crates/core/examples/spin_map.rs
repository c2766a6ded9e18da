//! Inspect the unitary bridge between 4-qubit tensors and 4x4 matrices:
//! where each tensor-side generator lands, and how small the intertwining
//! residuals are.
//!
//! ```bash
//! cargo run -p knorbit --example spin_map
//! ```

use knorbit::rep::{build_sl2_tensor_rep, build_so4_pair_rep};
use knorbit::spin::spin_isomorphism;

fn main() -> knorbit::Result<()> {
    let phi = spin_isomorphism();
    let sl2x4 = build_sl2_tensor_rep(4)?;
    let so4 = build_so4_pair_rep();

    let images = phi.generator_images(&sl2x4, &so4)?;
    println!("generator images (tensor side -> matrix side):");
    let mut worst: f64 = 0.0;
    for img in &images {
        let side = if img.coefficients.rows(0, 6).norm() > 1e-9 { "left " } else { "right" };
        println!(
            "  generator {:2} -> {side} action, residual {:.2e}",
            img.source_index, img.residual
        );
        worst = worst.max(img.residual);
    }
    println!("worst residual: {worst:.2e}");
    Ok(())
}
