//! Unitary identification of 4-qubit tensors with 4x4 matrices.
//!
//! The magic basis `Q` turns the symmetric bilinear form `eps (x) eps` on
//! `C^2 (x) C^2` into the identity, so conjugation by `Q` carries
//! `SL(2) x SL(2)` into `SO(4,C)`. Grouping qubits (1,2) as the row factor
//! and (3,4) as the column factor, and identifying `u (x) w` with the
//! rank-one matrix `u w^T`, yields a unitary `Phi: (C^2)^{(x)4} -> M_4(C)`
//! that intertwines the tensor action with `(g,h) X = g X h^{-1}`.
//!
//! With the row-major flattening used everywhere in this crate, the matrix
//! of `Phi` is simply `Q^* (x) Q^*`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{KnError, Result};
use crate::rep::{Representation, StateVector};

const C0: Complex64 = Complex64::new(0.0, 0.0);

/// The fixed 4x4 magic-basis unitary. Columns (in qubit basis 00,01,10,11):
/// `(e00+e11)/s`, `-i(e00-e11)/s`, `(e01-e10)/s`, `-i(e01+e10)/s` with
/// `s = sqrt(2)`. Satisfies `Q Q^T = eps (x) eps`.
pub fn magic_q() -> DMatrix<Complex64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let r = |x: f64| Complex64::new(x, 0.0);
    let i = |x: f64| Complex64::new(0.0, x);
    DMatrix::from_row_slice(4, 4, &[
        r(s), i(-s), C0, C0, //
        C0, C0, r(s), i(-s), //
        C0, C0, r(-s), i(-s), //
        r(s), i(s), C0, C0,
    ])
}

/// The unitary change of basis between the 4-qubit module and `M_4(C)`.
#[derive(Clone, Debug)]
pub struct SpinIsomorphism {
    map: DMatrix<Complex64>,
}

impl Default for SpinIsomorphism {
    fn default() -> Self {
        Self::new()
    }
}

impl SpinIsomorphism {
    pub fn new() -> Self {
        let q_star = magic_q().adjoint();
        Self { map: q_star.kronecker(&q_star) }
    }

    /// The 16x16 unitary matrix of the map (tensor coordinates to row-major
    /// matrix coordinates).
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.map
    }

    /// Maps a 4-qubit tensor to the flattened 4x4 matrix.
    pub fn apply(&self, t: &StateVector) -> Result<StateVector> {
        if t.dim() != 16 {
            return Err(KnError::DimensionMismatch { expected: 16, got: t.dim() });
        }
        StateVector::new(&self.map * t.as_vector())
    }

    /// Inverse map (adjoint, since the map is unitary).
    pub fn apply_inverse(&self, x: &StateVector) -> Result<StateVector> {
        if x.dim() != 16 {
            return Err(KnError::DimensionMismatch { expected: 16, got: x.dim() });
        }
        StateVector::new(self.map.adjoint() * x.as_vector())
    }

    /// Conjugates an operator on the tensor side into the matrix side:
    /// `X -> Phi X Phi^*`.
    pub fn conjugate_operator(&self, x: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        &self.map * x * self.map.adjoint()
    }

    /// Expresses the image of each tensor-side generator in the matrix-side
    /// basis. Returns, per generator, the real coefficient vector over the
    /// target `Lie(K)` basis and the residual left after projection (which
    /// certifies that the induced homomorphism lands in the target algebra).
    pub fn generator_images(
        &self,
        source: &Representation,
        target: &Representation,
    ) -> Result<Vec<GeneratorImage>> {
        if source.dim_v() != 16 || target.dim_v() != 16 {
            return Err(KnError::DimensionMismatch { expected: 16, got: source.dim_v().max(target.dim_v()) });
        }
        // The target basis elements are pairwise Frobenius-orthogonal for the
        // built-in so4pair basis; project with normalized inner products and
        // measure what is left over.
        let mut out = Vec::with_capacity(source.group_dim());
        for j in 0..source.group_dim() {
            let image = self.conjugate_operator(source.generator(j));
            let mut coeffs = DVector::from_element(target.group_dim(), 0.0f64);
            let mut remainder = image.clone();
            for (t, y) in target.k_basis().iter().enumerate() {
                let denom = frobenius_inner(y, y).re;
                let c = frobenius_inner(&image, y) / Complex64::new(denom, 0.0);
                coeffs[t] = c.re;
                remainder -= y * Complex64::new(c.re, 0.0);
            }
            let residual = remainder.norm();
            out.push(GeneratorImage { source_index: j, coefficients: coeffs, residual });
        }
        Ok(out)
    }
}

/// Image of one source generator under the induced algebra homomorphism.
#[derive(Clone, Debug)]
pub struct GeneratorImage {
    pub source_index: usize,
    /// Real coefficients over the target `Lie(K)` basis.
    pub coefficients: DVector<f64>,
    /// Frobenius norm of the part of the image outside the target algebra.
    pub residual: f64,
}

fn frobenius_inner(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> Complex64 {
    let mut acc = C0;
    for (x, y) in a.iter().zip(b.iter()) {
        acc += x * y.conj();
    }
    acc
}

/// Convenience constructor mirroring the builder naming of [`crate::rep`].
pub fn spin_isomorphism() -> SpinIsomorphism {
    SpinIsomorphism::new()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::{build_sl2_tensor_rep, build_so4_pair_rep};
    use crate::tol;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_tensor(rng: &mut impl Rng) -> DVector<Complex64> {
        DVector::from_fn(16, |_, _| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
    }

    #[test]
    fn magic_q_is_unitary_and_diagonalizes_the_form() {
        let q = magic_q();
        let dev = (&q * q.adjoint() - DMatrix::identity(4, 4)).norm();
        assert!(dev < 1e-15, "unitarity dev {dev}");

        // eps (x) eps in qubit ordering is antidiag(1,-1,-1,1)
        let mut t = DMatrix::from_element(4, 4, C0);
        t[(0, 3)] = Complex64::new(1.0, 0.0);
        t[(1, 2)] = Complex64::new(-1.0, 0.0);
        t[(2, 1)] = Complex64::new(-1.0, 0.0);
        t[(3, 0)] = Complex64::new(1.0, 0.0);
        let dev = (&q * q.transpose() - t).norm();
        assert!(dev < 1e-15, "Q Q^T dev {dev}");
    }

    #[test]
    fn phi_is_unitary() {
        let phi = SpinIsomorphism::new();
        let dev = (phi.matrix() * phi.matrix().adjoint() - DMatrix::identity(16, 16)).norm();
        assert!(dev < 1e-12, "dev {dev}");
    }

    #[test]
    fn generator_images_land_in_so4_pair_algebra() {
        let phi = SpinIsomorphism::new();
        let sl2x4 = build_sl2_tensor_rep(4).unwrap();
        let so4 = build_so4_pair_rep();
        let images = phi.generator_images(&sl2x4, &so4).unwrap();
        assert_eq!(images.len(), 12);
        for img in &images {
            assert!(img.residual < tol::SPIN_INTERTWINE, "generator {} residual {}", img.source_index, img.residual);
        }
        // qubits 1,2 act on the left (rows), qubits 3,4 on the right (columns)
        for img in &images[..6] {
            assert!(img.coefficients.rows(6, 6).norm() < 1e-12);
        }
        for img in &images[6..] {
            assert!(img.coefficients.rows(0, 6).norm() < 1e-12);
        }
    }

    #[test]
    fn intertwining_on_random_tensors() {
        let phi = SpinIsomorphism::new();
        let sl2x4 = build_sl2_tensor_rep(4).unwrap();
        let so4 = build_so4_pair_rep();
        let images = phi.generator_images(&sl2x4, &so4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut worst: f64 = 0.0;
        for _ in 0..20 {
            let t = random_tensor(&mut rng);
            for (j, img) in images.iter().enumerate() {
                let lhs = &phi.map * (sl2x4.generator(j) * &t);
                let mut target_op = DMatrix::from_element(16, 16, C0);
                for (c, y) in img.coefficients.iter().zip(so4.k_basis()) {
                    target_op += y * Complex64::new(*c, 0.0);
                }
                let rhs = target_op * (&phi.map * &t);
                worst = worst.max((lhs - rhs).norm() / t.norm());
            }
        }
        assert!(worst < tol::SPIN_INTERTWINE, "worst intertwining residual {worst}");
    }
}
