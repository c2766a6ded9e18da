//! Matrix realizations of the groups and Lie algebras the toolkit works with.
//!
//! A [`Representation`] stores a basis of the compact real form `Lie(K)` as
//! skew-Hermitian matrices on `C^n`; the full reductive algebra `Lie(G)` is
//! its complex span. Built-in constructions cover `SL(2,C)^{(x)k}` on k-fold
//! qubit tensors, their scalar extensions, and the `SO(4,C) x SO(4,C)` action
//! on 4x4 matrices (flattened row-major).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{KnError, Result};
use crate::tol;

const C0: Complex64 = Complex64::new(0.0, 0.0);
const C1: Complex64 = Complex64::new(1.0, 0.0);

/// A finite-dimensional module together with a basis of `Lie(K)`.
///
/// Invariants enforced at construction: every basis element is exactly
/// skew-Hermitian and matches the module dimension. Bracket closure and
/// linear independence are measured by [`validate_rep`].
#[derive(Clone, Debug)]
pub struct Representation {
    dim_v: usize,
    k_basis: Vec<DMatrix<Complex64>>,
    label: String,
}

impl Representation {
    /// Wraps a basis after checking shapes and exact skew-Hermiticity.
    pub fn new(label: impl Into<String>, dim_v: usize, k_basis: Vec<DMatrix<Complex64>>) -> Result<Self> {
        if dim_v == 0 {
            return Err(KnError::InvalidInput("module dimension must be positive".into()));
        }
        if k_basis.is_empty() {
            return Err(KnError::InvalidInput("k_basis must be nonempty".into()));
        }
        for (j, x) in k_basis.iter().enumerate() {
            if x.nrows() != dim_v || x.ncols() != dim_v {
                return Err(KnError::DimensionMismatch { expected: dim_v, got: x.nrows() });
            }
            if !is_skew_hermitian(x) {
                return Err(KnError::InvalidInput(format!(
                    "k_basis element {j} is not skew-Hermitian"
                )));
            }
        }
        Ok(Self { dim_v, k_basis, label: label.into() })
    }

    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    /// Complex dimension of `Lie(G)` (= number of `Lie(K)` basis elements).
    pub fn group_dim(&self) -> usize {
        self.k_basis.len()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn k_basis(&self) -> &[DMatrix<Complex64>] {
        &self.k_basis
    }

    pub fn generator(&self, j: usize) -> &DMatrix<Complex64> {
        &self.k_basis[j]
    }
}

/// How a group element was produced, for reporting.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Label(String),
    ExpCoefficients(#[serde(with = "crate::cjson::cvec")] Vec<Complex64>),
}

/// An invertible matrix acting on the module.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupElement {
    #[serde(with = "crate::cjson::cmat")]
    matrix: DMatrix<Complex64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    provenance: Option<Provenance>,
}

impl GroupElement {
    /// Accepts a square matrix after checking finiteness and conditioning
    /// (singular-value ratio at most [`tol::CONDITION_MAX`]).
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(KnError::InvalidInput("group element must be square".into()));
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(KnError::InvalidInput("group element has non-finite entries".into()));
        }
        let svals = matrix.clone().singular_values();
        let smax = svals.iter().cloned().fold(0.0f64, f64::max);
        let smin = svals.iter().cloned().fold(f64::INFINITY, f64::min);
        if smax == 0.0 || smin == 0.0 || smax / smin > tol::CONDITION_MAX {
            return Err(KnError::InvalidInput(format!(
                "group element is singular or badly conditioned (sigma ratio {:.3e})",
                if smin > 0.0 { smax / smin } else { f64::INFINITY }
            )));
        }
        Ok(Self { matrix, provenance: None })
    }

    pub fn with_provenance(mut self, p: Provenance) -> Self {
        self.provenance = Some(p);
        self
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self { matrix: self.matrix.adjoint(), provenance: None }
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        if v.dim() != self.dim() {
            return Err(KnError::DimensionMismatch { expected: self.dim(), got: v.dim() });
        }
        StateVector::new(&self.matrix * v.as_vector())
    }
}

/// A point of the module `V = C^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector(DVector<Complex64>);

impl StateVector {
    pub fn new(entries: DVector<Complex64>) -> Result<Self> {
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(KnError::InvalidInput("state vector has non-finite entries".into()));
        }
        Ok(Self(entries))
    }

    pub fn from_entries(entries: Vec<Complex64>) -> Result<Self> {
        Self::new(DVector::from_vec(entries))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(DVector::from_element(dim, C0))
    }

    /// Standard basis vector `e_index`.
    pub fn basis_state(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(KnError::InvalidInput(format!("basis index {index} out of range for dim {dim}")));
        }
        let mut v = DVector::from_element(dim, C0);
        v[index] = C1;
        Ok(Self(v))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.norm_squared()
    }

    pub fn as_vector(&self) -> &DVector<Complex64> {
        &self.0
    }

    pub fn into_vector(self) -> DVector<Complex64> {
        self.0
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self(&self.0 * c)
    }
}

impl Serialize for StateVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(|z| [z.re, z.im]))
    }
}

impl<'de> Deserialize<'de> for StateVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<[f64; 2]>::deserialize(d)?;
        let entries: Vec<Complex64> = raw.into_iter().map(|p| Complex64::new(p[0], p[1])).collect();
        StateVector::from_entries(entries).map_err(serde::de::Error::custom)
    }
}

/// Hermitian inner product, conjugate-linear in the second argument:
/// `inner(x, y) = sum_i x_i * conj(y_i)`.
pub fn inner(x: &DVector<Complex64>, y: &DVector<Complex64>) -> Complex64 {
    y.dotc(x)
}

fn is_skew_hermitian(x: &DMatrix<Complex64>) -> bool {
    let n = x.nrows();
    for i in 0..n {
        for j in 0..=i {
            let a = x[(i, j)];
            let b = x[(j, i)];
            if a.re != -b.re || a.im != b.im {
                return false;
            }
        }
    }
    true
}

/// Compact `sl(2)` generators `(i/2) * sigma_{x,y,z}`; brackets close with
/// unit structure constants: `[t_x, t_y] = -t_z` cyclically.
pub fn sl2_compact_generators() -> [DMatrix<Complex64>; 3] {
    let i2 = Complex64::new(0.0, 0.5);
    let tx = DMatrix::from_row_slice(2, 2, &[C0, i2, i2, C0]);
    let ty = DMatrix::from_row_slice(2, 2, &[C0, Complex64::new(0.5, 0.0), Complex64::new(-0.5, 0.0), C0]);
    let tz = DMatrix::from_row_slice(2, 2, &[i2, C0, C0, -i2]);
    [tx, ty, tz]
}

fn identity(n: usize) -> DMatrix<Complex64> {
    DMatrix::identity(n, n)
}

/// `SL(2,C)^{(x)k}` acting on `(C^2)^{(x)k}`.
///
/// The basis has `3k` elements ordered factor-major: index `3p + a` places
/// generator `a` (x, y, z) at tensor position `p` with identities elsewhere.
pub fn build_sl2_tensor_rep(k: usize) -> Result<Representation> {
    if !(2..=6).contains(&k) {
        return Err(KnError::InvalidInput(format!("tensor factor count {k} outside supported range 2..=6")));
    }
    let gens = sl2_compact_generators();
    let dim = 1usize << k;
    let mut basis = Vec::with_capacity(3 * k);
    for p in 0..k {
        for g in &gens {
            let left = identity(1 << p);
            let right = identity(1 << (k - p - 1));
            basis.push(left.kronecker(g).kronecker(&right));
        }
    }
    Representation::new(format!("sl2x{k}"), dim, basis)
}

/// Appends `i * Identity`, modeling the compact direction of the scalar
/// extension `C^x G` (maximal compact `S^1 K`).
pub fn extend_with_scalars(rep: &Representation) -> Result<Representation> {
    let n = rep.dim_v();
    let i_id = identity(n) * Complex64::new(0.0, 1.0);
    for x in rep.k_basis() {
        if (x - &i_id).norm() < 1e-12 {
            return Err(KnError::InvalidInput(
                "representation already contains i*Identity; scalar extension applied twice?".into(),
            ));
        }
    }
    let mut basis = rep.k_basis().to_vec();
    basis.push(i_id);
    Representation::new(format!("{}+scalars", rep.label()), n, basis)
}

/// Standard antisymmetric basis of `so(4)`: `E_ij - E_ji` for `i < j`,
/// ordered (0,1), (0,2), (0,3), (1,2), (1,3), (2,3).
pub fn so4_antisymmetric_basis() -> Vec<DMatrix<Complex64>> {
    let mut out = Vec::with_capacity(6);
    for i in 0..4 {
        for j in (i + 1)..4 {
            let mut a = DMatrix::from_element(4, 4, C0);
            a[(i, j)] = C1;
            a[(j, i)] = -C1;
            out.push(a);
        }
    }
    out
}

/// `SO(4,C) x SO(4,C)` acting on `M_4(C)` by `(g,h) X = g X h^{-1}`,
/// flattened row-major to `C^16`.
///
/// The 12 generators are the 6 left multiplications `M -> A M` followed by
/// the 6 right multiplications `M -> -M B`, over the antisymmetric basis.
/// With row-major flattening these are `A (x) I` and `I (x) B` respectively.
pub fn build_so4_pair_rep() -> Representation {
    let i4 = identity(4);
    let mut basis = Vec::with_capacity(12);
    for a in so4_antisymmetric_basis() {
        basis.push(a.kronecker(&i4));
    }
    for b in so4_antisymmetric_basis() {
        // M -> -M B has matrix -(I (x) B^T) = I (x) B for antisymmetric B.
        basis.push(i4.kronecker(&b));
    }
    Representation::new("so4pair", 16, basis).expect("built-in so4pair basis is skew-Hermitian")
}

/// Looks up a built-in representation: `sl2x2` ... `sl2x6`, `so4pair`,
/// each optionally suffixed `+scalars`.
pub fn rep_from_label(label: &str) -> Result<Representation> {
    let (base, extend) = match label.strip_suffix("+scalars") {
        Some(b) => (b, true),
        None => (label, false),
    };
    let rep = match base {
        "so4pair" => build_so4_pair_rep(),
        _ => {
            let k = base
                .strip_prefix("sl2x")
                .and_then(|s| s.parse::<usize>().ok())
                .ok_or_else(|| KnError::UnknownLabel(label.to_string()))?;
            build_sl2_tensor_rep(k).map_err(|_| KnError::UnknownLabel(label.to_string()))?
        }
    };
    if extend {
        extend_with_scalars(&rep)
    } else {
        Ok(rep)
    }
}

/// Labels accepted by [`rep_from_label`] (base forms).
pub fn registry_labels() -> Vec<&'static str> {
    vec!["sl2x2", "sl2x3", "sl2x4", "sl2x5", "sl2x6", "so4pair"]
}

/// The algebra element `sum_j coeffs_j X_j` over the `Lie(K)` basis.
pub fn algebra_element(rep: &Representation, coeffs: &[Complex64]) -> Result<DMatrix<Complex64>> {
    if coeffs.len() != rep.group_dim() {
        return Err(KnError::DimensionMismatch { expected: rep.group_dim(), got: coeffs.len() });
    }
    if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(KnError::InvalidInput("non-finite coefficients".into()));
    }
    let n = rep.dim_v();
    let mut z = DMatrix::from_element(n, n, C0);
    for (c, x) in coeffs.iter().zip(rep.k_basis()) {
        z += x * *c;
    }
    Ok(z)
}

/// `exp(sum_j coeffs_j X_j)` as a group element.
pub fn group_element_from_coeffs(rep: &Representation, coeffs: &[Complex64]) -> Result<GroupElement> {
    let z = algebra_element(rep, coeffs)?;
    let g = z.exp();
    Ok(GroupElement::new(g)?.with_provenance(Provenance::ExpCoefficients(coeffs.to_vec())))
}

/// Applies `exp(sum_j coeffs_j X_j)` to a state.
pub fn exp_action(rep: &Representation, coeffs: &[Complex64], v: &StateVector) -> Result<StateVector> {
    if v.dim() != rep.dim_v() {
        return Err(KnError::DimensionMismatch { expected: rep.dim_v(), got: v.dim() });
    }
    let z = algebra_element(rep, coeffs)?;
    StateVector::new(z.exp() * v.as_vector())
}

/// Loads candidate group elements from a JSON array of matrices
/// (each an array of rows of `[re, im]` entries).
pub fn group_elements_from_matrix_json(value: &serde_json::Value) -> Result<Vec<GroupElement>> {
    let arr = value
        .as_array()
        .ok_or_else(|| KnError::InvalidInput("expected a JSON array of matrices".into()))?;
    arr.iter()
        .map(|m| GroupElement::new(crate::cjson::matrix_from_value(m)?))
        .collect()
}

/// Outcome of one validation check.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub passed: bool,
    pub measure: f64,
}

/// Diagnostic report for a representation basis.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RepDiagnostics {
    pub label: String,
    pub dim_v: usize,
    pub group_dim: usize,
    /// Exact by construction; reported for completeness.
    pub skew_hermitian: CheckOutcome,
    /// Largest Frobenius residual of any bracket projected off the span.
    pub bracket_closure: CheckOutcome,
    /// Smallest singular value of the flattened basis matrix.
    pub linear_independence: CheckOutcome,
}

impl RepDiagnostics {
    pub fn all_passed(&self) -> bool {
        self.skew_hermitian.passed && self.bracket_closure.passed && self.linear_independence.passed
    }
}

/// Checks skew-Hermiticity, bracket closure of the complex span, and linear
/// independence of the basis.
pub fn validate_rep(rep: &Representation) -> RepDiagnostics {
    let n = rep.dim_v();
    let m = rep.group_dim();

    let skew = rep.k_basis().iter().all(is_skew_hermitian);

    // Flatten each basis element into a column; orthonormalize via SVD.
    let flat = DMatrix::from_fn(n * n, m, |r, j| rep.generator(j)[(r / n, r % n)]);
    let svd = flat.clone().svd(true, false);
    let smin = svd.singular_values.iter().cloned().fold(f64::INFINITY, f64::min);
    let u = svd.u.expect("svd with u requested");
    let rank = svd
        .singular_values
        .iter()
        .filter(|s| **s > tol::RANK_REL_SV * svd.singular_values.max())
        .count();

    // Residual of [X_i, X_j] after projecting onto the span (columns of u).
    let mut max_resid: f64 = 0.0;
    for i in 0..m {
        for j in (i + 1)..m {
            let br = rep.generator(i) * rep.generator(j) - rep.generator(j) * rep.generator(i);
            let col = DVector::from_fn(n * n, |r, _| br[(r / n, r % n)]);
            let mut resid = col.clone();
            for c in 0..rank {
                let basis_col = u.column(c);
                let coeff = basis_col.dotc(&col);
                resid -= DVector::from_fn(n * n, |r, _| basis_col[r] * coeff);
            }
            max_resid = max_resid.max(resid.norm());
        }
    }

    RepDiagnostics {
        label: rep.label().to_string(),
        dim_v: n,
        group_dim: m,
        skew_hermitian: CheckOutcome { passed: skew, measure: 0.0 },
        bracket_closure: CheckOutcome { passed: max_resid <= tol::BRACKET_CLOSURE, measure: max_resid },
        linear_independence: CheckOutcome {
            passed: smin > tol::BASIS_INDEPENDENCE_MIN_SV,
            measure: smin,
        },
    }
}
