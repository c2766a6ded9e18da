//! Polynomial invariant evaluators.
//!
//! The built-in set covers the `SO(4,C) x SO(4,C)` action on `M_4(C)`:
//! `tr X X^T`, `det X`, `tr (X X^T)^2`, `tr (X X^T)^3` of degrees 2, 4, 4, 6.
//! The transpose is the plain (bilinear) transpose; with the conjugate
//! transpose these would not be invariant under complex group elements.
//!
//! Evaluators accept the flattened row-major 16-vector so that the same set
//! can be pulled back through the spin isomorphism to act on 4-qubit tensors.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{KnError, Result};
use crate::spin::SpinIsomorphism;

type Evaluator = Arc<dyn Fn(&DVector<Complex64>) -> Complex64 + Send + Sync>;

/// A named homogeneous polynomial invariant.
#[derive(Clone)]
pub struct Invariant {
    name: String,
    degree: u32,
    eval: Evaluator,
}

impl Invariant {
    pub fn new(
        name: impl Into<String>,
        degree: u32,
        eval: impl Fn(&DVector<Complex64>) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        Self { name: name.into(), degree, eval: Arc::new(eval) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn evaluate(&self, x: &DVector<Complex64>) -> Complex64 {
        (self.eval)(x)
    }
}

impl std::fmt::Debug for Invariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Invariant").field("name", &self.name).field("degree", &self.degree).finish()
    }
}

/// A family of invariants sharing one input domain.
#[derive(Clone, Debug)]
pub struct InvariantSet {
    items: Vec<Invariant>,
    domain_label: String,
    input_dim: usize,
}

/// Values of every invariant at one point, with the homogeneity scales used
/// for relative comparisons.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EvaluatedInvariants {
    pub names: Vec<String>,
    pub degrees: Vec<u32>,
    #[serde(with = "crate::cjson::cvec")]
    pub values: Vec<Complex64>,
    /// `|x|^degree` per item.
    pub scales: Vec<f64>,
}

impl EvaluatedInvariants {
    /// True when every value is at most `tol` times its scale.
    pub fn all_below(&self, tol: f64) -> bool {
        self.values.iter().zip(&self.scales).all(|(v, s)| v.norm() <= tol * s)
    }

    /// Largest `|value| / scale`; zero input gives zero.
    pub fn max_relative(&self) -> f64 {
        self.values
            .iter()
            .zip(&self.scales)
            .map(|(v, s)| if *s > 0.0 { v.norm() / s } else { v.norm() })
            .fold(0.0, f64::max)
    }
}

impl InvariantSet {
    pub fn new(items: Vec<Invariant>, domain_label: impl Into<String>, input_dim: usize) -> Self {
        Self { items, domain_label: domain_label.into(), input_dim }
    }

    pub fn items(&self) -> &[Invariant] {
        &self.items
    }

    pub fn domain_label(&self) -> &str {
        &self.domain_label
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.items.iter().map(|i| i.degree).collect()
    }

    /// Evaluates every item, recording `|x|^degree` scale factors.
    pub fn evaluate_all(&self, x: &DVector<Complex64>) -> Result<EvaluatedInvariants> {
        if x.len() != self.input_dim {
            return Err(KnError::DimensionMismatch { expected: self.input_dim, got: x.len() });
        }
        let norm = x.norm();
        let values: Vec<Complex64> = self.items.iter().map(|i| i.evaluate(x)).collect();
        let scales: Vec<f64> = self.items.iter().map(|i| norm.powi(i.degree as i32)).collect();
        Ok(EvaluatedInvariants {
            names: self.items.iter().map(|i| i.name.clone()).collect(),
            degrees: self.degrees(),
            values,
            scales,
        })
    }

    /// True when every invariant vanishes at `x` within `tol` (relative to
    /// the homogeneity scale) — membership test for the common zero locus.
    pub fn null_cone_test(&self, x: &DVector<Complex64>, tol: f64) -> Result<bool> {
        Ok(self.evaluate_all(x)?.all_below(tol))
    }

    /// Composes every evaluator with the spin isomorphism, producing the set
    /// acting on 4-qubit tensors. Degrees are unchanged.
    pub fn pullback_via_spin(&self) -> Result<InvariantSet> {
        if self.domain_label != "so4pair" {
            return Err(KnError::DomainMismatch {
                expected: "so4pair".into(),
                got: self.domain_label.clone(),
            });
        }
        let phi = Arc::new(SpinIsomorphism::new().matrix().clone());
        let items = self
            .items
            .iter()
            .map(|item| {
                let phi = Arc::clone(&phi);
                let inner = Arc::clone(&item.eval);
                Invariant {
                    name: item.name.clone(),
                    degree: item.degree,
                    eval: Arc::new(move |t: &DVector<Complex64>| inner(&(&*phi * t))),
                }
            })
            .collect();
        Ok(InvariantSet { items, domain_label: "sl2x4".into(), input_dim: 16 })
    }
}

fn unflatten4(x: &DVector<Complex64>) -> DMatrix<Complex64> {
    DMatrix::from_fn(4, 4, |i, j| x[4 * i + j])
}

/// The four generating invariants for the `so4pair` action, degrees 2, 4, 4, 6.
pub fn d4_invariant_set() -> InvariantSet {
    let tr_xxt = Invariant::new("tr_xxt", 2, |x: &DVector<Complex64>| {
        let m = unflatten4(x);
        (&m * m.transpose()).trace()
    });
    let det = Invariant::new("det", 4, |x: &DVector<Complex64>| unflatten4(x).determinant());
    let tr_xxt2 = Invariant::new("tr_xxt_sq", 4, |x: &DVector<Complex64>| {
        let m = unflatten4(x);
        let s = &m * m.transpose();
        (&s * &s).trace()
    });
    let tr_xxt3 = Invariant::new("tr_xxt_cube", 6, |x: &DVector<Complex64>| {
        let m = unflatten4(x);
        let s = &m * m.transpose();
        (&s * &s * &s).trace()
    });
    InvariantSet::new(vec![tr_xxt, det, tr_xxt2, tr_xxt3], "so4pair", 16)
}
