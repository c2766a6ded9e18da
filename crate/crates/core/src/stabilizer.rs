//! Infinitesimal stabilizers, phase stabilizers, and finite-group checks.
//!
//! The Lie algebra of the stabilizer of `v` is the kernel of the action map
//! `X -> X v` on the complex span of the `Lie(K)` basis; ranks are decided by
//! singular values with the relative threshold [`tol::RANK_REL_SV`], and the
//! full spectrum is reported so borderline decisions stay auditable.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{KnError, Result};
use crate::invariants::InvariantSet;
use crate::rep::{extend_with_scalars, inner, GroupElement, Representation, StateVector};
use crate::tol;

/// Kernel data of the action map at one point.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StabilizerReport {
    /// Complex dimension of `Lie(G_v)`.
    pub lie_dim: usize,
    /// Coefficient vectors over the `Lie(K)` basis spanning the kernel.
    #[serde(with = "crate::cjson::cvec_list")]
    pub kernel_basis: Vec<Vec<Complex64>>,
    /// `group_dim - lie_dim`.
    pub orbit_dim: usize,
    /// Full singular-value list behind the rank decision.
    pub singular_values: Vec<f64>,
}

/// Kernel of `X -> X v` over the complex span of the basis.
///
/// At `v = 0` the whole algebra stabilizes and the report is returned
/// without a decomposition.
pub fn stabilizer_lie(rep: &Representation, v: &StateVector) -> Result<StabilizerReport> {
    if v.dim() != rep.dim_v() {
        return Err(KnError::DimensionMismatch { expected: rep.dim_v(), got: v.dim() });
    }
    let n = rep.dim_v();
    let m = rep.group_dim();

    if v.norm() == 0.0 {
        let kernel_basis = (0..m)
            .map(|j| {
                let mut e = vec![Complex64::new(0.0, 0.0); m];
                e[j] = Complex64::new(1.0, 0.0);
                e
            })
            .collect();
        return Ok(StabilizerReport {
            lie_dim: m,
            kernel_basis,
            orbit_dim: 0,
            singular_values: vec![0.0; m],
        });
    }

    // Pad with zero rows when group_dim exceeds dim_v so the decomposition
    // exposes all m right singular vectors (the padding adds exact zeros to
    // the spectrum, i.e. genuine kernel directions).
    let rows = n.max(m);
    let action = DMatrix::<Complex64>::from_fn(rows, m, |i, j| {
        if i < n {
            (rep.generator(j) * v.as_vector())[i]
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let svd = action.svd(false, true);
    let mut svals: Vec<f64> = svd.singular_values.iter().copied().collect();
    svals.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let smax = svals.first().copied().unwrap_or(0.0);
    let v_t = svd.v_t.expect("svd with v_t requested");

    let mut kernel_basis: Vec<Vec<Complex64>> = Vec::new();
    for (row, sv) in svd.singular_values.iter().enumerate() {
        if *sv <= tol::RANK_REL_SV * smax {
            let coeffs: Vec<Complex64> = (0..m).map(|j| v_t[(row, j)].conj()).collect();
            kernel_basis.push(coeffs);
        }
    }
    let rank = svd.singular_values.iter().filter(|s| **s > tol::RANK_REL_SV * smax).count();
    let lie_dim = m - rank;
    debug_assert_eq!(kernel_basis.len(), lie_dim);

    Ok(StabilizerReport { lie_dim, kernel_basis, orbit_dim: m - lie_dim, singular_values: svals })
}

/// Same computation over the scalar extension of `rep`. On closed orbits the
/// identity component gains nothing, so `lie_dim` matches the base report.
pub fn extended_stabilizer_lie(rep: &Representation, v: &StateVector) -> Result<StabilizerReport> {
    let extended = if rep.label().ends_with("+scalars") {
        rep.clone()
    } else {
        extend_with_scalars(rep)?
    };
    stabilizer_lie(&extended, v)
}

/// A group element found to map `v` to a scalar multiple of itself.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PhaseStabilizerHit {
    pub element: GroupElement,
    #[serde(with = "crate::cjson::cpx")]
    pub phase: Complex64,
    /// Smallest `p >= 1` with `phase^p = 1` within [`tol::PHASE_TOL`], or 0
    /// if none at most [`tol::PHASE_ORDER_MAX`] works.
    pub phase_order: u32,
}

/// Tests whether `g v` is parallel to `v`; on success returns the phase
/// `chi = <g v, v> / |v|^2` and its root-of-unity order.
pub fn phase_check(g: &GroupElement, v: &StateVector, tol_parallel: f64) -> Result<Option<PhaseStabilizerHit>> {
    if v.norm() == 0.0 {
        return Err(KnError::Precondition("phase check requires a nonzero vector".into()));
    }
    let w = g.apply(v)?;
    let ns = v.norm_sq();
    let chi = inner(w.as_vector(), v.as_vector()) / Complex64::new(ns, 0.0);
    let residual = (w.as_vector() - v.as_vector() * chi).norm();
    if residual > tol_parallel * v.norm() {
        return Ok(None);
    }
    let phase_order = (1..=tol::PHASE_ORDER_MAX)
        .find(|p| (chi.powu(*p) - Complex64::new(1.0, 0.0)).norm() <= tol::PHASE_TOL)
        .unwrap_or(0);
    Ok(Some(PhaseStabilizerHit { element: g.clone(), phase: chi, phase_order }))
}

/// Upper bound for the root-of-unity order `r_x`: the gcd of the homogeneity
/// degrees of every invariant that does not vanish at `x`. Errors when all
/// supplied invariants vanish (null-cone point), where `r_x` is undefined.
pub fn compute_r(set: &InvariantSet, x: &DVector<Complex64>) -> Result<u32> {
    let evaluated = set.evaluate_all(x)?;
    let mut r: u32 = 0;
    for ((value, scale), degree) in evaluated.values.iter().zip(&evaluated.scales).zip(&evaluated.degrees) {
        if value.norm() > tol::INVARIANT_NONVANISH * scale {
            r = gcd(r, *degree);
        }
    }
    if r == 0 {
        return Err(KnError::RUndefined);
    }
    Ok(r)
}

fn gcd(a: u32, b: u32) -> u32 {
    if a == 0 {
        b
    } else {
        gcd(b % a, a)
    }
}

/// Per-candidate outcome of the adjoint-closure check.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AdjointCandidateOutcome {
    pub index: usize,
    /// False when the candidate does not phase-stabilize `v` (no claim made).
    pub applicable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    #[serde(default)]
    pub phase: Option<PhaseStabilizerHit>,
    #[serde(skip_serializing_if = "Option::is_none")]
    #[serde(default)]
    pub adjoint_phase: Option<PhaseStabilizerHit>,
    pub passed: bool,
}

/// Report of [`verify_adjoint_closure`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AdjointClosureReport {
    pub outcomes: Vec<AdjointCandidateOutcome>,
    /// True when every applicable candidate has a phase-stabilizing adjoint.
    pub passed: bool,
}

/// At a critical `v`, every candidate that phase-stabilizes `v` must have an
/// adjoint that does too (with conjugate phase). Candidates that do not
/// stabilize are reported as not applicable.
pub fn verify_adjoint_closure(
    rep: &Representation,
    candidates: &[GroupElement],
    v: &StateVector,
) -> Result<AdjointClosureReport> {
    if !crate::flow::is_critical(rep, v, tol::GRAD_TOL)? {
        return Err(KnError::Precondition("adjoint closure requires a critical vector".into()));
    }
    let mut outcomes = Vec::with_capacity(candidates.len());
    let mut all = true;
    for (index, g) in candidates.iter().enumerate() {
        match phase_check(g, v, tol::PHASE_TOL)? {
            None => outcomes.push(AdjointCandidateOutcome {
                index,
                applicable: false,
                phase: None,
                adjoint_phase: None,
                passed: true,
            }),
            Some(hit) => {
                let adj = phase_check(&g.adjoint(), v, tol::PHASE_TOL)?;
                let passed = match &adj {
                    Some(adj_hit) => (adj_hit.phase - hit.phase.conj()).norm() <= tol::PHASE_TOL,
                    None => false,
                };
                all &= passed;
                outcomes.push(AdjointCandidateOutcome {
                    index,
                    applicable: true,
                    phase: Some(hit),
                    adjoint_phase: adj,
                    passed,
                });
            }
        }
    }
    Ok(AdjointClosureReport { outcomes, passed: all })
}

/// Report of [`verify_finite_group`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FiniteGroupReport {
    /// Number of distinct elements after the central identification.
    pub order: usize,
    pub closed_under_product: bool,
    pub all_stabilize: bool,
    /// Indices (into the deduplicated list) of elements that fail to fix `v`.
    pub stabilize_failures: Vec<usize>,
    /// Pairs whose product matched nothing in the list.
    pub product_failures: Vec<(usize, usize)>,
}

impl FiniteGroupReport {
    pub fn passed(&self) -> bool {
        self.closed_under_product && self.all_stabilize
    }
}

fn max_abs_entry(m: &DMatrix<Complex64>) -> f64 {
    m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

fn matrices_match(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>, modulo_sign: bool) -> bool {
    if max_abs_entry(&(a - b)) <= tol::FINITE_GROUP_MATCH {
        return true;
    }
    modulo_sign && max_abs_entry(&(a + b)) <= tol::FINITE_GROUP_MATCH
}

/// Verifies that the supplied candidates form a finite group fixing `v`:
/// deduplicates them (optionally modulo the central sign `g ~ -g`), checks
/// pairwise products land back in the list, and checks every element fixes
/// `v`. The order reported is the deduplicated count.
pub fn verify_finite_group(
    rep: &Representation,
    elements: &[GroupElement],
    v: &StateVector,
    modulo_sign: bool,
) -> Result<FiniteGroupReport> {
    if elements.is_empty() {
        return Err(KnError::InvalidInput("candidate list must be nonempty".into()));
    }
    for g in elements {
        if g.dim() != rep.dim_v() {
            return Err(KnError::DimensionMismatch { expected: rep.dim_v(), got: g.dim() });
        }
    }
    if v.dim() != rep.dim_v() {
        return Err(KnError::DimensionMismatch { expected: rep.dim_v(), got: v.dim() });
    }

    let mut distinct: Vec<&GroupElement> = Vec::new();
    for g in elements {
        if !distinct.iter().any(|d| matrices_match(d.matrix(), g.matrix(), modulo_sign)) {
            distinct.push(g);
        }
    }

    let mut product_failures = Vec::new();
    for (i, a) in distinct.iter().enumerate() {
        for (j, b) in distinct.iter().enumerate() {
            let prod = a.matrix() * b.matrix();
            if !distinct.iter().any(|d| matrices_match(d.matrix(), &prod, modulo_sign)) {
                product_failures.push((i, j));
            }
        }
    }

    let mut stabilize_failures = Vec::new();
    for (i, g) in distinct.iter().enumerate() {
        let gv = g.apply(v)?;
        if (gv.as_vector() - v.as_vector()).norm() > tol::FINITE_GROUP_MATCH * v.norm() {
            stabilize_failures.push(i);
        }
    }

    Ok(FiniteGroupReport {
        order: distinct.len(),
        closed_under_product: product_failures.is_empty(),
        all_stabilize: stabilize_failures.is_empty(),
        stabilize_failures,
        product_failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::d4_invariant_set;
    use crate::rep::{build_sl2_tensor_rep, build_so4_pair_rep, group_element_from_coeffs};
    use crate::scenarios::{critical_5qubit, diag_1234_vector, nilpotent_4qubit, phase_gate_a_pow5, sign_diag_operators};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_state(rng: &mut ChaCha8Rng, n: usize) -> StateVector {
        StateVector::from_entries(
            (0..n).map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect(),
        )
        .unwrap()
    }

    #[test]
    fn zero_vector_is_stabilized_by_everything() {
        let rep = build_sl2_tensor_rep(4).unwrap();
        let report = stabilizer_lie(&rep, &StateVector::zeros(16)).unwrap();
        assert_eq!(report.lie_dim, 12);
        assert_eq!(report.orbit_dim, 0);
        let ext = extended_stabilizer_lie(&rep, &StateVector::zeros(16)).unwrap();
        assert_eq!(ext.lie_dim, 13);
    }

    #[test]
    fn five_qubit_vector_has_trivial_stabilizer() {
        let rep = build_sl2_tensor_rep(5).unwrap();
        let v = critical_5qubit();
        let report = stabilizer_lie(&rep, &v).unwrap();
        assert_eq!(report.lie_dim, 0);
        assert_eq!(report.orbit_dim, 15);
        assert_eq!(report.singular_values.len(), 15);
        let ext = extended_stabilizer_lie(&rep, &v).unwrap();
        assert_eq!(ext.lie_dim, 0);
        assert_eq!(ext.orbit_dim, 16);
    }

    #[test]
    fn nilpotent_has_trivial_infinitesimal_stabilizer() {
        let rep = build_sl2_tensor_rep(4).unwrap();
        let report = stabilizer_lie(&rep, &nilpotent_4qubit()).unwrap();
        assert_eq!(report.lie_dim, 0);
        assert_eq!(report.orbit_dim, 12);
        // scalar direction cannot fix a nonzero vector infinitesimally unless
        // it is a weight vector of i*I, which it is not here
        let ext = extended_stabilizer_lie(&rep, &nilpotent_4qubit()).unwrap();
        assert!(ext.lie_dim >= report.lie_dim);
    }

    #[test]
    fn kernel_vectors_certify_annihilation() {
        // engineered rank drop: a vector supported on one tensor slot only
        let rep = build_sl2_tensor_rep(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..5 {
            let v = random_state(&mut rng, 4);
            let report = stabilizer_lie(&rep, &v).unwrap();
            for coeffs in &report.kernel_basis {
                let z = crate::rep::algebra_element(&rep, coeffs).unwrap();
                let resid = (z * v.as_vector()).norm();
                let cn = coeffs.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
                assert!(resid <= tol::KERNEL_CERTIFICATE * v.norm() * cn.max(1e-300));
            }
        }
    }

    #[test]
    fn stabilizer_dim_is_conjugation_invariant() {
        let rep = build_sl2_tensor_rep(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let v = random_state(&mut rng, 8);
        let base = stabilizer_lie(&rep, &v).unwrap().lie_dim;
        for _ in 0..20 {
            let coeffs: Vec<Complex64> = (0..rep.group_dim())
                .map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect();
            let g = group_element_from_coeffs(&rep, &coeffs).unwrap();
            let gv = g.apply(&v).unwrap();
            assert_eq!(stabilizer_lie(&rep, &gv).unwrap().lie_dim, base);
        }
    }

    #[test]
    fn phase_check_identity_and_tensor_gate() {
        let rep = build_sl2_tensor_rep(5).unwrap();
        let v = critical_5qubit();
        let id = GroupElement::new(DMatrix::identity(32, 32)).unwrap();
        let hit = phase_check(&id, &v, tol::PHASE_TOL).unwrap().unwrap();
        assert!((hit.phase - c(1.0, 0.0)).norm() < 1e-14);
        assert_eq!(hit.phase_order, 1);

        let g = phase_gate_a_pow5();
        let hit = phase_check(&g, &v, tol::PHASE_TOL).unwrap().unwrap();
        let xi = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        let expected = xi.powi(-3);
        assert!((hit.phase - expected).norm() <= 1e-12, "phase {}", hit.phase);
        assert_eq!(hit.phase_order, 8);
        let _ = rep;
    }

    #[test]
    fn random_elements_do_not_phase_stabilize_random_vectors() {
        let rep = build_sl2_tensor_rep(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mut hits = 0;
        for _ in 0..100 {
            let v = random_state(&mut rng, 8);
            let coeffs: Vec<Complex64> = (0..rep.group_dim())
                .map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect();
            let g = group_element_from_coeffs(&rep, &coeffs).unwrap();
            if phase_check(&g, &v, tol::PHASE_TOL).unwrap().is_some() {
                hits += 1;
            }
        }
        assert_eq!(hits, 0);
    }

    #[test]
    fn compute_r_for_d4_set() {
        let set = d4_invariant_set();
        let d = diag_1234_vector();
        assert_eq!(compute_r(&set, d.as_vector()).unwrap(), 2);

        // search-constructed point with vanishing degree-2 invariant:
        // diag(1, -2, 2, 3i) has power sums (0, -12i, 114, -600)
        let x = DVector::from_fn(16, |k, _| match k {
            0 => c(1.0, 0.0),
            5 => c(-2.0, 0.0),
            10 => c(2.0, 0.0),
            15 => c(0.0, 3.0),
            _ => c(0.0, 0.0),
        });
        let ev = set.evaluate_all(&x).unwrap();
        assert!(ev.values[0].norm() < 1e-12);
        assert!((ev.values[1] - c(0.0, -12.0)).norm() < 1e-10);
        assert!((ev.values[2] - c(114.0, 0.0)).norm() < 1e-9);
        assert!((ev.values[3] - c(-600.0, 0.0)).norm() < 1e-8);
        assert_eq!(compute_r(&set, &x).unwrap(), 2);

        // null-cone point: r is undefined
        let pulled = set.pullback_via_spin().unwrap();
        let err = compute_r(&pulled, nilpotent_4qubit().as_vector());
        assert!(matches!(err, Err(KnError::RUndefined)));
    }

    #[test]
    fn adjoint_closure_for_tensor_gate() {
        let rep = build_sl2_tensor_rep(5).unwrap();
        let v = critical_5qubit();
        let g = phase_gate_a_pow5();
        let gadj = g.adjoint();
        let report = verify_adjoint_closure(&rep, &[g, gadj], &v).unwrap();
        assert!(report.passed);
        assert!(report.outcomes.iter().all(|o| o.applicable));

        // a non-stabilizing candidate is reported as not applicable
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let coeffs: Vec<Complex64> = (0..rep.group_dim())
            .map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let h = group_element_from_coeffs(&rep, &coeffs).unwrap();
        let report = verify_adjoint_closure(&rep, &[h], &v).unwrap();
        assert!(report.passed);
        assert!(!report.outcomes[0].applicable);
    }

    #[test]
    fn adjoint_closure_requires_critical_vector() {
        let rep = build_sl2_tensor_rep(4).unwrap();
        let g = GroupElement::new(DMatrix::identity(16, 16)).unwrap();
        assert!(verify_adjoint_closure(&rep, &[g], &nilpotent_4qubit()).is_err());
    }

    #[test]
    fn sign_diagonal_group_has_order_eight() {
        let rep = build_so4_pair_rep();
        let v = diag_1234_vector();
        let ops = sign_diag_operators();
        assert_eq!(ops.len(), 16);
        let report = verify_finite_group(&rep, &ops, &v, true).unwrap();
        assert_eq!(report.order, 8);
        assert!(report.closed_under_product);
        assert!(report.all_stabilize);
    }

    #[test]
    fn identity_alone_is_a_group_of_order_one() {
        let rep = build_so4_pair_rep();
        let v = diag_1234_vector();
        let id = GroupElement::new(DMatrix::identity(16, 16)).unwrap();
        let report = verify_finite_group(&rep, &[id], &v, false).unwrap();
        assert_eq!(report.order, 1);
        assert!(report.passed());
    }

    #[test]
    fn sign_group_does_not_stabilize_generic_vectors() {
        let rep = build_so4_pair_rep();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let v = random_state(&mut rng, 16);
        let report = verify_finite_group(&rep, &sign_diag_operators(), &v, true).unwrap();
        assert!(!report.all_stabilize);
        assert!(report.closed_under_product);
    }
}
