//! Moment-map components and the norm-minimization flow.
//!
//! For a basis `X_1..X_m` of `Lie(K)` the moment components are
//! `g_j(v) = (1/2i) <X_j v, v>`; their common zero set is the critical
//! (Kempf-Ness) set, and a nonzero critical point certifies that the orbit
//! is closed. The flow descends `|v|^2` along `exp(s H) v` with the Hermitian
//! direction `H = sum_j g_j(v) (i X_j)`, which has exact initial slope
//! `d/ds |e^{sH} v|^2 = -4 sum_j g_j(v)^2`.
//!
//! Internally the direction is divided by `|v|^2` (the moment of the
//! normalized state), which leaves the direction unchanged up to a positive
//! factor but keeps step sizes meaningful as the norm collapses toward the
//! null cone; without it the per-step progress degrades quadratically and
//! null-cone collapse is unobservable in any reasonable iteration budget.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{KnError, Result};
use crate::invariants::{EvaluatedInvariants, InvariantSet};
use crate::rep::{inner, GroupElement, Representation, StateVector};
use crate::tol;

/// Values of every moment component at one state.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MomentValue {
    pub components: Vec<f64>,
    pub norm_sq_v: f64,
}

impl MomentValue {
    /// Euclidean norm of the component vector.
    pub fn norm(&self) -> f64 {
        self.components.iter().map(|g| g * g).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.components.iter().fold(0.0, |acc, g| acc.max(g.abs()))
    }
}

/// `g_j(v) = (1/2i) <X_j v, v>` for every `Lie(K)` basis element.
///
/// The inner product is conjugate-linear in the second slot; each component
/// is real for skew-Hermitian generators, and the imaginary residue is
/// checked against [`tol::MOMENT_IMAG_RESIDUE`].
pub fn moment_components(rep: &Representation, v: &StateVector) -> Result<MomentValue> {
    if v.dim() != rep.dim_v() {
        return Err(KnError::DimensionMismatch { expected: rep.dim_v(), got: v.dim() });
    }
    let ns = v.norm_sq();
    let half_i_inv = Complex64::new(0.0, -0.5); // 1/(2i)
    let mut components = Vec::with_capacity(rep.group_dim());
    for x in rep.k_basis() {
        let z = inner(&(x * v.as_vector()), v.as_vector()) * half_i_inv;
        if z.im.abs() > tol::MOMENT_IMAG_RESIDUE * ns.max(f64::MIN_POSITIVE) {
            return Err(KnError::Numerics(format!(
                "moment component has imaginary residue {:.3e} (norm_sq {:.3e})",
                z.im, ns
            )));
        }
        components.push(z.re);
    }
    Ok(MomentValue { components, norm_sq_v: ns })
}

/// True iff the moment vector is at most `tol * |v|^2` in Euclidean norm.
/// The zero vector is trivially critical.
pub fn is_critical(rep: &Representation, v: &StateVector, tol: f64) -> Result<bool> {
    let m = moment_components(rep, v)?;
    Ok(m.norm() <= tol * m.norm_sq_v)
}

/// `omega(x, y) = Im <x, y>` — the symplectic pairing on `V` as a real space.
pub fn symplectic_pairing(x: &StateVector, y: &StateVector) -> Result<f64> {
    if x.dim() != y.dim() {
        return Err(KnError::DimensionMismatch { expected: x.dim(), got: y.dim() });
    }
    Ok(inner(x.as_vector(), y.as_vector()).im)
}

/// Parameters of the norm-minimization flow.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct FlowConfig {
    pub max_iters: usize,
    /// Converged when `|moment| / |v|^2 <= grad_tol`.
    pub grad_tol: f64,
    /// Null-cone verdict when `|v_t| / |v_0| <= nullcone_tol`.
    pub nullcone_tol: f64,
    pub armijo_c: f64,
    pub backtrack_factor: f64,
    pub initial_step: f64,
}

impl Default for FlowConfig {
    fn default() -> Self {
        Self {
            max_iters: 10_000,
            grad_tol: tol::GRAD_TOL,
            nullcone_tol: tol::NULLCONE_RATIO,
            armijo_c: 1e-4,
            backtrack_factor: 0.5,
            initial_step: 1.0,
        }
    }
}

impl FlowConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grad_tol <= 0.0 || self.nullcone_tol <= 0.0 || self.initial_step <= 0.0 {
            return Err(KnError::InvalidInput("flow tolerances and step must be positive".into()));
        }
        if !(0.0..1.0).contains(&self.armijo_c) || self.armijo_c == 0.0 {
            return Err(KnError::InvalidInput("armijo_c must lie in (0,1)".into()));
        }
        if !(0.0..1.0).contains(&self.backtrack_factor) || self.backtrack_factor == 0.0 {
            return Err(KnError::InvalidInput("backtrack_factor must lie in (0,1)".into()));
        }
        Ok(())
    }
}

/// Terminal state of one flow run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FlowStatus {
    Critical,
    NullCone,
    MaxIterations,
}

impl std::fmt::Display for FlowStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FlowStatus::Critical => write!(f, "Critical"),
            FlowStatus::NullCone => write!(f, "NullCone"),
            FlowStatus::MaxIterations => write!(f, "MaxIterations"),
        }
    }
}

/// Outcome of [`minimize_norm`].
#[derive(Clone, Debug)]
pub struct FlowResult {
    pub status: FlowStatus,
    pub final_vector: StateVector,
    /// Per accepted step, the coefficient vector `c` with the step equal to
    /// `exp(sum_j c_j X_j)`; the total group element applied is the product
    /// of these exponentials, latest first.
    pub group_log: Vec<Vec<Complex64>>,
    /// `|v|^2` at the start and after every accepted step; nonincreasing.
    pub energy_trace: Vec<f64>,
    /// `|moment(v)|` at the final state.
    pub final_grad_norm: f64,
    pub iterations: usize,
}

impl FlowResult {
    /// Wire form: status, final vector, gradient norm, iteration count, and
    /// the energy trace down-sampled to every 10th value (endpoint kept).
    pub fn to_json(&self) -> serde_json::Value {
        let mut trace: Vec<f64> = self.energy_trace.iter().step_by(10).copied().collect();
        if let Some(last) = self.energy_trace.last() {
            if trace.last() != Some(last) {
                trace.push(*last);
            }
        }
        json!({
            "status": self.status.to_string(),
            "final_vector": self.final_vector,
            "final_grad_norm": self.final_grad_norm,
            "iterations": self.iterations,
            "energy_trace": trace,
        })
    }
}

/// Multiplies out the logged exponentials into the group element `g` with
/// `final_vector = g v_0` (up to the flow's numerical accuracy).
pub fn reconstruct_group_element(rep: &Representation, result: &FlowResult) -> Result<GroupElement> {
    let n = rep.dim_v();
    let mut g = DMatrix::<Complex64>::identity(n, n);
    for coeffs in &result.group_log {
        let step = crate::rep::algebra_element(rep, coeffs)?.exp();
        g = step * g;
    }
    GroupElement::new(g)
}

/// Gradient flow for `|v|^2` along the orbit. Terminates `Critical` when the
/// relative moment norm drops below `grad_tol`, `NullCone` when the norm
/// ratio to the start drops below `nullcone_tol`, `MaxIterations` otherwise.
pub fn minimize_norm(rep: &Representation, v0: &StateVector, cfg: &FlowConfig) -> Result<FlowResult> {
    cfg.validate()?;
    if v0.dim() != rep.dim_v() {
        return Err(KnError::DimensionMismatch { expected: rep.dim_v(), got: v0.dim() });
    }
    let n0 = v0.norm();
    if n0 == 0.0 {
        return Err(KnError::Precondition("flow requires a nonzero start vector".into()));
    }

    let n = rep.dim_v();
    let m = rep.group_dim();
    let mut v = v0.as_vector().clone();
    let mut energy_trace = vec![v.norm_squared()];
    let mut group_log: Vec<Vec<Complex64>> = Vec::new();
    let mut warm_step = cfg.initial_step;
    let step_cap = cfg.initial_step * 1024.0;
    let mut grad_norm = f64::NAN;

    for iter in 0..cfg.max_iters {
        let ns = v.norm_squared();
        if ns.sqrt() / n0 <= cfg.nullcone_tol {
            let state = StateVector::new(v)?;
            grad_norm = moment_components(rep, &state)?.norm();
            return Ok(FlowResult {
                status: FlowStatus::NullCone,
                final_vector: state,
                group_log,
                energy_trace,
                final_grad_norm: grad_norm,
                iterations: iter,
            });
        }

        let state = StateVector::new(v.clone())?;
        let moments = moment_components(rep, &state)?;
        grad_norm = moments.norm();
        if !grad_norm.is_finite() {
            return Err(KnError::Numerics("non-finite moment norm during flow".into()));
        }
        if grad_norm <= cfg.grad_tol * ns {
            return Ok(FlowResult {
                status: FlowStatus::Critical,
                final_vector: state,
                group_log,
                energy_trace,
                final_grad_norm: grad_norm,
                iterations: iter,
            });
        }

        // Hermitian direction sum_j (g_j / |v|^2) (i X_j); the slope of
        // phi(s) = |exp(sD) v|^2 at 0 is -4 |g|^2 / |v|^2.
        let mut direction = DMatrix::<Complex64>::zeros(n, n);
        for (g, x) in moments.components.iter().zip(rep.k_basis()) {
            direction += x * Complex64::new(0.0, g / ns);
        }
        let eig = SymmetricEigen::new(direction.clone());
        let coords = eig.eigenvectors.adjoint() * &v;
        let weights: Vec<f64> = coords.iter().map(|c| c.norm_sqr()).collect();
        let slope = -4.0 * grad_norm * grad_norm / ns;

        // Taylor coefficients of phi(s) = |exp(sD) v|^2 around 0:
        // phi - ns = 2s A1 + 2s^2 A2 + (4/3) s^3 A3 + (2/3) s^4 A4 + O(s^5),
        // with A_k = <D^k v, v>. A1 is taken from the analytic identity
        // (the spectral value drowns in eigensolver noise near criticality);
        // the higher sums are cancellation-free.
        let a1 = 0.5 * slope;
        let (a2, a3, a4) = weights.iter().zip(eig.eigenvalues.iter()).fold(
            (0.0f64, 0.0f64, 0.0f64),
            |(p2, p3, p4), (w, lam)| {
                (p2 + w * lam * lam, p3 + w * lam.powi(3), p4 + w * lam.powi(4))
            },
        );
        let lam_absmax = eig.eigenvalues.iter().fold(0.0f64, |m, l| m.max(l.abs()));

        // |exp(sD) v|^2 - |v|^2. The spectral expm1 sum is accurate for
        // substantial steps; below the switchover the quartic model is exact
        // to ~(0.05)^5/120 relative and free of spectral cancellation.
        let energy_delta = |s: f64| -> f64 {
            if 2.0 * s * lam_absmax > 0.05 {
                weights
                    .iter()
                    .zip(eig.eigenvalues.iter())
                    .map(|(w, lam)| w * (2.0 * s * lam).exp_m1())
                    .sum()
            } else {
                2.0 * s * a1 + 2.0 * s * s * a2 + (4.0 / 3.0) * s.powi(3) * a3
                    + (2.0 / 3.0) * s.powi(4) * a4
            }
        };

        let mut s = warm_step;
        let mut accepted = false;
        for _ in 0..200 {
            if energy_delta(s) <= cfg.armijo_c * s * slope {
                accepted = true;
                break;
            }
            s *= cfg.backtrack_factor;
        }
        if !accepted {
            return Err(KnError::Numerics(format!(
                "line search failed at iteration {iter} (relative moment norm {:.3e})",
                grad_norm / ns
            )));
        }

        // Apply the accepted step with the Pade exponential of the exact
        // in-algebra direction: the spectral route is cheaper but its
        // backward error is not aligned with the algebra, and the resulting
        // off-orbit wander shows up as invariant drift over long runs.
        v = (direction * Complex64::new(s, 0.0)).exp() * v;
        energy_trace.push(v.norm_squared());
        let mut coeffs = Vec::with_capacity(m);
        for g in &moments.components {
            coeffs.push(Complex64::new(0.0, s * g / ns));
        }
        group_log.push(coeffs);
        warm_step = (s / cfg.backtrack_factor).min(step_cap);
    }

    let state = StateVector::new(v)?;
    Ok(FlowResult {
        status: FlowStatus::MaxIterations,
        final_vector: state,
        group_log,
        energy_trace,
        final_grad_norm: grad_norm,
        iterations: cfg.max_iters,
    })
}

/// Orbit verdicts backed by flow and (optionally) invariant evidence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrbitClass {
    ClosedOrbit,
    NullCone,
    Undetermined,
}

/// Verdict plus the evidence that produced it.
#[derive(Clone, Debug)]
pub struct OrbitClassification {
    pub class: OrbitClass,
    pub flow: FlowResult,
    pub invariant_values: Option<EvaluatedInvariants>,
    pub note: String,
}

impl OrbitClassification {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "class": self.class,
            "note": self.note,
            "flow": self.flow.to_json(),
            "invariants": self.invariant_values,
        })
    }
}

/// Runs the flow and cross-checks the verdict against invariant evidence
/// when a set is supplied. Disagreements and iteration exhaustion yield
/// `Undetermined` rather than a guess.
pub fn classify_orbit(
    rep: &Representation,
    v: &StateVector,
    cfg: &FlowConfig,
    invariants: Option<&InvariantSet>,
) -> Result<OrbitClassification> {
    let evaluated = match invariants {
        Some(set) => Some(set.evaluate_all(v.as_vector())?),
        None => None,
    };
    let vanishing = evaluated.as_ref().map(|e| e.all_below(tol::NULL_CONE_TEST));
    let flow = minimize_norm(rep, v, cfg)?;

    let (class, note) = match (flow.status, vanishing) {
        (FlowStatus::Critical, Some(true)) => (
            OrbitClass::Undetermined,
            "flow reached a critical point but every invariant vanishes".to_string(),
        ),
        (FlowStatus::Critical, _) => {
            (OrbitClass::ClosedOrbit, "flow reached a nonzero critical point".to_string())
        }
        (FlowStatus::NullCone, Some(false)) => (
            OrbitClass::Undetermined,
            "norm collapsed but some invariant is nonvanishing".to_string(),
        ),
        (FlowStatus::NullCone, _) => {
            (OrbitClass::NullCone, "norm collapsed below the null-cone threshold".to_string())
        }
        (FlowStatus::MaxIterations, _) => {
            (OrbitClass::Undetermined, "iteration budget exhausted".to_string())
        }
    };

    Ok(OrbitClassification { class, flow, invariant_values: evaluated, note })
}

/// Real rank of the family of functionals `w -> omega(X_j v, w)` on `V` as a
/// real `2n`-dimensional space. At a critical point of a maximal closed
/// orbit this is the real dimension of `K v`.
pub fn criticality_rank(rep: &Representation, v: &StateVector) -> Result<usize> {
    if v.dim() != rep.dim_v() {
        return Err(KnError::DimensionMismatch { expected: rep.dim_v(), got: v.dim() });
    }
    let n = rep.dim_v();
    let m = rep.group_dim();
    let mut rows = DMatrix::<f64>::zeros(m, 2 * n);
    for j in 0..m {
        let xv = rep.generator(j) * v.as_vector();
        for i in 0..n {
            rows[(j, i)] = xv[i].im;
            rows[(j, n + i)] = -xv[i].re;
        }
    }
    let svals = rows.singular_values();
    let smax = svals.iter().cloned().fold(0.0f64, f64::max);
    if smax == 0.0 {
        return Ok(0);
    }
    Ok(svals.iter().filter(|s| **s > tol::RANK_REL_SV * smax).count())
}

/// Result of sampling `|g v| / |v|` over random group elements.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MinimalityReport {
    pub n_samples: usize,
    pub seed: u64,
    pub min_ratio: f64,
    pub worst_sample: usize,
    /// True when every sampled ratio is at least `1 - MINIMALITY_SLACK`.
    pub passed: bool,
}

/// Samples group elements `exp(Z)` with `Z` a complex combination of the
/// `Lie(K)` basis (unit Frobenius norm times a radius in `[0, 3]`) and
/// verifies that no sample shrinks the norm of a critical vector.
pub fn verify_kn_minimality(
    rep: &Representation,
    v: &StateVector,
    n_samples: usize,
    seed: u64,
) -> Result<MinimalityReport> {
    if !is_critical(rep, v, tol::GRAD_TOL)? {
        return Err(KnError::Precondition("minimality check requires a critical vector".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rep.dim_v();
    let base_norm = v.norm();
    let mut min_ratio = f64::INFINITY;
    let mut worst = 0;
    for idx in 0..n_samples {
        let mut z = DMatrix::<Complex64>::zeros(n, n);
        for x in rep.k_basis() {
            let c = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
            z += x * c;
        }
        let fro = z.norm();
        if fro == 0.0 {
            continue;
        }
        let radius: f64 = rng.gen::<f64>() * 3.0;
        z *= Complex64::new(radius / fro, 0.0);
        let gv = z.exp() * v.as_vector();
        let ratio = gv.norm() / base_norm;
        if ratio < min_ratio {
            min_ratio = ratio;
            worst = idx;
        }
    }
    Ok(MinimalityReport {
        n_samples,
        seed,
        min_ratio,
        worst_sample: worst,
        passed: min_ratio >= 1.0 - tol::MINIMALITY_SLACK,
    })
}
