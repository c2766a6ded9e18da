//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Run with `cargo test -p knorbit --test acceptance -- --nocapture` to see
//! the per-criterion lines.

use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use knorbit::atlas::{run_survey, sample_gaussian_vector, sample_rng, SurveyConfig};
use knorbit::flow::{
    classify_orbit, minimize_norm, moment_components, symplectic_pairing, verify_kn_minimality,
    FlowConfig, FlowStatus, OrbitClass,
};
use knorbit::invariants::d4_invariant_set;
use knorbit::rep::{rep_from_label, Representation, StateVector};
use knorbit::scenarios::{critical_5qubit, diag_1234_vector, nilpotent_4qubit, phase_gate_a_pow5, sign_diag_operators};
use knorbit::stabilizer::{
    compute_r, extended_stabilizer_lie, phase_check, stabilizer_lie, verify_adjoint_closure,
    verify_finite_group,
};
use knorbit::tol;

fn conclude(criterion: u32, description: &str, passed: bool, detail: &str) {
    let verdict = if passed { "PASS" } else { "FAIL" };
    println!("acceptance {criterion:2}: {verdict} — {description} ({detail})");
    assert!(passed, "criterion {criterion} failed: {description} ({detail})");
}

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
fn criterion_01_five_qubit_criticality() {
    let start = Instant::now();
    let rep = rep_from_label("sl2x5").unwrap();
    let v = critical_5qubit();
    let m = moment_components(&rep, &v).unwrap();
    let bound = 1e-12 * m.norm_sq_v;
    let elapsed = start.elapsed();
    conclude(
        1,
        "five-qubit example state is critical",
        m.max_abs() <= bound && elapsed.as_secs_f64() < 0.1,
        &format!("max |g_j| = {:.3e} <= {:.3e}, {:.1?}", m.max_abs(), bound, elapsed),
    );
}

#[test]
fn criterion_02_five_qubit_phase_stabilizer() {
    let rep = rep_from_label("sl2x5").unwrap();
    let v = critical_5qubit();
    let g = phase_gate_a_pow5();
    let hit = phase_check(&g, &v, tol::PHASE_TOL).unwrap();
    let xi = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
    let expected = xi.powi(-3);
    let phase_err = hit.as_ref().map(|h| (h.phase - expected).norm()).unwrap_or(f64::INFINITY);
    let adjoint = verify_adjoint_closure(&rep, &[g.clone(), g.adjoint()], &v).unwrap();
    conclude(
        2,
        "tensor-power gate acts by the predicted eighth root of unity, adjoint-closed",
        phase_err <= 1e-12 && adjoint.passed,
        &format!("|chi - xi^-3| = {phase_err:.3e}, adjoint closure = {}", adjoint.passed),
    );
}

#[test]
fn criterion_03_five_qubit_trivial_stabilizer() {
    let rep = rep_from_label("sl2x5").unwrap();
    let v = critical_5qubit();
    let base = stabilizer_lie(&rep, &v).unwrap();
    let ext = extended_stabilizer_lie(&rep, &v).unwrap();
    conclude(
        3,
        "five-qubit stabilizer algebra is trivial, also under scalar extension",
        base.lie_dim == 0 && ext.lie_dim == 0,
        &format!("base lie_dim = {}, extended lie_dim = {}", base.lie_dim, ext.lie_dim),
    );
}

#[test]
fn criterion_04_nilpotent_null_cone() {
    let rep = rep_from_label("sl2x4").unwrap();
    let x = nilpotent_4qubit();
    let stab = stabilizer_lie(&rep, &x).unwrap();
    let pulled = d4_invariant_set().pullback_via_spin().unwrap();
    let evaluated = pulled.evaluate_all(x.as_vector()).unwrap();
    let max_rel = evaluated.max_relative();
    let class = classify_orbit(&rep, &x, &FlowConfig::default(), Some(&pulled)).unwrap();
    conclude(
        4,
        "four-qubit nilpotent: trivial stabilizer, vanishing invariants, null-cone verdict",
        stab.lie_dim == 0
            && max_rel <= 1e-10
            && class.class == OrbitClass::NullCone
            && class.flow.iterations <= 10_000,
        &format!(
            "lie_dim = {}, max invariant = {max_rel:.3e}, verdict {:?} in {} iterations",
            stab.lie_dim, class.class, class.flow.iterations
        ),
    );
}

#[test]
fn criterion_05_sign_diagonal_group() {
    let rep = rep_from_label("so4pair").unwrap();
    let v = diag_1234_vector();
    let group = verify_finite_group(&rep, &sign_diag_operators(), &v, true).unwrap();
    let stab = stabilizer_lie(&rep, &v).unwrap();
    let r = compute_r(&d4_invariant_set(), v.as_vector()).unwrap();
    conclude(
        5,
        "sign-diagonal pairs form the order-8 stabilizer group of diag(1,2,3,4)",
        group.order == 8 && group.passed() && stab.lie_dim == 0 && r == 2,
        &format!(
            "order = {}, closed = {}, stabilize = {}, lie_dim = {}, r = {r}",
            group.order, group.closed_under_product, group.all_stabilize, stab.lie_dim
        ),
    );
}

#[test]
fn criterion_06_flow_and_minimality() {
    let rep = rep_from_label("sl2x4").unwrap();
    let mut worst_grad_rel: f64 = 0.0;
    let mut worst_ratio: f64 = f64::INFINITY;
    let mut all_converged = true;
    for idx in 0..10u64 {
        let mut rng = sample_rng(606, idx);
        let v0 = sample_gaussian_vector(16, &mut rng);
        let out = minimize_norm(&rep, &v0, &FlowConfig::default()).unwrap();
        if out.status != FlowStatus::Critical {
            all_converged = false;
            continue;
        }
        worst_grad_rel = worst_grad_rel.max(out.final_grad_norm / out.final_vector.norm_sq());
        let report = verify_kn_minimality(&rep, &out.final_vector, 500, 7000 + idx).unwrap();
        worst_ratio = worst_ratio.min(report.min_ratio);
    }
    conclude(
        6,
        "10 random flows converge and critical endpoints minimize over 500 sampled moves",
        all_converged && worst_grad_rel <= 1e-10 && worst_ratio >= 1.0 - 1e-9,
        &format!("worst relative gradient {worst_grad_rel:.3e}, min ratio {worst_ratio:.12}"),
    );
}

fn differential_identity_max_err(rep: &Representation, seed: u64, trials: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rep.dim_v();
    let h = 1e-4;
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let v = random_state(&mut rng, n);
        let w = random_state(&mut rng, n);
        let j = rng.gen_range(0..rep.group_dim());
        let gj = |state: &StateVector| moment_components(rep, state).unwrap().components[j];
        let plus = StateVector::new(v.as_vector() + w.as_vector() * c(h, 0.0)).unwrap();
        let minus = StateVector::new(v.as_vector() - w.as_vector() * c(h, 0.0)).unwrap();
        let fd = (gj(&plus) - gj(&minus)) / (2.0 * h);
        let xv = StateVector::new(rep.generator(j) * v.as_vector()).unwrap();
        let omega = symplectic_pairing(&xv, &w).unwrap();
        let scale = omega.abs().max(1e-6 * v.norm() * w.norm());
        worst = worst.max((fd - omega).abs() / scale);
    }
    worst
}

#[test]
fn criterion_07_differential_identity() {
    let mut detail = String::new();
    let mut pass = true;
    for label in ["sl2x4", "sl2x5", "so4pair"] {
        let rep = rep_from_label(label).unwrap();
        let worst = differential_identity_max_err(&rep, 707, 50);
        pass &= worst <= tol::DIFFERENTIAL_REL;
        detail.push_str(&format!("{label}: {worst:.3e} "));
    }
    conclude(7, "finite differences of g_j match the symplectic pairing", pass, detail.trim());
}

fn descent_identity_max_err(rep: &Representation, seed: u64, trials: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rep.dim_v();
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let raw = random_state(&mut rng, n);
        let v = StateVector::new(raw.as_vector() / c(raw.norm(), 0.0)).unwrap();
        let m = moment_components(rep, &v).unwrap();
        let mut hmat = DMatrix::<Complex64>::zeros(n, n);
        for (g, x) in m.components.iter().zip(rep.k_basis()) {
            hmat += x * c(0.0, *g);
        }
        let phi = |t: f64| (( &hmat * c(t, 0.0)).exp() * v.as_vector()).norm_squared();
        let fd = (phi(h) - phi(-h)) / (2.0 * h);
        let predicted = -4.0 * m.components.iter().map(|g| g * g).sum::<f64>();
        let scale = predicted.abs().max(1e-9);
        worst = worst.max((fd - predicted).abs() / scale);
    }
    worst
}

#[test]
fn criterion_08_descent_identity() {
    let mut detail = String::new();
    let mut pass = true;
    for label in ["sl2x4", "sl2x5", "so4pair"] {
        let rep = rep_from_label(label).unwrap();
        let worst = descent_identity_max_err(&rep, 808, 50);
        pass &= worst <= tol::DIFFERENTIAL_REL;
        detail.push_str(&format!("{label}: {worst:.3e} "));
    }
    conclude(
        8,
        "initial slope of |exp(tH) v|^2 equals -4 sum g_j^2",
        pass,
        detail.trim(),
    );
}

#[test]
fn criterion_09_rank_dimension_consistency() {
    let mut pass = true;
    let mut detail = String::new();
    for (label, expect) in [("sl2x4", 12usize), ("sl2x5", 15usize)] {
        let cfg = SurveyConfig::new(label, 25, 909);
        let report = run_survey(&cfg).unwrap();
        let critical: Vec<_> = report
            .per_sample
            .iter()
            .filter(|r| r.status == FlowStatus::Critical)
            .take(20)
            .collect();
        let enough = critical.len() == 20;
        let uniform = critical
            .iter()
            .all(|r| r.criticality_rank == Some(expect) && r.orbit_dim == Some(expect));
        pass &= enough && uniform;
        detail.push_str(&format!("{label}: {} critical, rank/orbit = {expect}: {uniform} ", critical.len()));
    }
    conclude(9, "criticality rank equals orbit dimension at 20 survey endpoints", pass, detail.trim());
}

#[test]
fn criterion_10_invariant_constancy_along_flows() {
    let mut pass = true;
    let mut worst_drift: f64 = 0.0;
    for (label, set) in [
        ("sl2x4", d4_invariant_set().pullback_via_spin().unwrap()),
        ("so4pair", d4_invariant_set()),
    ] {
        let rep = rep_from_label(label).unwrap();
        for idx in 0..10u64 {
            let mut rng = sample_rng(1010, idx);
            let v0 = sample_gaussian_vector(16, &mut rng);
            let out = minimize_norm(&rep, &v0, &FlowConfig::default()).unwrap();
            let before = set.evaluate_all(v0.as_vector()).unwrap();
            let after = set.evaluate_all(out.final_vector.as_vector()).unwrap();
            for ((b, a), scale) in before.values.iter().zip(&after.values).zip(&before.scales) {
                let drift = (a - b).norm() / b.norm().max(1e-9 * scale);
                worst_drift = worst_drift.max(drift);
                pass &= drift <= tol::FLOW_CONSTANCY_REL;
            }
        }
    }
    conclude(
        10,
        "invariants are constant along 10 flow trajectories per domain",
        pass,
        &format!("worst relative drift {worst_drift:.3e}"),
    );
}

#[test]
fn criterion_11_survey_determinism() {
    let cfg = SurveyConfig::new("sl2x4", 100, 42);
    let a = run_survey(&cfg).unwrap();
    let b = run_survey(&cfg).unwrap();
    let ja = serde_json::to_string(&a).unwrap();
    let jb = serde_json::to_string(&b).unwrap();
    conclude(
        11,
        "repeated surveys are byte-identical with modal stabilizer 0 and d = 12",
        ja == jb && a.generic_stab_dim == Some(0) && a.d_estimate == Some(12) && a.n_critical >= 95,
        &format!(
            "identical = {}, modal stab = {:?}, d_estimate = {:?}, critical {}/100",
            ja == jb,
            a.generic_stab_dim,
            a.d_estimate,
            a.n_critical
        ),
    );
}

#[test]
fn criterion_12_invariant_set_properties() {
    let set = d4_invariant_set();
    let rep = rep_from_label("so4pair").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1212);

    let mut worst_hom: f64 = 0.0;
    let mut worst_inv: f64 = 0.0;
    for _ in 0..100 {
        let x = random_state(&mut rng, 16);
        let lam = c(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0);
        let ev = set.evaluate_all(x.as_vector()).unwrap();
        let ev_scaled = set.evaluate_all(&(x.as_vector() * lam)).unwrap();
        for ((v1, v2), deg) in ev.values.iter().zip(&ev_scaled.values).zip(&ev.degrees) {
            let expect = v1 * lam.powu(*deg);
            worst_hom = worst_hom.max((v2 - expect).norm() / expect.norm().max(1e-12));
        }

        let coeffs: Vec<Complex64> = (0..rep.group_dim())
            .map(|_| c(0.4 * (rng.gen::<f64>() - 0.5), 0.4 * (rng.gen::<f64>() - 0.5)))
            .collect();
        let g = knorbit::rep::group_element_from_coeffs(&rep, &coeffs).unwrap();
        let gx = g.matrix() * x.as_vector();
        let ev_moved = set.evaluate_all(&gx).unwrap();
        for ((v1, v2), scale) in ev.values.iter().zip(&ev_moved.values).zip(&ev.scales) {
            worst_inv = worst_inv.max((v2 - v1).norm() / v1.norm().max(1e-6 * scale));
        }
    }

    let d = diag_1234_vector();
    let ev = set.evaluate_all(d.as_vector()).unwrap();
    // oracle: power sums of the diagonal — sum d^2, prod d, sum d^4, sum d^6
    let expect = [30.0, 24.0, 354.0, 4890.0];
    let diag_ok = ev
        .values
        .iter()
        .zip(expect)
        .all(|(v, e)| (v - c(e, 0.0)).norm() <= 1e-10 * e);

    conclude(
        12,
        "invariants are homogeneous, orbit-constant, and exact on diag(1,2,3,4)",
        worst_hom <= tol::HOMOGENEITY_REL && worst_inv <= tol::INVARIANCE_REL && diag_ok,
        &format!("homogeneity {worst_hom:.3e}, invariance {worst_inv:.3e}, diagonal values ok = {diag_ok}"),
    );
}
