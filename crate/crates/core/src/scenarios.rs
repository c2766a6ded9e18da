//! Built-in worked scenarios, each bundling a state, the checks that pin its
//! known properties, and a JSON report. They double as the regression suite
//! for the toolkit's distinguished examples.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{KnError, Result};
use crate::flow::{classify_orbit, is_critical, verify_kn_minimality, FlowConfig, OrbitClass};
use crate::invariants::d4_invariant_set;
use crate::rep::{build_sl2_tensor_rep, build_so4_pair_rep, GroupElement, Provenance, StateVector};
use crate::stabilizer::{
    compute_r, extended_stabilizer_lie, phase_check, stabilizer_lie, verify_adjoint_closure,
    verify_finite_group,
};
use crate::tol;

const C0: Complex64 = Complex64::new(0.0, 0.0);
const C1: Complex64 = Complex64::new(1.0, 0.0);

/// The 4-qubit element `|0011> + |0100> + |1001> + |1010>` (principal
/// nilpotent of the ambient orthogonal algebra): trivial stabilizer, open
/// orbit in the 12-dimensional null cone.
pub fn nilpotent_4qubit() -> StateVector {
    let mut v = DVector::from_element(16, C0);
    for idx in [0b0011, 0b0100, 0b1001, 0b1010] {
        v[idx] = C1;
    }
    StateVector::new(v).expect("finite by construction")
}

/// The 5-qubit critical element `e1^{(x)5} - (1/sqrt 3) w`, where `w` sums
/// the five basis tensors with a single index equal to 1.
pub fn critical_5qubit() -> StateVector {
    let mut v = DVector::from_element(32, C0);
    v[0] = C1;
    let amp = Complex64::new(-1.0 / 3.0f64.sqrt(), 0.0);
    for pos in 0..5 {
        let idx = 0b11111 ^ (1 << (4 - pos));
        v[idx] = amp;
    }
    StateVector::new(v).expect("finite by construction")
}

///`diag(1,2,3,4)` flattened row-major into the `so4pair` module.
pub fn diag_1234_vector() -> StateVector {
    let mut v = DVector::from_element(16, C0);
    for k in 0..4 {
        v[5 * k] = Complex64::new((k + 1) as f64, 0.0);
    }
    StateVector::new(v).expect("finite by construction")
}

/// The 16 sign-diagonal pairs `(eps, eps)` acting on `M_4(C)` by
/// `X -> eps X eps`. As operators, `eps` and `-eps` coincide, so the list
/// carries 8 distinct matrices: the order-8 stabilizer of the diagonal.
pub fn sign_diag_operators() -> Vec<GroupElement> {
    let mut out = Vec::with_capacity(16);
    for bits in 0..16u32 {
        let signs: Vec<f64> = (0..4).map(|k| if bits & (1 << k) == 0 { 1.0 } else { -1.0 }).collect();
        let eps = DMatrix::<Complex64>::from_fn(4, 4, |i, j| {
            if i == j {
                Complex64::new(signs[i], 0.0)
            } else {
                C0
            }
        });
        let op = eps.kronecker(&eps);
        let label = format!(
            "sign_diag({})",
            signs.iter().map(|s| if *s > 0.0 { '+' } else { '-' }).collect::<String>()
        );
        out.push(
            GroupElement::new(op)
                .expect("sign operators are unitary")
                .with_provenance(Provenance::Label(label)),
        );
    }
    out
}

/// `A^{(x)5}` with `A = diag(xi, xi^{-1})`, `xi = exp(i pi / 4)`: maps the
/// 5-qubit critical element to `xi^{-3}` times itself.
pub fn phase_gate_a_pow5() -> GroupElement {
    let xi = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
    let a = DMatrix::from_row_slice(2, 2, &[xi, C0, C0, xi.conj()]);
    let mut g = DMatrix::from_element(1, 1, C1);
    for _ in 0..5 {
        g = g.kronecker(&a);
    }
    GroupElement::new(g)
        .expect("diagonal unitary")
        .with_provenance(Provenance::Label("diag(xi, xi^-1)^(x)5, xi = exp(i pi/4)".into()))
}

/// One named check inside a scenario.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Assertion {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed, detail: detail.into() }
    }
}

/// Outcome of one scenario run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub name: String,
    pub assertions: Vec<Assertion>,
    pub passed: bool,
    pub data: serde_json::Value,
}

impl ScenarioReport {
    fn from_assertions(name: &str, assertions: Vec<Assertion>, data: serde_json::Value) -> Self {
        let passed = assertions.iter().all(|a| a.passed);
        Self { name: name.into(), assertions, passed, data }
    }
}

/// Names accepted by [`run_example`].
pub fn scenario_names() -> Vec<&'static str> {
    vec!["e1_nilpotent", "e1_diag", "e2_critical"]
}

/// Runs one named scenario and reports every assertion.
pub fn run_example(name: &str) -> Result<ScenarioReport> {
    match name {
        "e1_nilpotent" => scenario_e1_nilpotent(),
        "e1_diag" => scenario_e1_diag(),
        "e2_critical" => scenario_e2_critical(),
        _ => Err(KnError::UnknownLabel(format!("scenario `{name}`"))),
    }
}

fn scenario_e1_nilpotent() -> Result<ScenarioReport> {
    let rep = build_sl2_tensor_rep(4)?;
    let x = nilpotent_4qubit();
    let mut assertions = Vec::new();

    let stab = stabilizer_lie(&rep, &x)?;
    assertions.push(Assertion::new(
        "stabilizer_lie_dim_0",
        stab.lie_dim == 0,
        format!("lie_dim = {}, orbit_dim = {}", stab.lie_dim, stab.orbit_dim),
    ));

    let pulled = d4_invariant_set().pullback_via_spin()?;
    let evaluated = pulled.evaluate_all(x.as_vector())?;
    let max_rel = evaluated.max_relative();
    assertions.push(Assertion::new(
        "invariants_vanish",
        max_rel <= tol::NULL_CONE_TEST,
        format!("max relative invariant {max_rel:.3e}"),
    ));

    let class = classify_orbit(&rep, &x, &FlowConfig::default(), Some(&pulled))?;
    assertions.push(Assertion::new(
        "classified_null_cone",
        class.class == OrbitClass::NullCone,
        format!("class = {:?} after {} iterations", class.class, class.flow.iterations),
    ));

    let data = json!({
        "state": x,
        "stabilizer": stab,
        "invariants": evaluated,
        "classification": class.to_json(),
    });
    Ok(ScenarioReport::from_assertions("e1_nilpotent", assertions, data))
}

fn scenario_e1_diag() -> Result<ScenarioReport> {
    let rep = build_so4_pair_rep();
    let v = diag_1234_vector();
    let mut assertions = Vec::new();

    let critical = is_critical(&rep, &v, tol::GRAD_TOL)?;
    assertions.push(Assertion::new("critical", critical, "moment components vanish"));

    let stab = stabilizer_lie(&rep, &v)?;
    assertions.push(Assertion::new(
        "stabilizer_lie_dim_0",
        stab.lie_dim == 0,
        format!("lie_dim = {}", stab.lie_dim),
    ));

    let group = verify_finite_group(&rep, &sign_diag_operators(), &v, true)?;
    assertions.push(Assertion::new(
        "finite_group_order_8",
        group.order == 8 && group.passed(),
        format!(
            "order = {}, closed = {}, all_stabilize = {}",
            group.order, group.closed_under_product, group.all_stabilize
        ),
    ));

    let set = d4_invariant_set();
    let r = compute_r(&set, v.as_vector())?;
    assertions.push(Assertion::new("r_equals_2", r == 2, format!("r = {r}")));

    let data = json!({
        "state": v,
        "stabilizer": stab,
        "finite_group": group,
        "r": r,
    });
    Ok(ScenarioReport::from_assertions("e1_diag", assertions, data))
}

fn scenario_e2_critical() -> Result<ScenarioReport> {
    let rep = build_sl2_tensor_rep(5)?;
    let v = critical_5qubit();
    let mut assertions = Vec::new();

    let critical = is_critical(&rep, &v, tol::GRAD_TOL)?;
    assertions.push(Assertion::new("critical", critical, "moment components vanish"));

    let stab = stabilizer_lie(&rep, &v)?;
    let ext = extended_stabilizer_lie(&rep, &v)?;
    assertions.push(Assertion::new(
        "stabilizer_trivial_base_and_extended",
        stab.lie_dim == 0 && ext.lie_dim == 0,
        format!("base lie_dim = {}, extended lie_dim = {}", stab.lie_dim, ext.lie_dim),
    ));

    let g = phase_gate_a_pow5();
    let hit = phase_check(&g, &v, tol::PHASE_TOL)?;
    let xi = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
    let expected = xi.powi(-3);
    let phase_ok = hit.as_ref().map(|h| (h.phase - expected).norm() <= 1e-12).unwrap_or(false);
    assertions.push(Assertion::new(
        "phase_xi_minus_3",
        phase_ok,
        match &hit {
            Some(h) => format!("phase = {:.12}, order = {}", h.phase, h.phase_order),
            None => "no phase hit".to_string(),
        },
    ));

    let adjoint = verify_adjoint_closure(&rep, &[g.clone(), g.adjoint()], &v)?;
    assertions.push(Assertion::new(
        "adjoint_closure",
        adjoint.passed,
        format!("{} candidates checked", adjoint.outcomes.len()),
    ));

    let minimality = verify_kn_minimality(&rep, &v, 500, 20_206)?;
    assertions.push(Assertion::new(
        "orbit_minimality",
        minimality.passed,
        format!("min ratio {:.12}", minimality.min_ratio),
    ));

    let data = json!({
        "state": v,
        "stabilizer": stab,
        "extended_stabilizer": ext,
        "phase_hit": hit,
        "adjoint_closure": adjoint,
        "minimality": minimality,
    });
    Ok(ScenarioReport::from_assertions("e2_critical", assertions, data))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scenario_vectors_have_expected_shapes() {
        assert_eq!(nilpotent_4qubit().dim(), 16);
        assert!((nilpotent_4qubit().norm() - 2.0).abs() < 1e-15);
        assert_eq!(critical_5qubit().dim(), 32);
        // |v|^2 = 1 + 5/3 = 8/3
        assert!((critical_5qubit().norm_sq() - 8.0 / 3.0).abs() < 1e-14);
        assert_eq!(diag_1234_vector().dim(), 16);
        assert_eq!(sign_diag_operators().len(), 16);
    }

    #[test]
    fn all_scenarios_pass() {
        for name in scenario_names() {
            let report = run_example(name).unwrap();
            assert!(report.passed, "{name}: {:#?}", report.assertions);
        }
        assert!(run_example("nope").is_err());
    }
}
