//! Numerical Kempf-Ness toolkit.
//!
//! The crate builds matrix realizations of reductive group representations,
//! locates orbit-norm minimizers by gradient flow, classifies orbits as
//! closed or null-cone, computes infinitesimal and phase stabilizers, and
//! evaluates the classical polynomial invariants of the `SO(4) x SO(4)`
//! action on 4x4 matrices — all at desk scale, with seeded reproducibility.
//!
//! Entry points by task:
//!
//! - representations and group actions: [`rep`] (see [`rep::rep_from_label`]
//!   for the label registry) and the tensor/matrix bridge in [`spin`];
//! - moment maps, criticality, and the norm-minimization flow: [`flow`];
//! - stabilizer algebras, phase stabilizers, finite-group checks: [`stabilizer`];
//! - polynomial invariants and the null-cone oracle: [`invariants`];
//! - randomized orbit surveys and built-in scenarios: [`atlas`], [`scenarios`].
//!
//! Runnable demonstrations live in `examples/`; the thin `kn` binary exposes
//! the same functionality as CLI subcommands emitting JSON.

pub mod atlas;
pub mod cjson;
pub mod error;
pub mod flow;
pub mod invariants;
pub mod rep;
pub mod scenarios;
pub mod spin;
pub mod stabilizer;
pub mod tol;

pub use error::{KnError, Result};
pub use flow::{
    classify_orbit, criticality_rank, is_critical, minimize_norm, moment_components,
    symplectic_pairing, verify_kn_minimality, FlowConfig, FlowResult, FlowStatus, MomentValue,
    OrbitClass, OrbitClassification,
};
pub use invariants::{d4_invariant_set, EvaluatedInvariants, Invariant, InvariantSet};
pub use rep::{
    build_sl2_tensor_rep, build_so4_pair_rep, exp_action, extend_with_scalars,
    group_element_from_coeffs, group_elements_from_matrix_json, registry_labels, rep_from_label,
    validate_rep, GroupElement, Provenance, RepDiagnostics, Representation, StateVector,
};
pub use scenarios::{run_example, ScenarioReport};
pub use spin::{spin_isomorphism, SpinIsomorphism};
pub use stabilizer::{
    compute_r, extended_stabilizer_lie, phase_check, stabilizer_lie, verify_adjoint_closure,
    verify_finite_group, PhaseStabilizerHit, StabilizerReport,
};
pub use atlas::{run_survey, SampleRecord, SurveyConfig, SurveyReport};
