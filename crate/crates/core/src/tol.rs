//! Numerical tolerances used throughout the crate.
//!
//! Rank decisions, phase matching, and invariant comparisons all reduce to
//! floating-point thresholds; they are collected here so every report that
//! quotes a tolerance quotes the same number.

/// Frobenius-norm residual allowed when checking that the bracket of two
/// basis elements lies back in the span of the basis.
pub const BRACKET_CLOSURE: f64 = 1e-10;

/// Smallest singular value of the flattened basis matrix required for the
/// basis to count as linearly independent.
pub const BASIS_INDEPENDENCE_MIN_SV: f64 = 1e-8;

/// Allowed imaginary residue of a moment-map component, relative to the
/// squared norm of the state (the component is quadratic in the state).
pub const MOMENT_IMAG_RESIDUE: f64 = 1e-12;

/// Default relative gradient tolerance for declaring a flow endpoint critical.
pub const GRAD_TOL: f64 = 1e-10;

/// Default norm-collapse ratio for the null-cone verdict.
pub const NULLCONE_RATIO: f64 = 1e-8;

/// Relative singular-value threshold for all rank decisions (stabilizer
/// kernels, criticality rank).
pub const RANK_REL_SV: f64 = 1e-8;

/// Residual bound certified for each reported stabilizer kernel vector:
/// `|(sum c_j X_j) v| <= KERNEL_CERTIFICATE * |v| * |c|`.
pub const KERNEL_CERTIFICATE: f64 = 1e-8;

/// Projection residual below which `g v` counts as parallel to `v`, and the
/// unit-modulus slack allowed for detected phases.
pub const PHASE_TOL: f64 = 1e-9;

/// Largest root-of-unity order probed when classifying a detected phase.
pub const PHASE_ORDER_MAX: u32 = 64;

/// Entrywise matrix-match tolerance in finite-group verification.
pub const FINITE_GROUP_MATCH: f64 = 1e-9;

/// Relative cutoff deciding that an invariant value is nonvanishing
/// (used when taking the gcd of nonvanishing degrees).
pub const INVARIANT_NONVANISH: f64 = 1e-10;

/// Relative cutoff for the invariant-based null-cone test.
pub const NULL_CONE_TEST: f64 = 1e-10;

/// Slack in the orbit-minimality check: `|g v| >= |v| * (1 - MINIMALITY_SLACK)`.
pub const MINIMALITY_SLACK: f64 = 1e-9;

/// Condition-number ceiling for accepting a matrix as an invertible group element.
pub const CONDITION_MAX: f64 = 1e12;

/// Relative accuracy target of the dense matrix exponential.
pub const EXP_ACCURACY: f64 = 1e-12;

/// Intertwining residual allowed for the spin isomorphism.
pub const SPIN_INTERTWINE: f64 = 1e-10;

/// Relative tolerance for homogeneity checks of polynomial invariants.
pub const HOMOGENEITY_REL: f64 = 1e-9;

/// Relative tolerance for group-invariance checks of polynomial invariants.
pub const INVARIANCE_REL: f64 = 1e-8;

/// Relative drift allowed for invariant values along one flow trajectory.
pub const FLOW_CONSTANCY_REL: f64 = 1e-8;

/// Relative tolerance for finite-difference derivative identities.
pub const DIFFERENTIAL_REL: f64 = 1e-6;
