//! Shared tolerance constants.
//!
//! Relative tolerances are multiplied by a problem scale. For a pair of
//! observables that scale is [`pair_scale`]: `1 + ‖A‖∞·‖B‖∞`, where `‖·‖∞` is
//! the induced infinity norm (maximum absolute row sum). For a single
//! operator it is `1 + ‖F‖∞`.

use crate::linalg::CMatrix;

/// Relative tolerance for accepting a matrix as Hermitian.
pub const HERMITIAN: f64 = 1e-10;

/// Absolute tolerance on unit norm and orthogonality of constructed states.
pub const UNIT_NORM: f64 = 1e-12;

/// Relative tolerance for algebraic identities that must hold exactly in
/// exact arithmetic (commutator identity, Aharonov–Vaidman reconstruction,
/// two-path agreements).
pub const IDENTITY: f64 = 1e-10;

/// Deviation below which a state is treated as an eigenstate and the
/// perpendicular direction is left undefined.
pub const EIGEN_EPS: f64 = 1e-8;

/// Allowed negative slack, times the pair scale, for any bound.
pub const VALIDITY_SLACK: f64 = 1e-9;

/// Maximum overlap `|⟨φ|φ⊥⟩|` accepted for a caller-supplied perpendicular state.
pub const PERP_OVERLAP: f64 = 1e-8;

/// Relative threshold below which `⟨[A,B]⟩_φ` is considered to vanish.
pub const COMMUTATOR_VANISH: f64 = 1e-8;

/// Operator-norm threshold for deciding that `[A,B] != 0`.
pub const COMMUTATOR_NONZERO: f64 = 1e-10;

/// Penalty weight on the squared commutator expectation in the
/// counterexample search.
pub const PENALTY_WEIGHT: f64 = 1e3;

/// Default number of restarts for the counterexample search.
pub const DEFAULT_STARTS: usize = 32;

/// `1 + ‖F‖∞`.
pub fn op_scale(f: &CMatrix) -> f64 {
    1.0 + f.norm_inf()
}

/// `1 + ‖A‖∞·‖B‖∞`.
pub fn pair_scale(a: &CMatrix, b: &CMatrix) -> f64 {
    1.0 + a.norm_inf() * b.norm_inf()
}
