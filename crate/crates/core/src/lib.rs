//! Variance-based uncertainty bounds for pairs of Hermitian observables.
//!
//! The crate evaluates the Heisenberg–Robertson product bound and the
//! Maccone–Pati sum-of-variances bounds on finite-dimensional pure states,
//! together with the machinery needed to probe them numerically:
//!
//! * [`linalg`]: small dense complex vectors and matrices, plus a cyclic
//!   Jacobi eigensolver for Hermitian matrices.
//! * [`state`]: states, observables, first and second moments, commutators
//!   and the mixed correlation `⟨φ|δA δB|φ⟩`.
//! * [`av`]: the Aharonov–Vaidman split of `F|ψ⟩` into parallel and
//!   perpendicular parts.
//! * [`bounds`]: every bound, individually and as a [`bounds::BoundSuite`].
//! * [`scenarios`]: executable eigenstate and vanishing-commutator analyses.
//! * [`sampler`]: counter-based random streams, Haar states, GUE observables
//!   and deterministic batch scans.

pub mod av;
pub mod bounds;
mod error;
pub mod linalg;
pub mod sampler;
pub mod scenarios;
pub mod state;
pub mod tol;

pub use error::{Error, Result};
pub use linalg::{CMatrix, CVector, C64};
pub use state::{Observable, StateVector};
