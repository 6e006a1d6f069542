//! Aharonov–Vaidman decomposition `F|ψ⟩ = ⟨F⟩_ψ|ψ⟩ + Δ_ψF|ψ⊥_F⟩`.
//!
//! The perpendicular state is `δ_ψF|ψ⟩ / Δ_ψF`. Its global phase is fixed by
//! requiring `⟨ψ⊥_F|δ_ψF|ψ⟩ = Δ_ψF > 0`. When `Δ_ψF` is at or below the
//! eigenstate threshold the direction is undefined and `perp_state` is `None`.

use serde::{Deserialize, Serialize};

use crate::linalg::{self, CVector, C64};
use crate::state::{self, check_dim, Observable, StateVector};
use crate::{tol, Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AvDecomposition {
    pub mean: f64,
    pub sigma: f64,
    pub perp_state: Option<StateVector>,
}

impl AvDecomposition {
    pub fn is_eigenstate(&self) -> bool {
        self.perp_state.is_none()
    }
}

pub fn av_decompose(f: &Observable, psi: &StateVector, eps_eigen: f64) -> Result<AvDecomposition> {
    if eps_eigen.is_nan() || eps_eigen <= 0.0 {
        return Err(Error::InvalidConfig(format!(
            "eigenstate threshold must be positive, got {eps_eigen}"
        )));
    }
    let m = state::moments(f, psi)?;
    let perp_state = if m.std_dev > eps_eigen {
        let dev = state::deviation_apply(f, psi)?;
        let perp = dev.scaled(C64::new(1.0 / m.std_dev, 0.0));
        // dividing by the norm already gives unit length; renormalize to
        // absorb the last ulp before the strict unit-norm check
        Some(StateVector::normalized(&perp)?)
    } else {
        None
    };
    Ok(AvDecomposition {
        mean: m.mean,
        sigma: m.std_dev,
        perp_state,
    })
}

/// `‖F|ψ⟩ − mean·|ψ⟩ − sigma·|ψ⊥⟩‖`, omitting the last term when absent.
pub fn av_reconstruct_residual(f: &Observable, psi: &StateVector, dec: &AvDecomposition) -> Result<f64> {
    check_dim(f.dim(), psi.dim())?;
    let applied = linalg::apply(f.matrix(), psi.as_vector())?;
    let mut r: CVector = applied.add_scaled(C64::new(-dec.mean, 0.0), psi.as_vector());
    if let Some(perp) = &dec.perp_state {
        check_dim(psi.dim(), perp.dim())?;
        r = r.add_scaled(C64::new(-dec.sigma, 0.0), perp.as_vector());
    }
    Ok(linalg::norm(&r))
}

/// Convenience wrapper using [`tol::EIGEN_EPS`].
pub fn av_decompose_default(f: &Observable, psi: &StateVector) -> Result<AvDecomposition> {
    av_decompose(f, psi, tol::EIGEN_EPS)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::inner;

    fn e0() -> StateVector {
        StateVector::basis(2, 0).unwrap()
    }

    #[test]
    fn pauli_x_on_up() {
        let x = Observable::pauli_x();
        let dec = av_decompose_default(&x, &e0()).unwrap();
        assert_eq!(dec.mean, 0.0);
        assert_eq!(dec.sigma, 1.0);
        assert_eq!(dec.perp_state, Some(StateVector::basis(2, 1).unwrap()));
        assert_eq!(av_reconstruct_residual(&x, &e0(), &dec).unwrap(), 0.0);
    }

    #[test]
    fn eigenstate_has_no_perpendicular() {
        let z = Observable::pauli_z();
        let dec = av_decompose_default(&z, &e0()).unwrap();
        assert_eq!((dec.mean, dec.sigma), (1.0, 0.0));
        assert!(dec.is_eigenstate());
        assert_eq!(av_reconstruct_residual(&z, &e0(), &dec).unwrap(), 0.0);

        let psi = StateVector::normalized(&CVector::from_real(&[0.6, 0.8]).unwrap()).unwrap();
        let dec = av_decompose_default(&Observable::identity(2), &psi).unwrap();
        assert!((dec.mean - 1.0).abs() < 1e-15);
        assert!(dec.sigma < 1e-15);
        assert!(dec.perp_state.is_none());
    }

    #[test]
    fn perpendicular_phase_convention() {
        let y = Observable::pauli_y();
        let psi = StateVector::normalized(&CVector::from_real(&[0.6, 0.8]).unwrap()).unwrap();
        let dec = av_decompose_default(&y, &psi).unwrap();
        let perp = dec.perp_state.as_ref().unwrap();
        assert!(inner(psi.as_vector(), perp.as_vector()).unwrap().norm() < 1e-15);
        let dev = state::deviation_apply(&y, &psi).unwrap();
        let pairing = inner(perp.as_vector(), &dev).unwrap();
        assert!(pairing.im.abs() < 1e-15);
        assert!((pairing.re - dec.sigma).abs() < 1e-15);
    }

    #[test]
    fn rejects_nonpositive_threshold() {
        assert!(av_decompose(&Observable::pauli_x(), &e0(), 0.0).is_err());
    }
}
