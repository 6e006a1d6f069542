//! Uncertainty bounds for a pair of observables in a pure state.
//!
//! | bound          | left side           | right side                                   |
//! |----------------|---------------------|----------------------------------------------|
//! | HR             | `ΔA·ΔB`             | `½|⟨[A,B]⟩|`                                 |
//! | MP1 (sign ±)   | `ΔA² + ΔB²`         | `±i⟨[A,B]⟩ + |⟨φ|(A ± iB)|φ⊥⟩|²`             |
//! | MP2            | `ΔA² + ΔB²`         | `½|⟨φ⊥_(A+B)|(A+B)|φ⟩|² = ½Δ(A+B)²`          |
//! | real-part form | `ΔA² + ΔB²`         | `2|Re⟨φ|δA δB|φ⟩|`                           |
//!
//! The MP1 overlap term is `|⟨(A ∓ iB)φ|φ⊥⟩|²`. Over unit `φ⊥` orthogonal to
//! `φ` it is maximized, by Cauchy–Schwarz, at `φ⊥ ∝ P⊥(A ∓ iB)|φ⟩` where `P⊥`
//! projects out `φ`; [`mp1_optimal`] uses that state.

use serde::{Deserialize, Serialize};

use crate::av;
use crate::linalg::{self, inner, normalize, project_orthogonal, CVector, C64};
use crate::state::{self, check_dim, Observable, StateVector};
use crate::{tol, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        match s {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl TryFrom<i8> for Sign {
    type Error = String;

    fn try_from(v: i8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(format!("sign must be +1 or -1, got {other}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HrReport {
    pub lhs_product: f64,
    pub rhs: f64,
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mp1Report {
    pub sign: Sign,
    pub perp_used: StateVector,
    /// `±i⟨[A,B]⟩_φ`, real because the commutator expectation is imaginary.
    pub commutator_term: f64,
    /// `|⟨φ|(A ± iB)|φ⊥⟩|²`.
    pub overlap_term: f64,
    pub rhs: f64,
    /// Set when the optimal direction vanished and an arbitrary orthogonal
    /// state was substituted.
    pub degenerate_perp: bool,
}

pub fn hr_bound(a: &Observable, b: &Observable, phi: &StateVector) -> Result<HrReport> {
    check_dim(a.dim(), b.dim())?;
    let ma = state::moments(a, phi)?;
    let mb = state::moments(b, phi)?;
    let lhs_product = ma.std_dev * mb.std_dev;
    let rhs = 0.5 * state::commutator_expectation(a, b, phi)?.norm();
    Ok(HrReport {
        lhs_product,
        rhs,
        slack: lhs_product - rhs,
    })
}

/// `±i⟨[A,B]⟩_φ` as a real number.
fn signed_commutator_term(a: &Observable, b: &Observable, phi: &StateVector, sign: Sign) -> Result<f64> {
    let ce = state::commutator_expectation(a, b, phi)?;
    let limit = tol::IDENTITY * tol::pair_scale(a.matrix(), b.matrix());
    if ce.re.abs() > limit {
        return Err(Error::Consistency(format!(
            "commutator expectation has real part {:e}",
            ce.re
        )));
    }
    // i·(iκ) = −κ
    Ok(-sign.value() * ce.im)
}

/// First sum bound evaluated at a caller-supplied perpendicular state.
pub fn mp1_bound(
    a: &Observable,
    b: &Observable,
    phi: &StateVector,
    perp: &StateVector,
    sign: Sign,
) -> Result<Mp1Report> {
    check_dim(a.dim(), b.dim())?;
    check_dim(a.dim(), phi.dim())?;
    check_dim(phi.dim(), perp.dim())?;
    let overlap = inner(phi.as_vector(), perp.as_vector())?.norm();
    if overlap > tol::PERP_OVERLAP {
        return Err(Error::NotOrthogonal { overlap });
    }
    evaluate_mp1(a, b, phi, perp.clone(), sign, false)
}

fn evaluate_mp1(
    a: &Observable,
    b: &Observable,
    phi: &StateVector,
    perp: StateVector,
    sign: Sign,
    degenerate_perp: bool,
) -> Result<Mp1Report> {
    let commutator_term = signed_commutator_term(a, b, phi, sign)?;
    let a_elem = inner(phi.as_vector(), &linalg::apply(a.matrix(), perp.as_vector())?)?;
    let b_elem = inner(phi.as_vector(), &linalg::apply(b.matrix(), perp.as_vector())?)?;
    let overlap_term = (a_elem + C64::new(0.0, sign.value()) * b_elem).norm_sqr();
    Ok(Mp1Report {
        sign,
        perp_used: perp,
        commutator_term,
        overlap_term,
        rhs: commutator_term + overlap_term,
        degenerate_perp,
    })
}

/// Some unit vector orthogonal to `phi`: the projected basis vector with the
/// largest surviving norm.
pub fn any_orthogonal(phi: &StateVector) -> Result<StateVector> {
    let d = phi.dim();
    if d < 2 {
        return Err(Error::DimensionTooSmall { min: 2, found: d });
    }
    let mut best: Option<CVector> = None;
    for k in 0..d {
        let p = project_orthogonal(&CVector::basis(d, k)?, phi.as_vector())?;
        if best.as_ref().is_none_or(|b| p.norm_sqr() > b.norm_sqr()) {
            best = Some(p);
        }
    }
    StateVector::normalized(&best.expect("d >= 2"))
}

/// First sum bound with the overlap-maximizing perpendicular state.
pub fn mp1_optimal(a: &Observable, b: &Observable, phi: &StateVector, sign: Sign) -> Result<Mp1Report> {
    check_dim(a.dim(), b.dim())?;
    check_dim(a.dim(), phi.dim())?;
    if phi.dim() < 2 {
        return Err(Error::DimensionTooSmall {
            min: 2,
            found: phi.dim(),
        });
    }
    // (A ∓ iB)|φ⟩
    let av = linalg::apply(a.matrix(), phi.as_vector())?;
    let bv = linalg::apply(b.matrix(), phi.as_vector())?;
    let w = av.add_scaled(C64::new(0.0, -sign.value()), &bv);
    let p = project_orthogonal(&w, phi.as_vector())?;
    match normalize(&p, tol::EIGEN_EPS) {
        Ok(dir) => {
            // re-project once to push the residual overlap to rounding level
            let dir = project_orthogonal(&dir, phi.as_vector())?;
            evaluate_mp1(a, b, phi, StateVector::normalized(&dir)?, sign, false)
        }
        Err(Error::DegenerateDirection { .. }) => {
            let mut report = evaluate_mp1(a, b, phi, any_orthogonal(phi)?, sign, true)?;
            // the overlap is zero for every orthogonal state in this case
            report.overlap_term = 0.0;
            report.rhs = report.commutator_term;
            Ok(report)
        }
        Err(e) => Err(e),
    }
}

/// `½·Δ_φ(A+B)²`, cross-checked against the matrix-element form whenever
/// the Aharonov–Vaidman perpendicular state of `A+B` exists.
pub fn mp2_bound(a: &Observable, b: &Observable, phi: &StateVector) -> Result<f64> {
    let sum = a.sum(b)?;
    let value = 0.5 * state::moments(&sum, phi)?.variance;
    if let Some(other) = mp2_via_perp(a, b, phi)? {
        let limit = tol::IDENTITY * tol::pair_scale(a.matrix(), b.matrix());
        if (value - other).abs() > limit {
            return Err(Error::Consistency(format!(
                "variance and matrix-element forms of the second sum bound differ: {value} vs {other}"
            )));
        }
    }
    Ok(value)
}

/// `½|⟨φ⊥_(A+B)|(A+B)|φ⟩|²`, or `None` at an eigenstate of `A+B`.
pub fn mp2_via_perp(a: &Observable, b: &Observable, phi: &StateVector) -> Result<Option<f64>> {
    let sum = a.sum(b)?;
    let dec = av::av_decompose(&sum, phi, tol::EIGEN_EPS)?;
    let Some(perp) = dec.perp_state else {
        return Ok(None);
    };
    let elem = inner(perp.as_vector(), &linalg::apply(sum.matrix(), phi.as_vector())?)?;
    Ok(Some(0.5 * elem.norm_sqr()))
}

/// `2|Re⟨φ|δA δB|φ⟩|`.
pub fn m12a_rhs(a: &Observable, b: &Observable, phi: &StateVector) -> Result<f64> {
    Ok(2.0 * state::correlation(a, b, phi)?.re_part.abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Slacks {
    pub hr: f64,
    pub mp1_plus: f64,
    pub mp1_minus: f64,
    pub mp1_best: f64,
    pub mp2: f64,
    pub m12a: f64,
}

/// Every bound for one `(A, B, φ)` instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundSuite {
    pub lhs_sum: f64,
    pub variance_a: f64,
    pub variance_b: f64,
    pub hr: HrReport,
    pub mp1_plus: f64,
    pub mp1_minus: f64,
    pub mp1_best: f64,
    pub mp2: f64,
    pub mp2_av: Option<f64>,
    pub m12a: f64,
    pub max_bound: f64,
    pub self_referential: bool,
    pub slacks: Slacks,
    pub scale: f64,
}

impl BoundSuite {
    /// Bounds whose slack is below `−VALIDITY_SLACK·scale`.
    pub fn violations(&self) -> Vec<(&'static str, f64)> {
        let floor = -tol::VALIDITY_SLACK * self.scale;
        let s = &self.slacks;
        [
            ("hr", s.hr),
            ("mp1_plus", s.mp1_plus),
            ("mp1_minus", s.mp1_minus),
            ("mp1_best", s.mp1_best),
            ("mp2", s.mp2),
            ("m12a", s.m12a),
        ]
        .into_iter()
        .filter(|&(_, slack)| slack < floor)
        .collect()
    }

    pub fn is_valid(&self) -> bool {
        self.violations().is_empty()
    }
}

pub fn bound_suite(a: &Observable, b: &Observable, phi: &StateVector) -> Result<BoundSuite> {
    check_dim(a.dim(), b.dim())?;
    check_dim(a.dim(), phi.dim())?;
    let scale = tol::pair_scale(a.matrix(), b.matrix());
    let ma = state::moments(a, phi)?;
    let mb = state::moments(b, phi)?;
    let lhs_sum = ma.variance + mb.variance;

    let hr = hr_bound(a, b, phi)?;
    let (mp1_plus, mp1_minus) = if phi.dim() >= 2 {
        (
            mp1_optimal(a, b, phi, Sign::Plus)?.rhs,
            mp1_optimal(a, b, phi, Sign::Minus)?.rhs,
        )
    } else {
        // no orthogonal complement: only the commutator term, which is zero
        (0.0, 0.0)
    };
    let mp1_best = mp1_plus.max(mp1_minus);
    let mp2 = mp2_bound(a, b, phi)?;
    let mp2_av = mp2_via_perp(a, b, phi)?;
    let m12a = m12a_rhs(a, b, phi)?;

    Ok(BoundSuite {
        lhs_sum,
        variance_a: ma.variance,
        variance_b: mb.variance,
        hr,
        mp1_plus,
        mp1_minus,
        mp1_best,
        mp2,
        mp2_av,
        m12a,
        max_bound: mp1_best.max(mp2),
        self_referential: ma.std_dev.min(mb.std_dev) <= tol::EIGEN_EPS * scale,
        slacks: Slacks {
            hr: hr.slack,
            mp1_plus: lhs_sum - mp1_plus,
            mp1_minus: lhs_sum - mp1_minus,
            mp1_best: lhs_sum - mp1_best,
            mp2: lhs_sum - mp2,
            m12a: lhs_sum - m12a,
        },
        scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn e0() -> StateVector {
        StateVector::basis(2, 0).unwrap()
    }

    fn e1() -> StateVector {
        StateVector::basis(2, 1).unwrap()
    }

    fn equator(theta: f64) -> StateVector {
        let h = 0.5f64.sqrt();
        StateVector::new(CVector::new(vec![C64::new(h, 0.0), C64::from_polar(h, theta)]).unwrap()).unwrap()
    }

    #[test]
    fn hr_examples() {
        let (x, y, z) = (Observable::pauli_x(), Observable::pauli_y(), Observable::pauli_z());
        let r = hr_bound(&x, &y, &e0()).unwrap();
        assert_eq!((r.lhs_product, r.rhs, r.slack), (1.0, 1.0, 0.0));
        let r = hr_bound(&x, &z, &e0()).unwrap();
        assert_eq!((r.lhs_product, r.rhs), (0.0, 0.0));
        let r = hr_bound(&x, &x, &e0()).unwrap();
        assert_eq!((r.lhs_product, r.rhs), (1.0, 0.0));
    }

    #[test]
    fn mp1_examples() {
        let (x, y) = (Observable::pauli_x(), Observable::pauli_y());
        let r = mp1_bound(&x, &y, &e0(), &e1(), Sign::Minus).unwrap();
        assert_eq!((r.commutator_term, r.overlap_term, r.rhs), (2.0, 0.0, 2.0));
        let r = mp1_bound(&x, &y, &e0(), &e1(), Sign::Plus).unwrap();
        assert_eq!((r.commutator_term, r.overlap_term, r.rhs), (-2.0, 4.0, 2.0));
    }

    #[test]
    fn mp1_rejects_non_orthogonal_perp() {
        let (x, y) = (Observable::pauli_x(), Observable::pauli_y());
        assert!(matches!(
            mp1_bound(&x, &y, &e0(), &equator(0.0), Sign::Plus),
            Err(Error::NotOrthogonal { .. })
        ));
    }

    #[test]
    fn mp1_at_eigenstate_with_generic_perp() {
        // B = σz eigenstate |0⟩; the only unit state orthogonal to it in C² is
        // |1⟩ up to phase, so the overlap factor is 1 for every choice.
        let (x, z) = (Observable::pauli_x(), Observable::pauli_z());
        let perp =
            StateVector::new(CVector::new(vec![C64::new(0.0, 0.0), C64::from_polar(1.0, 0.4)]).unwrap()).unwrap();
        let r = mp1_bound(&x, &z, &e0(), &perp, Sign::Plus).unwrap();
        assert_eq!(r.commutator_term, 0.0);
        assert!((r.overlap_term - 1.0).abs() < 1e-15);
    }

    #[test]
    fn mp1_optimal_examples() {
        let (x, y, z) = (Observable::pauli_x(), Observable::pauli_y(), Observable::pauli_z());
        for sign in [Sign::Plus, Sign::Minus] {
            let r = mp1_optimal(&x, &y, &e0(), sign).unwrap();
            assert!((r.rhs - 2.0).abs() < 1e-15);
        }
        // sign −: (σx + iσy)|0⟩ = 0, so the optimal overlap vanishes
        let r = mp1_optimal(&x, &y, &e0(), Sign::Minus).unwrap();
        assert!(r.degenerate_perp);
        assert_eq!(r.overlap_term, 0.0);

        let r = mp1_optimal(&x, &z, &e0(), Sign::Plus).unwrap();
        assert_eq!(r.perp_used, e1());
        assert_eq!(r.rhs, 1.0);
        assert!(!r.degenerate_perp);
    }

    #[test]
    fn mp1_optimal_needs_two_dimensions() {
        let one = Observable::identity(1);
        let phi = StateVector::basis(1, 0).unwrap();
        assert!(matches!(
            mp1_optimal(&one, &one, &phi, Sign::Plus),
            Err(Error::DimensionTooSmall { min: 2, found: 1 })
        ));
    }

    #[test]
    fn mp2_examples() {
        let (x, y, z) = (Observable::pauli_x(), Observable::pauli_y(), Observable::pauli_z());
        assert_eq!(mp2_bound(&x, &y, &e0()).unwrap(), 1.0);
        assert_eq!(mp2_bound(&x, &z, &e0()).unwrap(), 0.5);
        assert_eq!(mp2_via_perp(&x, &z, &e0()).unwrap(), Some(0.5));
        let minus_x = x.scaled(-1.0);
        assert_eq!(mp2_bound(&x, &minus_x, &equator(0.3)).unwrap(), 0.0);
        assert_eq!(mp2_via_perp(&x, &minus_x, &equator(0.3)).unwrap(), None);
    }

    #[test]
    fn m12a_examples() {
        let (x, y) = (Observable::pauli_x(), Observable::pauli_y());
        let phi = equator(FRAC_PI_4);
        assert!((m12a_rhs(&x, &y, &phi).unwrap() - 1.0).abs() < 1e-15);
        assert!(hr_bound(&x, &y, &phi).unwrap().rhs < 1e-15);
        assert_eq!(m12a_rhs(&x, &y, &e0()).unwrap(), 0.0);
        assert!(m12a_rhs(&x, &Observable::identity(2), &phi).unwrap() < 1e-15);
    }

    #[test]
    fn suite_examples() {
        let (x, y, z) = (Observable::pauli_x(), Observable::pauli_y(), Observable::pauli_z());
        let s = bound_suite(&x, &z, &e0()).unwrap();
        assert!(s.is_valid());
        assert!(s.self_referential);
        assert_eq!(s.max_bound, 1.0);
        assert_eq!(s.max_bound, s.variance_a);

        let s = bound_suite(&x, &y, &equator(FRAC_PI_4)).unwrap();
        assert!(s.hr.rhs < 1e-15);
        assert!((s.m12a - 1.0).abs() < 1e-15);
        assert!(!s.self_referential);

        let s = bound_suite(&z, &z, &e0()).unwrap();
        for v in [
            s.lhs_sum,
            s.hr.lhs_product,
            s.hr.rhs,
            s.mp1_best,
            s.mp2,
            s.m12a,
            s.max_bound,
        ] {
            assert_eq!(v, 0.0);
        }
    }

    #[test]
    fn sign_serializes_as_integer() {
        assert_eq!(serde_json::to_string(&Sign::Minus).unwrap(), "-1");
        assert_eq!(serde_json::from_str::<Sign>("1").unwrap(), Sign::Plus);
        assert!(serde_json::from_str::<Sign>("0").is_err());
    }
}
