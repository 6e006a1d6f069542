//! Pure states, observables and their moments.

use serde::{Deserialize, Serialize};

use crate::linalg::{self, check_hermitian, inner, CMatrix, CVector, C64};
use crate::{tol, Error, Result};

/// A unit-norm state `|φ⟩`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CVector", into = "CVector")]
pub struct StateVector {
    vec: CVector,
}

impl StateVector {
    /// Wrap a vector that is already unit norm to within [`tol::UNIT_NORM`].
    pub fn new(vec: CVector) -> Result<Self> {
        let n = linalg::norm(&vec);
        if (n - 1.0).abs() > tol::UNIT_NORM {
            return Err(Error::NotUnitNorm { norm: n });
        }
        Ok(Self { vec })
    }

    /// Normalize `vec` and wrap it.
    pub fn normalized(vec: &CVector) -> Result<Self> {
        Ok(Self {
            vec: linalg::normalize(vec, tol::UNIT_NORM)?,
        })
    }

    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        Ok(Self {
            vec: CVector::basis(dim, index)?,
        })
    }

    pub fn dim(&self) -> usize {
        self.vec.dim()
    }

    pub fn as_vector(&self) -> &CVector {
        &self.vec
    }

    pub fn into_vector(self) -> CVector {
        self.vec
    }
}

impl TryFrom<CVector> for StateVector {
    type Error = Error;

    fn try_from(vec: CVector) -> Result<Self> {
        Self::new(vec)
    }
}

impl From<StateVector> for CVector {
    fn from(s: StateVector) -> Self {
        s.vec
    }
}

/// A Hermitian operator.
///
/// Construction accepts matrices that are Hermitian to within
/// [`tol::HERMITIAN`] and stores the exactly Hermitian part `(M + M†)/2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CMatrix", into = "CMatrix")]
pub struct Observable {
    mat: CMatrix,
}

impl Observable {
    pub fn new(mat: CMatrix) -> Result<Self> {
        check_hermitian(&mat, tol::HERMITIAN)?;
        let mat = mat.add(&mat.adjoint()).scaled(C64::new(0.5, 0.0));
        Ok(Self { mat })
    }

    pub fn pauli_x() -> Self {
        Self {
            mat: CMatrix::pauli_x(),
        }
    }

    pub fn pauli_y() -> Self {
        Self {
            mat: CMatrix::pauli_y(),
        }
    }

    pub fn pauli_z() -> Self {
        Self {
            mat: CMatrix::pauli_z(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: CMatrix::identity(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    /// `A + B`.
    pub fn sum(&self, other: &Observable) -> Result<Observable> {
        check_dim(self.dim(), other.dim())?;
        Ok(Self {
            mat: self.mat.add(&other.mat),
        })
    }

    /// `c·F` for real `c`.
    pub fn scaled(&self, c: f64) -> Observable {
        Self {
            mat: self.mat.scaled(C64::new(c, 0.0)),
        }
    }

    /// `F + c·I` for real `c`.
    pub fn shifted(&self, c: f64) -> Observable {
        Self {
            mat: self.mat.add(&CMatrix::identity(self.dim()).scaled(C64::new(c, 0.0))),
        }
    }
}

impl TryFrom<CMatrix> for Observable {
    type Error = Error;

    fn try_from(mat: CMatrix) -> Result<Self> {
        Self::new(mat)
    }
}

impl From<Observable> for CMatrix {
    fn from(o: Observable) -> Self {
        o.mat
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub mean: f64,
    pub variance: f64,
    pub std_dev: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    /// `⟨φ|δA δB|φ⟩`.
    pub corr: C64,
    pub re_part: f64,
    pub im_part: f64,
    /// `⟨φ|[A,B]|φ⟩`, purely imaginary.
    pub commutator_expectation: C64,
}

/// `⟨F⟩_φ`.
pub fn expectation(f: &Observable, phi: &StateVector) -> Result<f64> {
    check_dim(f.dim(), phi.dim())?;
    let z = inner(phi.as_vector(), &f.mat.apply_unchecked(phi.as_vector()))?;
    if z.im.abs() > tol::IDENTITY * tol::op_scale(&f.mat) {
        return Err(Error::Consistency(format!(
            "expectation of a Hermitian operator has imaginary part {:e}",
            z.im
        )));
    }
    Ok(z.re)
}

/// `δ_φF|φ⟩ = F|φ⟩ − ⟨F⟩_φ|φ⟩`.
pub fn deviation_apply(f: &Observable, phi: &StateVector) -> Result<CVector> {
    let mean = expectation(f, phi)?;
    Ok(deviation_with_mean(f, phi, mean))
}

fn deviation_with_mean(f: &Observable, phi: &StateVector, mean: f64) -> CVector {
    f.mat
        .apply_unchecked(phi.as_vector())
        .add_scaled(C64::new(-mean, 0.0), phi.as_vector())
}

/// Mean, variance and standard deviation, with the variance taken as
/// `‖δ_φF|φ⟩‖²` so it stays accurate near eigenstates.
pub fn moments(f: &Observable, phi: &StateVector) -> Result<MomentReport> {
    let mean = expectation(f, phi)?;
    let variance = deviation_with_mean(f, phi, mean).norm_sqr();
    Ok(MomentReport {
        mean,
        variance,
        std_dev: variance.sqrt(),
    })
}

/// `⟨F²⟩_φ − ⟨F⟩²_φ`, the cancellation-prone route kept for cross-checks.
pub fn variance_by_moments(f: &Observable, phi: &StateVector) -> Result<f64> {
    let mean = expectation(f, phi)?;
    let second = f.mat.apply_unchecked(phi.as_vector()).norm_sqr();
    Ok(second - mean * mean)
}

/// `[A, B] = AB − BA`.
pub fn commutator(a: &Observable, b: &Observable) -> Result<CMatrix> {
    check_dim(a.dim(), b.dim())?;
    Ok(a.mat.matmul(&b.mat).sub(&b.mat.matmul(&a.mat)))
}

/// `⟨φ|[A,B]|φ⟩` from the commutator matrix.
pub fn commutator_expectation(a: &Observable, b: &Observable, phi: &StateVector) -> Result<C64> {
    check_dim(a.dim(), phi.dim())?;
    let c = commutator(a, b)?;
    inner(phi.as_vector(), &c.apply_unchecked(phi.as_vector()))
}

/// The mixed correlation `⟨φ|δA δB|φ⟩` together with `⟨[A,B]⟩_φ`.
///
/// The commutator expectation is computed independently from `AB − BA` and
/// must equal `2i·Im⟨δA δB⟩` to within [`tol::IDENTITY`] times the pair scale.
pub fn correlation(a: &Observable, b: &Observable, phi: &StateVector) -> Result<CorrelationReport> {
    check_dim(a.dim(), b.dim())?;
    let da = deviation_apply(a, phi)?;
    let db = deviation_apply(b, phi)?;
    let corr = inner(&da, &db)?;
    let commutator_expectation = commutator_expectation(a, b, phi)?;

    let limit = tol::IDENTITY * tol::pair_scale(&a.mat, &b.mat);
    if commutator_expectation.re.abs() > limit {
        return Err(Error::Consistency(format!(
            "commutator expectation has real part {:e}",
            commutator_expectation.re
        )));
    }
    let mismatch = (commutator_expectation - C64::new(0.0, 2.0 * corr.im)).norm();
    if mismatch > limit {
        return Err(Error::Consistency(format!(
            "<[A,B]> differs from 2i Im<dA dB> by {mismatch:e}"
        )));
    }
    Ok(CorrelationReport {
        corr,
        re_part: corr.re,
        im_part: corr.im,
        commutator_expectation,
    })
}
