//! Dense complex vectors and square matrices for small dimensions.
//!
//! Inner products are conjugate-linear in the first (bra) argument, so
//! `inner(u, v)` reads as `⟨u|v⟩`. Matrices are stored row-major.
//!
//! Vectors serialize as arrays of `[re, im]` pairs and matrices as arrays of
//! such rows.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub type C64 = num_complex::Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

fn check_finite(entries: &[C64]) -> Result<()> {
    match entries.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<C64>", into = "Vec<C64>")]
pub struct CVector {
    entries: Vec<C64>,
}

impl CVector {
    pub fn new(entries: Vec<C64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::DimensionTooSmall { min: 1, found: 0 });
        }
        check_finite(&entries)?;
        Ok(Self { entries })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "vector dimension must be positive");
        Self {
            entries: vec![ZERO; dim],
        }
    }

    /// Standard basis vector `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, dim });
        }
        let mut v = Self::zeros(dim);
        v.entries[index] = ONE;
        Ok(v)
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<C64> {
        self.entries
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Multiply every entry by `factor`.
    pub fn scaled(&self, factor: C64) -> Self {
        Self {
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    /// `self + factor·other`. Panics on dimension mismatch.
    pub fn add_scaled(&self, factor: C64, other: &CVector) -> Self {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch in add_scaled");
        Self {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + factor * b)
                .collect(),
        }
    }

    pub fn add(&self, other: &CVector) -> Self {
        self.add_scaled(ONE, other)
    }

    pub fn sub(&self, other: &CVector) -> Self {
        self.add_scaled(-ONE, other)
    }
}

impl TryFrom<Vec<C64>> for CVector {
    type Error = Error;

    fn try_from(entries: Vec<C64>) -> Result<Self> {
        Self::new(entries)
    }
}

impl From<CVector> for Vec<C64> {
    fn from(v: CVector) -> Self {
        v.entries
    }
}

/// `⟨u|v⟩`, conjugate-linear in `u`.
pub fn inner(u: &CVector, v: &CVector) -> Result<C64> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            found: v.dim(),
        });
    }
    Ok(u.entries.iter().zip(&v.entries).map(|(a, b)| a.conj() * b).sum())
}

pub fn norm(v: &CVector) -> f64 {
    v.norm_sqr().sqrt()
}

/// Rescale `v` to unit norm; fails when `‖v‖ ≤ tol`.
pub fn normalize(v: &CVector, tol: f64) -> Result<CVector> {
    let n = norm(v);
    if n.is_nan() || n <= tol {
        return Err(Error::DegenerateDirection { norm: n });
    }
    Ok(v.scaled(C64::new(1.0 / n, 0.0)))
}

/// Component of `v` orthogonal to the unit vector `phi`: `v − ⟨φ|v⟩·φ`.
pub fn project_orthogonal(v: &CVector, phi: &CVector) -> Result<CVector> {
    let overlap = inner(phi, v)?;
    Ok(v.add_scaled(-overlap, phi))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<C64>>", into = "Vec<Vec<C64>>")]
pub struct CMatrix {
    dim: usize,
    entries: Vec<C64>,
}

impl CMatrix {
    /// Build from row-major entries; `entries.len()` must be a positive square.
    pub fn new(dim: usize, entries: Vec<C64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionTooSmall { min: 1, found: 0 });
        }
        if entries.len() != dim * dim {
            return Err(Error::NotSquare {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        check_finite(&entries)?;
        Ok(Self { dim, entries })
    }

    pub fn from_rows(rows: Vec<Vec<C64>>) -> Result<Self> {
        let dim = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::NotSquare {
                expected: dim,
                found: bad.len(),
            });
        }
        Self::new(dim, rows.into_iter().flatten().collect())
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be positive");
        Self {
            dim,
            entries: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = ONE;
        }
        m
    }

    pub fn diag(values: &[f64]) -> Result<Self> {
        let dim = values.len();
        if dim == 0 {
            return Err(Error::DimensionTooSmall { min: 1, found: 0 });
        }
        let mut m = Self::zeros(dim);
        for (i, &x) in values.iter().enumerate() {
            m.entries[i * dim + i] = C64::new(x, 0.0);
        }
        check_finite(&m.entries)?;
        Ok(m)
    }

    pub fn pauli_x() -> Self {
        Self::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).expect("valid literal")
    }

    pub fn pauli_y() -> Self {
        Self::new(2, vec![ZERO, C64::new(0.0, -1.0), C64::new(0.0, 1.0), ZERO]).expect("valid literal")
    }

    pub fn pauli_z() -> Self {
        Self::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]).expect("valid literal")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: C64) {
        self.entries[row * self.dim + col] = value;
    }

    pub fn rows(&self) -> Vec<Vec<C64>> {
        self.entries.chunks(self.dim).map(<[C64]>::to_vec).collect()
    }

    pub fn column(&self, col: usize) -> CVector {
        CVector {
            entries: (0..self.dim).map(|r| self.get(r, col)).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for j in 0..d {
                out.entries[j * d + i] = self.entries[i * d + j].conj();
            }
        }
        out
    }

    fn zip_with(&self, other: &CMatrix, f: impl Fn(C64, C64) -> C64) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    /// Entrywise sum. Panics on dimension mismatch.
    pub fn add(&self, other: &CMatrix) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    /// Entrywise difference. Panics on dimension mismatch.
    pub fn sub(&self, other: &CMatrix) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    /// Matrix product. Panics on dimension mismatch.
    pub fn matmul(&self, other: &CMatrix) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in matmul");
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.entries[i * d + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..d {
                    out.entries[i * d + j] += a * other.entries[k * d + j];
                }
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Induced infinity norm: maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        self.entries
            .chunks(self.dim)
            .map(|row| row.iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub(crate) fn apply_unchecked(&self, v: &CVector) -> CVector {
        CVector {
            entries: self
                .entries
                .chunks(self.dim)
                .map(|row| row.iter().zip(&v.entries).map(|(a, b)| a * b).sum())
                .collect(),
        }
    }
}

impl TryFrom<Vec<Vec<C64>>> for CMatrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<C64>>) -> Result<Self> {
        Self::from_rows(rows)
    }
}

impl From<CMatrix> for Vec<Vec<C64>> {
    fn from(m: CMatrix) -> Self {
        m.rows()
    }
}

/// `M·v`.
pub fn apply(m: &CMatrix, v: &CVector) -> Result<CVector> {
    if m.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            found: v.dim(),
        });
    }
    Ok(m.apply_unchecked(v))
}

/// Largest entry of `M − M†` and its position.
fn hermitian_defect(m: &CMatrix) -> (f64, usize, usize) {
    let d = m.dim();
    let mut worst = (0.0, 0, 0);
    for i in 0..d {
        for j in i..d {
            let dev = (m.get(i, j) - m.get(j, i).conj()).norm();
            if dev > worst.0 {
                worst = (dev, i, j);
            }
        }
    }
    worst
}

/// True iff `max|M − M†| ≤ tol·(1 + max|M|)`.
pub fn is_hermitian(m: &CMatrix, tol: f64) -> bool {
    hermitian_defect(m).0 <= tol * (1.0 + m.max_abs())
}

/// Like [`is_hermitian`] but reports the worst offending entry.
pub fn check_hermitian(m: &CMatrix, tol: f64) -> Result<()> {
    let (deviation, row, col) = hermitian_defect(m);
    if deviation <= tol * (1.0 + m.max_abs()) {
        Ok(())
    } else {
        Err(Error::NotHermitian { row, col, deviation })
    }
}

/// Eigenvalues in ascending order with matching orthonormal eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigensystem {
    pub values: Vec<f64>,
    pub vectors: Vec<CVector>,
}

impl Eigensystem {
    /// True when another eigenvalue lies within `tol` of `values[index]`.
    pub fn is_degenerate(&self, index: usize, tol: f64) -> bool {
        let x = self.values[index];
        self.values
            .iter()
            .enumerate()
            .any(|(k, &y)| k != index && (x - y).abs() <= tol)
    }
}

const MAX_SWEEPS: usize = 100;

/// Diagonalize a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Each rotation first removes the phase of the pivot `a_pq` and then
/// applies a real Givens rotation, so the working matrix stays Hermitian.
/// Sweeps continue until the off-diagonal Frobenius mass drops to rounding
/// level. Ties in the sorted spectrum keep the solver's output order.
pub fn hermitian_eigensystem(m: &CMatrix, tol: f64) -> Result<Eigensystem> {
    check_hermitian(m, tol)?;
    let d = m.dim();
    // exact Hermitian copy
    let mut a = m.add(&m.adjoint()).scaled(C64::new(0.5, 0.0));
    let mut v = CMatrix::identity(d);
    let total = a.frobenius();
    let threshold = f64::EPSILON * total;

    let off_diagonal = |a: &CMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    s += a.get(i, j).norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while off_diagonal(&a) > threshold {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps });
        }
        sweeps += 1;
        for p in 0..d {
            for q in (p + 1)..d {
                let apq = a.get(p, q);
                let r = apq.norm();
                if r == 0.0 || r <= f64::EPSILON * 1e-3 * total {
                    a.set(p, q, ZERO);
                    a.set(q, p, ZERO);
                    continue;
                }
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let theta = (aqq - app) / (2.0 * r);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let phase = apq.conj() / r; // e^{-iφ}
                                            // U restricted to (p, q): [[c, s], [-s·e^{-iφ}, c·e^{-iφ}]]
                let u_pp = C64::new(c, 0.0);
                let u_pq = C64::new(s, 0.0);
                let u_qp = phase * (-s);
                let u_qq = phase * c;

                // A ← A·U
                for k in 0..d {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, akp * u_pp + akq * u_qp);
                    a.set(k, q, akp * u_pq + akq * u_qq);
                }
                // A ← U†·A
                for k in 0..d {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, u_pp.conj() * apk + u_qp.conj() * aqk);
                    a.set(q, k, u_pq.conj() * apk + u_qq.conj() * aqk);
                }
                a.set(p, q, ZERO);
                a.set(q, p, ZERO);
                a.set(p, p, C64::new(a.get(p, p).re, 0.0));
                a.set(q, q, C64::new(a.get(q, q).re, 0.0));
                // V ← V·U
                for k in 0..d {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, vkp * u_pp + vkq * u_qp);
                    v.set(k, q, vkp * u_pq + vkq * u_qq);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| a.get(i, i).re.total_cmp(&a.get(j, j).re));
    Ok(Eigensystem {
        values: order.iter().map(|&i| a.get(i, i).re).collect(),
        vectors: order.iter().map(|&i| v.column(i)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn assert_vec_close(u: &CVector, expected: &[C64], tol: f64) {
        assert_eq!(u.dim(), expected.len());
        for (a, b) in u.entries().iter().zip(expected) {
            assert!((a - b).norm() <= tol, "{a} vs {b}");
        }
    }

    #[test]
    fn inner_examples() {
        let e0 = CVector::basis(2, 0).unwrap();
        let e1 = CVector::basis(2, 1).unwrap();
        assert_eq!(inner(&e0, &e1).unwrap(), ZERO);

        let v = CVector::new(vec![ZERO, c(0.0, 1.0)]).unwrap();
        assert_eq!(inner(&v, &v).unwrap(), ONE);

        let h = 0.5f64.sqrt();
        let plus = CVector::from_real(&[h, h]).unwrap();
        let minus = CVector::from_real(&[h, -h]).unwrap();
        assert!(inner(&plus, &minus).unwrap().norm() < 1e-15);
    }

    #[test]
    fn inner_is_conjugate_linear_in_bra() {
        let u = CVector::new(vec![c(1.0, 2.0), c(0.0, -1.0)]).unwrap();
        let v = CVector::new(vec![c(0.5, 0.0), c(3.0, 1.0)]).unwrap();
        let i = c(0.0, 1.0);
        let lhs = inner(&u.scaled(i), &v).unwrap();
        let rhs = -i * inner(&u, &v).unwrap();
        assert!((lhs - rhs).norm() < 1e-14);
    }

    #[test]
    fn inner_dimension_mismatch() {
        let u = CVector::zeros(2);
        let v = CVector::zeros(3);
        assert_eq!(inner(&u, &v), Err(Error::DimensionMismatch { expected: 2, found: 3 }));
        assert!(apply(&CMatrix::identity(3), &u).is_err());
    }

    #[test]
    fn apply_examples() {
        let v = CVector::new(vec![c(0.3, -1.0), c(2.0, 0.5)]).unwrap();
        assert_eq!(apply(&CMatrix::identity(2), &v).unwrap(), v);
        let e0 = CVector::basis(2, 0).unwrap();
        assert_eq!(apply(&CMatrix::pauli_x(), &e0).unwrap(), CVector::basis(2, 1).unwrap());
        assert_eq!(apply(&CMatrix::zeros(2), &v).unwrap(), CVector::zeros(2));
    }

    #[test]
    fn hermiticity_examples() {
        assert!(is_hermitian(&CMatrix::pauli_y(), 1e-10));
        let upper = CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(!is_hermitian(&upper, 1e-10));

        let tol = 1e-10;
        let mut perturbed = CMatrix::pauli_x();
        perturbed.set(0, 1, perturbed.get(0, 1) + 10.0 * tol);
        assert!(!is_hermitian(&perturbed, tol));
        assert_eq!(
            check_hermitian(&upper, tol),
            Err(Error::NotHermitian {
                row: 0,
                col: 1,
                deviation: 1.0
            })
        );
    }

    #[test]
    fn eigensystem_pauli_z() {
        let es = hermitian_eigensystem(&CMatrix::pauli_z(), 1e-10).unwrap();
        assert_eq!(es.values, vec![-1.0, 1.0]);
        assert_vec_close(&es.vectors[0], &[ZERO, ONE], 0.0);
        assert_vec_close(&es.vectors[1], &[ONE, ZERO], 0.0);
    }

    #[test]
    fn eigensystem_degenerate_identity() {
        let es = hermitian_eigensystem(&CMatrix::identity(3), 1e-10).unwrap();
        assert_eq!(es.values, vec![1.0; 3]);
        for i in 0..3 {
            for j in 0..3 {
                let g = inner(&es.vectors[i], &es.vectors[j]).unwrap();
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((g - c(expected, 0.0)).norm() < 1e-12);
            }
        }
        assert!(es.is_degenerate(1, 1e-12));
    }

    #[test]
    fn eigensystem_diagonal_sorts() {
        let es = hermitian_eigensystem(&CMatrix::diag(&[3.0, 1.0, 2.0]).unwrap(), 1e-10).unwrap();
        assert_eq!(es.values, vec![1.0, 2.0, 3.0]);
        assert_eq!(es.vectors[0], CVector::basis(3, 1).unwrap());
        assert_eq!(es.vectors[1], CVector::basis(3, 2).unwrap());
        assert_eq!(es.vectors[2], CVector::basis(3, 0).unwrap());
    }

    #[test]
    fn eigensystem_complex_2x2_against_characteristic_polynomial() {
        // [[1, 2-i], [2+i, -3]]: λ = -1 ± √(4 + 5) = -1 ± 3
        let m = CMatrix::new(2, vec![c(1.0, 0.0), c(2.0, -1.0), c(2.0, 1.0), c(-3.0, 0.0)]).unwrap();
        let es = hermitian_eigensystem(&m, 1e-10).unwrap();
        assert!((es.values[0] + 4.0).abs() < 1e-13);
        assert!((es.values[1] - 2.0).abs() < 1e-13);
        for (lambda, vec) in es.values.iter().zip(&es.vectors) {
            let r = apply(&m, vec).unwrap().sub(&vec.scaled(c(*lambda, 0.0)));
            assert!(norm(&r) < 1e-13);
        }
    }

    #[test]
    fn eigensystem_rejects_non_hermitian() {
        let upper = CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(
            hermitian_eigensystem(&upper, 1e-10),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn projection_examples() {
        let e0 = CVector::basis(2, 0).unwrap();
        let e1 = CVector::basis(2, 1).unwrap();
        assert_eq!(project_orthogonal(&e0, &e0).unwrap(), CVector::zeros(2));
        assert_eq!(project_orthogonal(&e1, &e0).unwrap(), e1);
        let h = 0.5f64.sqrt();
        let plus = CVector::from_real(&[h, h]).unwrap();
        assert_vec_close(&project_orthogonal(&plus, &e0).unwrap(), &[ZERO, c(h, 0.0)], 1e-16);
    }

    #[test]
    fn norm_and_normalize() {
        let v = CVector::new(vec![c(3.0, 0.0), c(0.0, 4.0)]).unwrap();
        assert_eq!(norm(&v), 5.0);
        assert_eq!(
            normalize(&CVector::from_real(&[2.0, 0.0]).unwrap(), 1e-12).unwrap(),
            CVector::basis(2, 0).unwrap()
        );
        assert_eq!(
            normalize(&CVector::zeros(2), 1e-12),
            Err(Error::DegenerateDirection { norm: 0.0 })
        );
    }

    #[test]
    fn constructors_reject_bad_input() {
        assert_eq!(CVector::new(vec![]), Err(Error::DimensionTooSmall { min: 1, found: 0 }));
        assert_eq!(
            CVector::new(vec![ONE, c(f64::NAN, 0.0)]),
            Err(Error::NonFinite { index: 1 })
        );
        assert!(matches!(
            CMatrix::from_rows(vec![vec![ONE, ZERO], vec![ONE]]),
            Err(Error::NotSquare { .. })
        ));
        assert!(matches!(
            CMatrix::new(2, vec![ONE, ZERO, ZERO, c(0.0, f64::INFINITY)]),
            Err(Error::NonFinite { index: 3 })
        ));
    }

    #[test]
    fn json_encoding() {
        let m = CMatrix::pauli_y();
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(text, "[[[0.0,0.0],[0.0,-1.0]],[[0.0,1.0],[0.0,0.0]]]");
        let back: CMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
        let bad: std::result::Result<CMatrix, _> = serde_json::from_str("[[[1,0]],[[0,0]]]");
        assert!(bad.is_err());
    }
}
