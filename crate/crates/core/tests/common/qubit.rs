//! Brute-force 2×2 arithmetic on plain `(re, im)` tuples.
//!
//! Deliberately shares no code with the library: every quantity is expanded
//! by hand from its textbook definition (moments via `⟨F²⟩ − ⟨F⟩²`,
//! correlation via `⟨AB⟩ − ⟨A⟩⟨B⟩`, the unique qubit perpendicular state
//! `(−φ₁*, φ₀*)`).
#![allow(dead_code)]

pub type Cx = (f64, f64);
pub type Mat = [[Cx; 2]; 2];
pub type Ket = [Cx; 2];

pub fn add(a: Cx, b: Cx) -> Cx {
    (a.0 + b.0, a.1 + b.1)
}

pub fn mul(a: Cx, b: Cx) -> Cx {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

pub fn conj(a: Cx) -> Cx {
    (a.0, -a.1)
}

pub fn abs2(a: Cx) -> f64 {
    a.0 * a.0 + a.1 * a.1
}

pub const X: Mat = [[(0.0, 0.0), (1.0, 0.0)], [(1.0, 0.0), (0.0, 0.0)]];
pub const Y: Mat = [[(0.0, 0.0), (0.0, -1.0)], [(0.0, 1.0), (0.0, 0.0)]];
pub const Z: Mat = [[(1.0, 0.0), (0.0, 0.0)], [(0.0, 0.0), (-1.0, 0.0)]];

pub fn mat_add(a: &Mat, b: &Mat) -> Mat {
    let mut m = [[(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = add(a[i][j], b[i][j]);
        }
    }
    m
}

pub fn mat_scale(a: &Mat, s: Cx) -> Mat {
    let mut m = [[(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = mul(a[i][j], s);
        }
    }
    m
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let mut m = [[(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = add(mul(a[i][0], b[0][j]), mul(a[i][1], b[1][j]));
        }
    }
    m
}

/// `⟨u|M|v⟩`.
pub fn braket(u: &Ket, m: &Mat, v: &Ket) -> Cx {
    let mv = [
        add(mul(m[0][0], v[0]), mul(m[0][1], v[1])),
        add(mul(m[1][0], v[0]), mul(m[1][1], v[1])),
    ];
    add(mul(conj(u[0]), mv[0]), mul(conj(u[1]), mv[1]))
}

pub fn expect(m: &Mat, v: &Ket) -> f64 {
    braket(v, m, v).0
}

pub fn variance(m: &Mat, v: &Ket) -> f64 {
    let mean = expect(m, v);
    expect(&mat_mul(m, m), v) - mean * mean
}

pub fn commutator(a: &Mat, b: &Mat) -> Mat {
    mat_add(&mat_mul(a, b), &mat_scale(&mat_mul(b, a), (-1.0, 0.0)))
}

/// `⟨[A,B]⟩`.
pub fn comm_expect(a: &Mat, b: &Mat, v: &Ket) -> Cx {
    braket(v, &commutator(a, b), v)
}

/// `⟨δA δB⟩ = ⟨AB⟩ − ⟨A⟩⟨B⟩`.
pub fn corr(a: &Mat, b: &Mat, v: &Ket) -> Cx {
    let ab = braket(v, &mat_mul(a, b), v);
    (ab.0 - expect(a, v) * expect(b, v), ab.1)
}

pub fn perp(v: &Ket) -> Ket {
    [mul((-1.0, 0.0), conj(v[1])), conj(v[0])]
}

pub fn hr_rhs(a: &Mat, b: &Mat, v: &Ket) -> f64 {
    0.5 * abs2(comm_expect(a, b, v)).sqrt()
}

pub fn mp2(a: &Mat, b: &Mat, v: &Ket) -> f64 {
    0.5 * variance(&mat_add(a, b), v)
}

pub fn m12a(a: &Mat, b: &Mat, v: &Ket) -> f64 {
    2.0 * corr(a, b, v).0.abs()
}

/// First sum bound at the (unique up to phase) qubit perpendicular state.
pub fn mp1(a: &Mat, b: &Mat, v: &Ket, sign: f64) -> f64 {
    let ce = comm_expect(a, b, v);
    let commutator_term = mul((0.0, sign), ce).0;
    let op = mat_add(a, &mat_scale(b, (0.0, sign)));
    commutator_term + abs2(braket(v, &op, &perp(v)))
}
