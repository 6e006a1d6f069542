//! Executable versions of the two analyses of the sum-of-variances bounds.
//!
//! [`eigenstate_scenario`] evaluates every bound at an eigenvector `ψ_b` of
//! `B` and checks that each collapses to a restatement of `(ΔA)²`:
//! `mp1 = overlap²·(ΔA)²`, `mp2 = ½(ΔA)²`, `hr = 0`.
//!
//! [`counterexample_scenario`] checks a state where `⟨[A,B]⟩_φ = 0` although
//! `φ` is an eigenstate of neither observable, so the product bound is silent
//! while `2|Re⟨δA δB⟩|` is not. [`counterexample_search`] looks for such
//! states.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::av::av_decompose;
use crate::bounds::{self, Sign};
use crate::linalg::{self, hermitian_eigensystem, inner, CMatrix, CVector, C64};
use crate::sampler::{haar_state, Stream};
use crate::state::{self, check_dim, Observable, StateVector};
use crate::{tol, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expected {
    /// `|computed − value| ≤ tolerance`.
    Equals(f64),
    /// `computed ≤ value + tolerance`.
    AtMost(f64),
    /// `computed > value`.
    GreaterThan(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub label: String,
    pub computed: f64,
    pub expected: Expected,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(label: impl Into<String>, computed: f64, expected: Expected, tolerance: f64) -> Self {
        let pass = match expected {
            Expected::Equals(v) => (computed - v).abs() <= tolerance,
            Expected::AtMost(v) => computed <= v + tolerance,
            Expected::GreaterThan(v) => computed > v,
        };
        Self {
            label: label.into(),
            computed,
            expected,
            tolerance,
            pass,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioResult {
    pub name: String,
    pub checks: Vec<Check>,
    pub verdict: bool,
    pub warnings: Vec<String>,
    pub summary: String,
    pub values: BTreeMap<String, f64>,
}

impl ScenarioResult {
    fn new(
        name: &str,
        checks: Vec<Check>,
        warnings: Vec<String>,
        summary: String,
        values: BTreeMap<String, f64>,
    ) -> Self {
        Self {
            name: name.to_string(),
            verdict: checks.iter().all(|c| c.pass),
            checks,
            warnings,
            summary,
            values,
        }
    }

    pub fn check(&self, label_prefix: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.label.starts_with(label_prefix))
    }
}

/// Fails with [`Error::CommutingPair`] unless `‖[A,B]‖∞` exceeds
/// [`tol::COMMUTATOR_NONZERO`].
pub fn require_noncommuting(a: &Observable, b: &Observable) -> Result<CMatrix> {
    let c = state::commutator(a, b)?;
    if c.norm_inf() > tol::COMMUTATOR_NONZERO {
        Ok(c)
    } else {
        Err(Error::CommutingPair)
    }
}

pub fn eigenstate_scenario(a: &Observable, b: &Observable, eig_index: usize) -> Result<ScenarioResult> {
    eigenstate_scenario_with_perp(a, b, eig_index, None)
}

/// Same as [`eigenstate_scenario`], but evaluates the first sum bound at a
/// caller-chosen `ψ_b⊥` instead of the overlap-maximizing one. The perp
/// state must be orthogonal to the selected eigenvector.
pub fn eigenstate_scenario_with_perp(
    a: &Observable,
    b: &Observable,
    eig_index: usize,
    perp: Option<&StateVector>,
) -> Result<ScenarioResult> {
    check_dim(a.dim(), b.dim())?;
    require_noncommuting(a, b)?;
    let scale = tol::pair_scale(a.matrix(), b.matrix());
    let check_tol = tol::VALIDITY_SLACK * scale;
    let eig = hermitian_eigensystem(b.matrix(), tol::HERMITIAN)?;
    let vec = eig.vectors.get(eig_index).ok_or(Error::IndexOutOfRange {
        index: eig_index,
        dim: b.dim(),
    })?;
    let psi_b = StateVector::normalized(vec)?;
    let mut warnings = Vec::new();
    if eig.is_degenerate(eig_index, tol::IDENTITY * tol::op_scale(b.matrix())) {
        warnings.push(format!(
            "eigenvalue {} of B is degenerate; the eigenvector is one basis choice within its eigenspace",
            eig.values[eig_index]
        ));
    }

    let mb = state::moments(b, &psi_b)?;
    let ma = state::moments(a, &psi_b)?;
    let ce = state::commutator_expectation(a, b, &psi_b)?;

    let mp1 = match perp {
        Some(p) => bounds::mp1_bound(a, b, &psi_b, p, Sign::Plus)?,
        None => bounds::mp1_optimal(a, b, &psi_b, Sign::Plus)?,
    };
    let psi_perp = &mp1.perp_used;
    let b_elem = inner(psi_b.as_vector(), &linalg::apply(b.matrix(), psi_perp.as_vector())?)?;
    let a_elem = inner(psi_b.as_vector(), &linalg::apply(a.matrix(), psi_perp.as_vector())?)?;

    let av_a = av_decompose(a, &psi_b, tol::EIGEN_EPS)?;
    let overlap = match &av_a.perp_state {
        Some(pa) => inner(pa.as_vector(), psi_perp.as_vector())?.norm(),
        None => {
            warnings.push("the selected eigenvector of B is also an eigenvector of A".to_string());
            0.0
        }
    };
    let sum_dev = state::moments(&a.sum(b)?, &psi_b)?.std_dev;
    let mp2 = bounds::mp2_bound(a, b, &psi_b)?;
    let hr = bounds::hr_bound(a, b, &psi_b)?;

    let var_a = ma.variance;
    let checks = vec![
        Check::new(
            "c1: Delta B = 0 and <[A,B]> = 0 at the eigenstate",
            mb.std_dev.max(ce.norm()),
            Expected::Equals(0.0),
            check_tol,
        ),
        Check::new(
            "c2: <psi_b|B|psi_b_perp> = 0",
            b_elem.norm(),
            Expected::Equals(0.0),
            check_tol,
        ),
        Check::new(
            "c3: |<psi_b|A|psi_b_perp>| = Delta A * |<psi_bA_perp|psi_b_perp>|",
            a_elem.norm(),
            Expected::Equals(ma.std_dev * overlap),
            check_tol,
        ),
        Check::new(
            "c4: |<psi_bA_perp|psi_b_perp>| <= 1",
            overlap,
            Expected::AtMost(1.0),
            check_tol,
        ),
        Check::new(
            "c5: Delta(A+B) = Delta A",
            sum_dev,
            Expected::Equals(ma.std_dev),
            check_tol,
        ),
        Check::new(
            "c6: mp2 = (Delta A)^2 / 2",
            mp2,
            Expected::Equals(0.5 * var_a),
            check_tol,
        ),
        Check::new(
            "c7: mp1 rhs = overlap^2 * (Delta A)^2",
            mp1.rhs,
            Expected::Equals(overlap * overlap * var_a),
            check_tol,
        ),
        Check::new("c8: hr rhs = 0", hr.rhs, Expected::Equals(0.0), check_tol),
    ];

    let overlap_factor = overlap * overlap;
    let summary = format!(
        "at the eigenstate every bound restates the left side: \
         mp1 gives (dA)^2 >= {overlap_factor:.6}*(dA)^2, mp2 gives (dA)^2 >= 0.5*(dA)^2, \
         hr gives dA*0 >= 0; the only content is (dA)^2 >= 0 (dA = {:.6}, positive: {})",
        ma.std_dev,
        ma.std_dev > tol::EIGEN_EPS
    );
    let values = BTreeMap::from([
        ("eigenvalue".to_string(), eig.values[eig_index]),
        ("delta_a".to_string(), ma.std_dev),
        ("delta_b".to_string(), mb.std_dev),
        ("lhs_sum".to_string(), var_a + mb.variance),
        ("overlap_factor".to_string(), overlap_factor),
        ("mp1_rhs".to_string(), mp1.rhs),
        ("mp2".to_string(), mp2),
        ("hr_rhs".to_string(), hr.rhs),
    ]);
    Ok(ScenarioResult::new("eigenstate", checks, warnings, summary, values))
}

/// Checks at `φ` with the default commutator tolerance `1e-8·scale`.
pub fn counterexample_scenario(a: &Observable, b: &Observable, phi: &StateVector) -> Result<ScenarioResult> {
    let tol_c = tol::COMMUTATOR_VANISH * tol::pair_scale(a.matrix(), b.matrix());
    counterexample_scenario_with_tol(a, b, phi, tol_c)
}

/// `commutator_tol` is absolute.
pub fn counterexample_scenario_with_tol(
    a: &Observable,
    b: &Observable,
    phi: &StateVector,
    commutator_tol: f64,
) -> Result<ScenarioResult> {
    check_dim(a.dim(), b.dim())?;
    check_dim(a.dim(), phi.dim())?;
    let comm_norm = state::commutator(a, b)?.norm_inf();
    let suite = bounds::bound_suite(a, b, phi)?;
    let ce = state::commutator_expectation(a, b, phi)?;
    let delta_a = suite.variance_a.sqrt();
    let delta_b = suite.variance_b.sqrt();

    let checks = vec![
        Check::new(
            "k1: [A,B] != 0 as operators",
            comm_norm,
            Expected::GreaterThan(tol::COMMUTATOR_NONZERO),
            0.0,
        ),
        Check::new("k2: <[A,B]> vanishes", ce.norm(), Expected::AtMost(0.0), commutator_tol),
        Check::new("k3: Delta A > 0", delta_a, Expected::GreaterThan(tol::EIGEN_EPS), 0.0),
        Check::new("k4: Delta B > 0", delta_b, Expected::GreaterThan(tol::EIGEN_EPS), 0.0),
        Check::new(
            "k5: 2|Re<dA dB>| > 0",
            suite.m12a,
            Expected::GreaterThan(commutator_tol),
            0.0,
        ),
        Check::new("k6: hr rhs = 0", suite.hr.rhs, Expected::Equals(0.0), commutator_tol),
    ];
    let summary = format!(
        "product bound right side {:.3e}; sum bounds: m12a {:.6}, mp2 {:.6}, mp1 {:.6}, against lhs_sum {:.6}",
        suite.hr.rhs, suite.m12a, suite.mp2, suite.mp1_best, suite.lhs_sum
    );
    let values = BTreeMap::from([
        ("commutator_expectation".to_string(), ce.norm()),
        ("delta_a".to_string(), delta_a),
        ("delta_b".to_string(), delta_b),
        ("lhs_sum".to_string(), suite.lhs_sum),
        ("m12a".to_string(), suite.m12a),
        ("mp2".to_string(), suite.mp2),
        ("mp1_best".to_string(), suite.mp1_best),
        ("hr_rhs".to_string(), suite.hr.rhs),
    ]);
    Ok(ScenarioResult::new(
        "counterexample",
        checks,
        Vec::new(),
        summary,
        values,
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchHit {
    pub state: StateVector,
    pub start_index: usize,
    pub m12a: f64,
    pub commutator_expectation: f64,
}

const ASCENT_ITERS: usize = 400;
const RESTORE_ITERS: usize = 60;

/// Quadratic forms used by the search objective.
struct SearchForms {
    a: CMatrix,
    b: CMatrix,
    /// `(AB + BA)/2`
    sym: CMatrix,
    /// `−i[A,B]`, Hermitian
    comm: CMatrix,
}

impl SearchForms {
    fn new(a: &Observable, b: &Observable, comm: &CMatrix) -> Self {
        let ab = a.matrix().matmul(b.matrix());
        let ba = b.matrix().matmul(a.matrix());
        Self {
            a: a.matrix().clone(),
            b: b.matrix().clone(),
            sym: ab.add(&ba).scaled(C64::new(0.5, 0.0)),
            comm: comm.scaled(C64::new(0.0, -1.0)),
        }
    }

    fn quad(m: &CMatrix, v: &CVector) -> (f64, CVector) {
        let mv = m.apply_unchecked(v);
        let q = inner(v, &mv).expect("same dimension").re;
        (q, mv)
    }

    /// Returns `(objective, Re⟨δAδB⟩, ⟨C⟩, tangent gradient)`.
    fn evaluate(&self, v: &CVector) -> (f64, f64, f64, CVector) {
        let (qa, av) = Self::quad(&self.a, v);
        let (qb, bv) = Self::quad(&self.b, v);
        let (qs, sv) = Self::quad(&self.sym, v);
        let (qc, cv) = Self::quad(&self.comm, v);
        let r = qs - qa * qb;
        let objective = 2.0 * r.abs() - tol::PENALTY_WEIGHT * qc * qc;
        // d q_M = 2 Re⟨Mφ|δ⟩
        let grad_r = sv
            .scaled(C64::new(2.0, 0.0))
            .add_scaled(C64::new(-2.0 * qb, 0.0), &av)
            .add_scaled(C64::new(-2.0 * qa, 0.0), &bv);
        let grad = grad_r
            .scaled(C64::new(2.0 * r.signum(), 0.0))
            .add_scaled(C64::new(-4.0 * tol::PENALTY_WEIGHT * qc, 0.0), &cv);
        (objective, r, qc, tangent(v, &grad))
    }
}

fn tangent(v: &CVector, g: &CVector) -> CVector {
    let radial = inner(v, g).expect("same dimension").re;
    g.add_scaled(C64::new(-radial, 0.0), v)
}

fn unit(v: &CVector) -> Option<CVector> {
    linalg::normalize(v, tol::UNIT_NORM).ok()
}

/// Newton steps along the sphere-tangent gradient of `⟨C⟩` until
/// `|⟨C⟩| ≤ target`.
fn restore(forms: &SearchForms, mut v: CVector, target: f64) -> Option<CVector> {
    for _ in 0..RESTORE_ITERS {
        let (qc, cv) = SearchForms::quad(&forms.comm, &v);
        if qc.abs() <= target {
            return Some(v);
        }
        let normal = tangent(&v, &cv.scaled(C64::new(2.0, 0.0)));
        let nn = normal.norm_sqr();
        if nn < 1e-24 {
            return None;
        }
        v = unit(&v.add_scaled(C64::new(-qc / nn, 0.0), &normal))?;
    }
    None
}

/// Projected ascent on the penalized objective from one start.
///
/// The search direction is the objective gradient projected onto the
/// tangent space of both the unit sphere and the level set of `⟨C⟩`; each
/// trial point is pulled back onto the level set by [`restore`] and accepted
/// under an Armijo test on the penalized objective.
fn run_start(forms: &SearchForms, start: CVector, commutator_tol: f64) -> Option<CVector> {
    let target = 0.1 * commutator_tol;
    let mut v = restore(forms, start, target)?;
    let direction = |v: &CVector, g: &CVector| -> CVector {
        let (_, cv) = SearchForms::quad(&forms.comm, v);
        let normal = tangent(v, &cv.scaled(C64::new(2.0, 0.0)));
        let nn = normal.norm_sqr();
        if nn < 1e-24 {
            return g.clone();
        }
        let along = inner(&normal, g).expect("same dimension").re / nn;
        g.add_scaled(C64::new(-along, 0.0), &normal)
    };
    let (mut f, _, _, g) = forms.evaluate(&v);
    let mut d = direction(&v, &g);
    let mut step = 0.1;
    for _ in 0..ASCENT_ITERS {
        let dd = d.norm_sqr();
        if dd < 1e-24 {
            break;
        }
        let mut accepted = false;
        while step > 1e-14 {
            let trial = unit(&v.add_scaled(C64::new(step, 0.0), &d)).and_then(|t| restore(forms, t, target));
            if let Some(trial) = trial {
                let (ft, _, _, gt) = forms.evaluate(&trial);
                if ft >= f + 1e-4 * step * dd {
                    d = direction(&trial, &gt);
                    v = trial;
                    f = ft;
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
        step *= 2.0;
    }
    restore(forms, v, target)
}

/// Multi-start search for a state with `|⟨[A,B]⟩_φ| ≤ commutator_tol` and
/// `2|Re⟨δA δB⟩_φ| ≥ 10·commutator_tol`.
///
/// Start `k` draws its initial Haar state from stream `(seed, k)`. Starts are
/// evaluated in parallel and the hit from the lowest successful start index
/// is returned, so the result does not depend on scheduling.
pub fn counterexample_search(
    a: &Observable,
    b: &Observable,
    seed: u64,
    n_starts: usize,
    commutator_tol: f64,
) -> Result<Option<SearchHit>> {
    check_dim(a.dim(), b.dim())?;
    let comm = require_noncommuting(a, b)?;
    if commutator_tol.is_nan() || commutator_tol <= 0.0 {
        return Err(Error::InvalidConfig(format!(
            "commutator tolerance must be positive, got {commutator_tol}"
        )));
    }
    let forms = SearchForms::new(a, b, &comm);
    let dim = a.dim();
    let hit = (0..n_starts).into_par_iter().find_map_first(|k| {
        let start = haar_state(dim, &mut Stream::new(seed, k as u64)).ok()?;
        let v = run_start(&forms, start.into_vector(), commutator_tol)?;
        let state = StateVector::normalized(&v).ok()?;
        let m12a = bounds::m12a_rhs(a, b, &state).ok()?;
        if m12a < 10.0 * commutator_tol {
            return None;
        }
        let verdict = counterexample_scenario_with_tol(a, b, &state, commutator_tol).ok()?;
        if !verdict.verdict {
            return None;
        }
        let ce = state::commutator_expectation(a, b, &state).ok()?.norm();
        Some(SearchHit {
            state,
            start_index: k,
            m12a,
            commutator_expectation: ce,
        })
    });
    Ok(hit)
}

/// [`counterexample_search`] with the default tolerance `1e-8·scale`.
pub fn counterexample_search_default(a: &Observable, b: &Observable, seed: u64) -> Result<Option<SearchHit>> {
    let tol_c = tol::COMMUTATOR_VANISH * tol::pair_scale(a.matrix(), b.matrix());
    counterexample_search(a, b, seed, tol::DEFAULT_STARTS, tol_c)
}
