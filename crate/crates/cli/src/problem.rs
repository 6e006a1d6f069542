//! Problem files: two observables, an optional state, optional tolerance
//! overrides.
//!
//! ```json
//! {
//!   "A": "pauli_x",
//!   "B": {"dim": 2, "matrix": [[[1, 0], [0, 0]], [[0, 0], [-1, 0]]]},
//!   "state": {"of": "B", "index": 1},
//!   "tolerances": {"validity_slack": 1e-9}
//! }
//! ```
//!
//! Operators are either inline matrices of `[re, im]` pairs or one of the
//! names `pauli_x`, `pauli_y`, `pauli_z`, `identity(d)`. A state is either
//! `{"dim": d, "vector": [[re, im], ...]}` (normalized on load) or an
//! eigenvector selector into the ascending spectrum of `A` or `B`.

use std::path::Path;

use serde::{Deserialize, Serialize};
use varbound::linalg::{hermitian_eigensystem, CMatrix, CVector};
use varbound::{tol, Observable, StateVector, C64};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OperatorSpec {
    Named(String),
    Inline { dim: usize, matrix: Vec<Vec<[f64; 2]>> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Which {
    A,
    B,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateSpec {
    Vector { dim: usize, vector: Vec<[f64; 2]> },
    Eigen { of: Which, index: usize },
}

/// Relative tolerance factors; each is multiplied by
/// `1 + ‖A‖∞·‖B‖∞` where it is applied.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Largest negative slack tolerated before a bound counts as violated.
    pub validity_slack: f64,
    /// `|⟨[A,B]⟩|` below this counts as vanishing.
    pub commutator_vanish: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            validity_slack: tol::VALIDITY_SLACK,
            commutator_vanish: tol::COMMUTATOR_VANISH,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    #[serde(rename = "A")]
    pub a: OperatorSpec,
    #[serde(rename = "B")]
    pub b: OperatorSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<StateSpec>,
    #[serde(default)]
    pub tolerances: Tolerances,
}

pub const BUILTINS: [&str; 2] = ["pauli-xy-equator", "pauli-xz-eigenstate"];

pub fn builtin(name: &str) -> Option<ProblemSpec> {
    let named = |s: &str| OperatorSpec::Named(s.to_string());
    match name {
        "pauli-xy-equator" => {
            let h = 0.5f64.sqrt();
            let q = std::f64::consts::FRAC_PI_4;
            Some(ProblemSpec {
                a: named("pauli_x"),
                b: named("pauli_y"),
                state: Some(StateSpec::Vector {
                    dim: 2,
                    vector: vec![[h, 0.0], [h * q.cos(), h * q.sin()]],
                }),
                tolerances: Tolerances::default(),
            })
        }
        "pauli-xz-eigenstate" => Some(ProblemSpec {
            a: named("pauli_x"),
            b: named("pauli_z"),
            state: Some(StateSpec::Eigen { of: Which::B, index: 1 }),
            tolerances: Tolerances::default(),
        }),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StateSource {
    Vector(StateVector),
    Eigen { of: Which, index: usize },
}

/// A validated problem.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub name: String,
    pub a: Observable,
    pub b: Observable,
    pub state: Option<StateSource>,
    pub tolerances: Tolerances,
}

impl Problem {
    /// `source` is a built-in name or a path to a problem file.
    pub fn load(source: &str) -> CliResult<Self> {
        if let Some(spec) = builtin(source) {
            return Self::from_spec(source, &spec);
        }
        let text = std::fs::read_to_string(Path::new(source))
            .map_err(|e| CliError::input(format!("{source}: {e} (built-in problems: {})", BUILTINS.join(", "))))?;
        Self::parse(source, &text)
    }

    pub fn parse(name: &str, text: &str) -> CliResult<Self> {
        let spec: ProblemSpec = serde_json::from_str(text).map_err(|e| CliError::input(format!("{name}: {e}")))?;
        Self::from_spec(name, &spec)
    }

    pub fn from_spec(name: &str, spec: &ProblemSpec) -> CliResult<Self> {
        let at = |field: &str, msg: String| CliError::input(format!("{name}: {field}: {msg}"));
        let a = operator(&spec.a).map_err(|m| at("A", m))?;
        let b = operator(&spec.b).map_err(|m| at("B", m))?;
        if a.dim() != b.dim() {
            return Err(at(
                "B",
                format!("dimension {} does not match A (dimension {})", b.dim(), a.dim()),
            ));
        }
        let tolerances = spec.tolerances;
        for (field, v) in [
            ("validity_slack", tolerances.validity_slack),
            ("commutator_vanish", tolerances.commutator_vanish),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(at(&format!("tolerances.{field}"), format!("must be positive, got {v}")));
            }
        }
        let state = match &spec.state {
            None => None,
            Some(StateSpec::Vector { dim, vector }) => {
                if *dim != a.dim() || vector.len() != *dim {
                    return Err(at(
                        "state",
                        format!(
                            "expected {} entries, found dim {} with {} entries",
                            a.dim(),
                            dim,
                            vector.len()
                        ),
                    ));
                }
                let v = CVector::new(vector.iter().map(|&[re, im]| C64::new(re, im)).collect())
                    .map_err(|e| at("state.vector", e.to_string()))?;
                Some(StateSource::Vector(
                    StateVector::normalized(&v).map_err(|e| at("state.vector", e.to_string()))?,
                ))
            }
            Some(StateSpec::Eigen { of, index }) => {
                let (of, index) = (*of, *index);
                if index >= a.dim() {
                    return Err(at(
                        "state.index",
                        format!("{index} out of range for {of:?} with dimension {}", a.dim()),
                    ));
                }
                Some(StateSource::Eigen { of, index })
            }
        };
        Ok(Self {
            name: name.to_string(),
            a,
            b,
            state,
            tolerances,
        })
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn operator(&self, which: Which) -> &Observable {
        match which {
            Which::A => &self.a,
            Which::B => &self.b,
        }
    }

    pub fn scale(&self) -> f64 {
        tol::pair_scale(self.a.matrix(), self.b.matrix())
    }

    /// The state the problem names, resolving eigenvector selectors.
    pub fn resolve_state(&self) -> CliResult<StateVector> {
        match &self.state {
            None => Err(CliError::input(format!("{}: no \"state\" given", self.name))),
            Some(StateSource::Vector(v)) => Ok(v.clone()),
            Some(StateSource::Eigen { of, index }) => {
                let (of, index) = (*of, *index);
                let es = hermitian_eigensystem(self.operator(of).matrix(), tol::HERMITIAN)?;
                Ok(StateVector::normalized(&es.vectors[index])?)
            }
        }
    }

    /// The index of a `B` eigenvector selector, if that is what the state is.
    pub fn b_eigen_index(&self) -> Option<usize> {
        match self.state {
            Some(StateSource::Eigen { of: Which::B, index }) => Some(index),
            _ => None,
        }
    }
}

fn operator(spec: &OperatorSpec) -> Result<Observable, String> {
    match spec {
        OperatorSpec::Named(name) => named_operator(name),
        OperatorSpec::Inline { dim, matrix } => {
            if *dim == 0 {
                return Err("dim must be at least 1".into());
            }
            if matrix.len() != *dim {
                return Err(format!("matrix has {} rows, expected {dim}", matrix.len()));
            }
            let mut rows = Vec::with_capacity(*dim);
            for (i, row) in matrix.iter().enumerate() {
                if row.len() != *dim {
                    return Err(format!("matrix[{i}] has {} entries, expected {dim}", row.len()));
                }
                let mut out = Vec::with_capacity(*dim);
                for (j, &[re, im]) in row.iter().enumerate() {
                    if !(re.is_finite() && im.is_finite()) {
                        return Err(format!("matrix[{i}][{j}] is not finite"));
                    }
                    out.push(C64::new(re, im));
                }
                rows.push(out);
            }
            let m = CMatrix::from_rows(rows).map_err(|e| e.to_string())?;
            Observable::new(m).map_err(|e| match e {
                varbound::Error::NotHermitian { row, col, deviation } => format!(
                    "matrix[{row}][{col}] is not the conjugate of matrix[{col}][{row}] (deviation {deviation:e})"
                ),
                other => other.to_string(),
            })
        }
    }
}

fn named_operator(name: &str) -> Result<Observable, String> {
    match name {
        "pauli_x" => Ok(Observable::pauli_x()),
        "pauli_y" => Ok(Observable::pauli_y()),
        "pauli_z" => Ok(Observable::pauli_z()),
        _ => {
            let d = name
                .strip_prefix("identity(")
                .and_then(|r| r.strip_suffix(')'))
                .and_then(|d| d.trim().parse::<usize>().ok())
                .filter(|&d| d >= 1)
                .ok_or_else(|| {
                    format!("unknown operator {name:?} (expected pauli_x, pauli_y, pauli_z, identity(d) or a matrix object)")
                })?;
            Ok(Observable::identity(d))
        }
    }
}
