//! Reduced-size invariant suites for a quick installation check.
//!
//! `Mutation::Mp2Sign` replaces `Δ(A+B)` by `Δ(A−B)` in the value checked
//! against the perpendicular-state path, so a healthy build must report a
//! failure under it.

use std::io::Write;
use std::time::Instant;

use varbound::av::{av_decompose, av_reconstruct_residual};
use varbound::bounds::{self, Sign};
use varbound::linalg::project_orthogonal;
use varbound::sampler::{draw_instance, eigenstate_approach_scan, haar_state, tightness_scan, SampleConfig, Stream};
use varbound::scenarios::{counterexample_scenario, counterexample_search_default, eigenstate_scenario};
use varbound::{state, tol, Observable, StateVector, C64};

use crate::error::{CliResult, Exit};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Mutation {
    Mp2Sign,
}

const SEED: u64 = 20_240_601;

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

struct Tally {
    cases: usize,
    failures: usize,
    first: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Self {
            cases: 0,
            failures: 0,
            first: None,
        }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(what());
            }
        }
    }

    fn error(&mut self, e: varbound::Error) {
        self.record(false, || e.to_string());
    }

    fn finish(self, name: &'static str) -> SuiteOutcome {
        SuiteOutcome {
            name,
            cases: self.cases,
            failures: self.failures,
            first_failure: self.first,
        }
    }
}

fn mp2_value(a: &Observable, b: &Observable, phi: &StateVector, m: Option<Mutation>) -> varbound::Result<f64> {
    match m {
        None => bounds::mp2_bound(a, b, phi),
        Some(Mutation::Mp2Sign) => Ok(0.5 * state::moments(&a.sum(&b.scaled(-1.0))?, phi)?.variance),
    }
}

const DIMS: [usize; 4] = [2, 3, 4, 8];
const PER_DIM: u64 = 100;

fn pauli_eigenstate(t: &mut Tally) {
    match eigenstate_scenario(&Observable::pauli_x(), &Observable::pauli_z(), 1) {
        Ok(r) => {
            t.record(r.verdict, || "eigenstate scenario verdict false".into());
            let close = |k: &str, v: f64| (r.values[k] - v).abs() <= 1e-12;
            t.record(close("mp2", 0.5) && close("lhs_sum", 1.0), || {
                "mp2 or lhs_sum off".into()
            });
            t.record(close("mp1_rhs", 1.0) && close("hr_rhs", 0.0), || "mp1 or hr off".into());
        }
        Err(e) => t.error(e),
    }
}

fn pauli_counterexample(t: &mut Tally) {
    let h = 0.5f64.sqrt();
    let q = std::f64::consts::FRAC_PI_4;
    let phi = StateVector::normalized(
        &varbound::CVector::new(vec![C64::new(h, 0.0), C64::from_polar(h, q)]).expect("finite"),
    )
    .expect("nonzero");
    match counterexample_scenario(&Observable::pauli_x(), &Observable::pauli_y(), &phi) {
        Ok(r) => {
            t.record(r.verdict, || "counterexample verdict false".into());
            t.record((r.values["m12a"] - 1.0).abs() <= 1e-12, || "m12a != 1".into());
        }
        Err(e) => t.error(e),
    }
}

fn random_suites(m: Option<Mutation>) -> [Tally; 4] {
    let (mut validity, mut paths, mut comm, mut av) = (Tally::new(), Tally::new(), Tally::new(), Tally::new());
    for d in DIMS {
        for i in 0..PER_DIM {
            let (a, b, phi) = match draw_instance(d, SEED, i) {
                Ok(x) => x,
                Err(e) => {
                    validity.error(e);
                    continue;
                }
            };
            let at = move || format!("dim {d} sample {i}");
            match bounds::bound_suite(&a, &b, &phi) {
                Ok(s) => {
                    let floor = -tol::VALIDITY_SLACK * s.scale;
                    let mp2 = mp2_value(&a, &b, &phi, m).unwrap_or(f64::NAN);
                    let ok = s.is_valid() && s.lhs_sum - mp2 >= floor;
                    validity.record(ok, at);
                    if let Some(av) = s.mp2_av {
                        paths.record((mp2 - av).abs() <= 1e-10 * s.scale, at);
                    }
                }
                Err(e) => validity.error(e),
            }
            match state::correlation(&a, &b, &phi) {
                Ok(r) => {
                    let scale = tol::pair_scale(a.matrix(), b.matrix());
                    let diff = (r.commutator_expectation - C64::new(0.0, 2.0 * r.im_part)).norm();
                    comm.record(diff <= 1e-10 * scale, at);
                }
                Err(e) => comm.error(e),
            }
            let residual =
                av_decompose(&a, &phi, tol::EIGEN_EPS).and_then(|dec| av_reconstruct_residual(&a, &phi, &dec));
            match residual {
                Ok(r) => av.record(r <= 1e-10 * tol::op_scale(a.matrix()), at),
                Err(e) => av.error(e),
            }
        }
    }
    [validity, paths, comm, av]
}

fn mp1_maximality(t: &mut Tally) {
    for inst in 0..10u64 {
        let d = DIMS[inst as usize % DIMS.len()];
        let run = || -> varbound::Result<bool> {
            let (a, b, phi) = draw_instance(d, SEED + 1, inst)?;
            let best = bounds::mp1_optimal(&a, &b, &phi, Sign::Plus)?.rhs;
            let mut stream = Stream::new(SEED + 2, inst);
            let mut ok = true;
            for _ in 0..20 {
                let raw = haar_state(d, &mut stream)?;
                let perp = StateVector::normalized(&project_orthogonal(raw.as_vector(), phi.as_vector())?)?;
                ok &= bounds::mp1_bound(&a, &b, &phi, &perp, Sign::Plus)?.rhs <= best + 1e-10;
            }
            Ok(ok)
        };
        match run() {
            Ok(ok) => t.record(ok, || format!("instance {inst}")),
            Err(e) => t.error(e),
        }
    }
}

fn approach(t: &mut Tally) {
    let r = eigenstate_approach_scan(
        &Observable::pauli_x(),
        &Observable::pauli_z(),
        1,
        21,
        &mut Stream::new(SEED, 0),
    );
    match r {
        Ok(points) => {
            let end = &points[points.len() - 1].suite;
            t.record(end.hr.rhs <= 1e-9, || "endpoint hr rhs".into());
            t.record((end.mp2 / end.lhs_sum - 0.5).abs() <= 1e-9, || {
                "endpoint mp2 ratio".into()
            });
        }
        Err(e) => t.error(e),
    }
}

fn determinism(t: &mut Tally) {
    let cfg = SampleConfig {
        dim: 3,
        n_samples: 200,
        seed: SEED,
    };
    match (tightness_scan(&cfg), tightness_scan(&cfg)) {
        (Ok(x), Ok(y)) => t.record(x == y, || "repeated scan differs".into()),
        (Err(e), _) | (_, Err(e)) => t.error(e),
    }
}

fn search(t: &mut Tally) {
    match counterexample_search_default(&Observable::pauli_x(), &Observable::pauli_y(), SEED) {
        Ok(Some(hit)) => t.record(hit.m12a >= 0.9, || format!("m12a {}", hit.m12a)),
        Ok(None) => t.record(false, || "not found".into()),
        Err(e) => t.error(e),
    }
}

/// Runs every suite; timing goes to `timing`, the summary to `out`.
pub fn run(mutation: Option<Mutation>, out: &mut dyn Write, timing: &mut dyn Write) -> CliResult<Exit> {
    let mut outcomes = Vec::new();
    let mut timed = |name: &'static str, f: &mut dyn FnMut() -> Vec<(&'static str, Tally)>| -> CliResult<()> {
        let start = Instant::now();
        let results = f();
        writeln!(timing, "{name:<22} {:>9.3} ms", start.elapsed().as_secs_f64() * 1e3)?;
        outcomes.extend(results.into_iter().map(|(n, t)| t.finish(n)));
        Ok(())
    };
    let single = |name: &'static str, f: fn(&mut Tally)| {
        let mut t = Tally::new();
        f(&mut t);
        vec![(name, t)]
    };
    timed("pauli-eigenstate", &mut || single("pauli-eigenstate", pauli_eigenstate))?;
    timed("pauli-counterexample", &mut || {
        single("pauli-counterexample", pauli_counterexample)
    })?;
    timed("random-instances", &mut || {
        let [v, p, c, a] = random_suites(mutation);
        vec![
            ("validity", v),
            ("mp2-two-paths", p),
            ("commutator-identity", c),
            ("av-reconstruction", a),
        ]
    })?;
    timed("mp1-maximality", &mut || single("mp1-maximality", mp1_maximality))?;
    timed("approach-endpoint", &mut || single("approach-endpoint", approach))?;
    timed("scan-determinism", &mut || single("scan-determinism", determinism))?;
    timed("search", &mut || single("search", search))?;

    let mut failed = 0;
    for o in &outcomes {
        let status = if o.failures == 0 { "PASS" } else { "FAIL" };
        write!(out, "{status} {:<22} {:>4} cases", o.name, o.cases)?;
        if let Some(f) = &o.first_failure {
            write!(out, ", {} failed (first: {f})", o.failures)?;
        }
        writeln!(out)?;
        failed += usize::from(o.failures > 0);
    }
    if let Some(m) = mutation {
        let name = clap::ValueEnum::to_possible_value(&m)
            .map(|v| v.get_name().to_string())
            .unwrap_or_default();
        writeln!(out, "mutation: {name}")?;
    }
    writeln!(out, "{} of {} suites passed", outcomes.len() - failed, outcomes.len())?;
    Ok(if failed == 0 { Exit::Ok } else { Exit::Invariant })
}
