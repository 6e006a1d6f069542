use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use varbound::bounds::{self, BoundSuite};
use varbound::sampler::{
    eigenstate_approach_scan, tightness_scan, ApproachPoint, SampleConfig, Stream, TightnessStats,
};
use varbound::scenarios::{
    counterexample_scenario_with_tol, counterexample_search, eigenstate_scenario, ScenarioResult,
};
use varbound::StateVector;

use crate::error::{CliError, CliResult, Exit};
use crate::output::{self, Format, CSV_VERSION, SUITE_COLUMNS};
use crate::problem::Problem;

pub const MAX_DIM: usize = 64;
pub const MAX_SAMPLES: usize = 1_000_000;
pub const MAX_STEPS: usize = 100_000;
pub const MAX_STARTS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub bound: String,
    pub slack: f64,
}

/// Slacks below `−factor·scale`.
pub fn violations(suite: &BoundSuite, factor: f64) -> Vec<Violation> {
    let floor = -factor * suite.scale;
    let s = &suite.slacks;
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
    .map(|(bound, slack)| Violation {
        bound: bound.to_string(),
        slack,
    })
    .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub problem: String,
    pub dim: usize,
    #[serde(flatten)]
    pub suite: BoundSuite,
    pub valid: bool,
    pub violations: Vec<Violation>,
}

pub fn check(problem: &Problem, format: Format, out: &mut dyn Write) -> CliResult<Exit> {
    let phi = problem.resolve_state()?;
    let suite = bounds::bound_suite(&problem.a, &problem.b, &phi)?;
    let violations = violations(&suite, problem.tolerances.validity_slack);
    let report = CheckReport {
        problem: problem.name.clone(),
        dim: problem.dim(),
        valid: violations.is_empty(),
        suite,
        violations,
    };
    let text = match format {
        Format::Json => output::canonical_json(&report)?,
        Format::Csv => output::csv_table("check", &SUITE_COLUMNS, [output::suite_row(&report.suite)])?,
        Format::Text => {
            let mut t = format!("problem: {} (dim {})\n", report.problem, report.dim);
            t.push_str(&output::suite_text(&report.suite));
            for v in &report.violations {
                t.push_str(&format!("VIOLATION {}: slack {}\n", v.bound, output::float(v.slack)));
            }
            t.push_str(if report.valid {
                "all bounds hold\n"
            } else {
                "bound violated\n"
            });
            t
        }
    };
    out.write_all(text.as_bytes())?;
    Ok(if report.valid { Exit::Ok } else { Exit::Invariant })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ScenarioKind {
    Eigenstate,
    Counterexample,
    Search,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScenarioOptions {
    /// Eigenvector of `B` for the eigenstate scenario; defaults to the
    /// problem's `{"of": "B"}` selector.
    pub index: Option<usize>,
    pub seed: u64,
    pub starts: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchInfo {
    pub seed: u64,
    pub starts: usize,
    pub start_index: usize,
    pub m12a: f64,
    pub commutator_expectation: f64,
    pub state: StateVector,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioReport {
    pub problem: String,
    #[serde(flatten)]
    pub result: ScenarioResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchInfo>,
}

pub fn scenario(
    kind: ScenarioKind,
    problem: &Problem,
    opts: ScenarioOptions,
    format: Format,
    out: &mut dyn Write,
) -> CliResult<Exit> {
    let (a, b) = (&problem.a, &problem.b);
    let tol_c = problem.tolerances.commutator_vanish * problem.scale();
    let (result, search) = match kind {
        ScenarioKind::Eigenstate => {
            let index = opts.index.or_else(|| problem.b_eigen_index()).ok_or_else(|| {
                CliError::input(
                    "eigenstate scenario needs --index or a state of the form {\"of\": \"B\", \"index\": n}",
                )
            })?;
            (eigenstate_scenario(a, b, index)?, None)
        }
        ScenarioKind::Counterexample => {
            let phi = problem.resolve_state()?;
            (counterexample_scenario_with_tol(a, b, &phi, tol_c)?, None)
        }
        ScenarioKind::Search => {
            if opts.starts == 0 || opts.starts > MAX_STARTS {
                return Err(CliError::input(format!("--starts must be in 1..={MAX_STARTS}")));
            }
            match counterexample_search(a, b, opts.seed, opts.starts, tol_c)? {
                None => {
                    writeln!(
                        out,
                        "NOT_FOUND: no state with vanishing commutator and m12a > 0 in {} starts",
                        opts.starts
                    )?;
                    return Ok(Exit::NotFound);
                }
                Some(hit) => {
                    let mut r = counterexample_scenario_with_tol(a, b, &hit.state, tol_c)?;
                    r.name = "search".into();
                    let info = SearchInfo {
                        seed: opts.seed,
                        starts: opts.starts,
                        start_index: hit.start_index,
                        m12a: hit.m12a,
                        commutator_expectation: hit.commutator_expectation,
                        state: hit.state,
                    };
                    (r, Some(info))
                }
            }
        }
    };
    let verdict = result.verdict;
    let report = ScenarioReport {
        problem: problem.name.clone(),
        result,
        search,
    };
    let text = match format {
        Format::Json => output::canonical_json(&report)?,
        Format::Csv => output::csv_table(
            "scenario",
            &output::CHECK_COLUMNS,
            output::check_rows(&report.result.checks),
        )?,
        Format::Text => {
            let mut t = output::scenario_text(&report.result);
            if let Some(s) = &report.search {
                t.push_str(&format!(
                    "found at start {} of {} (seed {}): m12a {}\n",
                    s.start_index,
                    s.starts,
                    s.seed,
                    output::float(s.m12a)
                ));
                let entries: Vec<String> = s
                    .state
                    .as_vector()
                    .entries()
                    .iter()
                    .map(|z| format!("{}{:+}i", output::float(z.re), z.im))
                    .collect();
                t.push_str(&format!("state: [{}]\n", entries.join(", ")));
            }
            t
        }
    };
    out.write_all(text.as_bytes())?;
    Ok(if verdict { Exit::Ok } else { Exit::Invariant })
}

fn write_file(dir: &Path, name: &str, contents: &str) -> CliResult<()> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn prepare_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::input(format!("{}: {e}", dir.display())))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HaarSummary {
    pub kind: &'static str,
    pub csv: &'static str,
    pub csv_version: u32,
    pub stats: TightnessStats,
}

pub const HAAR_CSV: &str = "haar.csv";
pub const HAAR_JSON: &str = "haar.json";

pub fn scan_haar(cfg: SampleConfig, dir: &Path, out: &mut dyn Write) -> CliResult<Exit> {
    if cfg.dim > MAX_DIM {
        return Err(CliError::input(format!("--dim must be in 2..={MAX_DIM}")));
    }
    if cfg.n_samples > MAX_SAMPLES {
        return Err(CliError::input(format!("--samples must be in 1..={MAX_SAMPLES}")));
    }
    cfg.validate()?;
    let scan = tightness_scan(&cfg)?;
    let mut header = vec!["sample_index"];
    header.extend(SUITE_COLUMNS);
    let rows = scan.records.iter().map(|r| {
        let mut row = vec![r.sample_index.to_string()];
        row.extend(output::suite_row(&r.suite));
        row
    });
    let csv = output::csv_table("haar", &header, rows)?;
    let summary = HaarSummary {
        kind: "haar",
        csv: HAAR_CSV,
        csv_version: CSV_VERSION,
        stats: scan.stats,
    };
    let json = output::canonical_json(&summary)?;
    prepare_dir(dir)?;
    write_file(dir, HAAR_CSV, &csv)?;
    write_file(dir, HAAR_JSON, &json)?;
    let v = summary.stats.violations;
    writeln!(
        out,
        "haar scan: dim {} samples {} seed {}: {} violations, {} with hr rhs ~ 0 and m12a > 0; wrote {} and {}",
        cfg.dim,
        cfg.n_samples,
        cfg.seed,
        v,
        summary.stats.hr_zero_m12a_positive,
        dir.join(HAAR_CSV).display(),
        dir.join(HAAR_JSON).display()
    )?;
    Ok(if v == 0 { Exit::Ok } else { Exit::Invariant })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproachEnd {
    pub t: f64,
    pub lhs_sum: f64,
    pub hr_rhs: f64,
    pub mp2: f64,
    pub mp2_ratio: Option<f64>,
    pub self_referential: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproachSummary {
    pub kind: &'static str,
    pub csv: &'static str,
    pub csv_version: u32,
    pub problem: String,
    pub eig_index: usize,
    pub steps: usize,
    pub seed: u64,
    pub start: ApproachEnd,
    pub end: ApproachEnd,
    pub violations: usize,
}

pub const APPROACH_CSV: &str = "approach.csv";
pub const APPROACH_JSON: &str = "approach.json";

fn ratio(s: &BoundSuite) -> Option<f64> {
    (s.lhs_sum > 0.0).then(|| s.mp2 / s.lhs_sum)
}

fn approach_end(p: &ApproachPoint) -> ApproachEnd {
    ApproachEnd {
        t: p.t,
        lhs_sum: p.suite.lhs_sum,
        hr_rhs: p.suite.hr.rhs,
        mp2: p.suite.mp2,
        mp2_ratio: ratio(&p.suite),
        self_referential: p.suite.self_referential,
    }
}

pub fn scan_approach(
    problem: &Problem,
    index: Option<usize>,
    steps: usize,
    seed: u64,
    dir: &Path,
    out: &mut dyn Write,
) -> CliResult<Exit> {
    if !(2..=MAX_STEPS).contains(&steps) {
        return Err(CliError::input(format!("--steps must be in 2..={MAX_STEPS}")));
    }
    let index = index.or_else(|| problem.b_eigen_index()).ok_or_else(|| {
        CliError::input("approach scan needs --index or a state of the form {\"of\": \"B\", \"index\": n}")
    })?;
    let points = eigenstate_approach_scan(&problem.a, &problem.b, index, steps, &mut Stream::new(seed, 0))?;
    let factor = problem.tolerances.validity_slack;
    let violations = points
        .iter()
        .filter(|p| !violations(&p.suite, factor).is_empty())
        .count();

    let mut header = vec!["step", "t"];
    header.extend(SUITE_COLUMNS);
    header.push("mp2_ratio");
    let rows = points.iter().map(|p| {
        let mut row = vec![p.step.to_string(), output::float(p.t)];
        row.extend(output::suite_row(&p.suite));
        row.push(ratio(&p.suite).map(output::float).unwrap_or_default());
        row
    });
    let csv = output::csv_table("approach", &header, rows)?;
    let summary = ApproachSummary {
        kind: "approach",
        csv: APPROACH_CSV,
        csv_version: CSV_VERSION,
        problem: problem.name.clone(),
        eig_index: index,
        steps,
        seed,
        start: approach_end(&points[0]),
        end: approach_end(&points[points.len() - 1]),
        violations,
    };
    let json = output::canonical_json(&summary)?;
    prepare_dir(dir)?;
    write_file(dir, APPROACH_CSV, &csv)?;
    write_file(dir, APPROACH_JSON, &json)?;
    writeln!(
        out,
        "approach scan: {} steps to eigenvector {} of B: endpoint hr rhs {}, mp2/lhs {}; wrote {} and {}",
        steps,
        index,
        output::float(summary.end.hr_rhs),
        summary
            .end
            .mp2_ratio
            .map(output::float)
            .unwrap_or_else(|| "undefined".into()),
        dir.join(APPROACH_CSV).display(),
        dir.join(APPROACH_JSON).display()
    )?;
    Ok(if violations == 0 { Exit::Ok } else { Exit::Invariant })
}
