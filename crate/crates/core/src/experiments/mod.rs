//! Named, seeded scenarios that reproduce the predictor bounds as CSV.
//!
//! Every scenario writes one file in a shared long format
//! (`scenario,series,param,n,value,bound`). A row with a bound is also a
//! check: the scenario fails unless `value <= bound + tol` (or, for exact
//! rows, `|value - bound| <= tol`). Failures are collected, never short-circuited.

mod scenarios;

use crate::error::{Error, Result};
use crate::process::descriptor::fmt_real;
use crate::process::Measure;
use crate::seq::Alphabet;
use rand::Rng;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

pub use scenarios::{sparse_sequence, validate_sparse, DECAY_FROM};

pub const CSV_HEADER: &str = "scenario,series,param,n,value,bound";
pub const DEFAULT_SEED: u64 = 1;
pub const MANIFEST: &str = "manifest.txt";

/// Overrides for a scenario's defaults; `None` keeps the default.
#[derive(Debug, Clone, Default)]
pub struct Params {
    pub seed: Option<u64>,
    pub max_n: Option<usize>,
    pub grid: Option<usize>,
    pub tol: Option<f64>,
    pub class_file: Option<PathBuf>,
}

impl Params {
    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    /// The horizon to use, refusing overrides above `cap`.
    pub(crate) fn max_n(&self, default: usize, cap: usize) -> Result<usize> {
        let n = self.max_n.unwrap_or(default);
        if n == 0 || n > cap {
            return Err(Error::Domain(format!("max-n must lie in 1..={cap}, got {n}")));
        }
        Ok(n)
    }

    pub(crate) fn grid(&self, default: usize, min: usize) -> Result<usize> {
        let g = self.grid.unwrap_or(default);
        if g < min {
            return Err(Error::Domain(format!("grid must be at least {min}, got {g}")));
        }
        Ok(g)
    }

    pub(crate) fn tol(&self, default: f64) -> Result<f64> {
        let t = self.tol.unwrap_or(default);
        if !(t > 0.0) {
            return Err(Error::Domain(format!("tolerance must be positive, got {t}")));
        }
        Ok(t)
    }

    pub(crate) fn class_text(&self) -> Result<Option<String>> {
        self.class_file.as_ref().map(|p| Ok(fs::read_to_string(p)?)).transpose()
    }
}

/// Rows and check outcomes of one scenario.
#[derive(Debug, Clone)]
pub struct Table {
    pub scenario: String,
    pub rows: Vec<String>,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl Table {
    pub fn new(scenario: &str) -> Self {
        Table { scenario: scenario.to_string(), rows: Vec::new(), checks: 0, failures: Vec::new() }
    }

    fn push(&mut self, series: &str, param: &str, n: usize, value: f64, bound: Option<f64>) {
        let bound = bound.map(fmt_real).unwrap_or_default();
        self.rows.push(format!("{},{series},{param},{n},{},{bound}", self.scenario, fmt_real(value)));
    }

    /// A row without a check.
    pub fn value(&mut self, series: &str, param: &str, n: usize, value: f64) {
        self.push(series, param, n, value, None);
    }

    /// A row asserting `value <= bound + tol`.
    pub fn bounded(&mut self, series: &str, param: &str, n: usize, value: f64, bound: f64, tol: f64) {
        self.push(series, param, n, value, Some(bound));
        self.check_le(series, param, n, value, bound, tol);
    }

    /// A check without a row.
    pub fn check_le(&mut self, series: &str, param: &str, n: usize, value: f64, bound: f64, tol: f64) {
        self.checks += 1;
        if !(value <= bound + tol) {
            self.failures.push(format!("{series} [{param}] n={n}: {value} > {bound} + {tol}"));
        }
    }

    /// A row asserting `|value - expected| <= tol`.
    pub fn exact(&mut self, series: &str, param: &str, n: usize, value: f64, expected: f64, tol: f64) {
        self.push(series, param, n, value, Some(expected));
        self.check_close(series, param, n, value, expected, tol);
    }

    /// `|value - expected| <= tol` without a row; infinities must match exactly.
    pub fn check_close(&mut self, series: &str, param: &str, n: usize, value: f64, expected: f64, tol: f64) {
        self.checks += 1;
        let ok = if expected.is_infinite() { value == expected } else { (value - expected).abs() <= tol };
        if !ok {
            self.failures.push(format!("{series} [{param}] n={n}: {value} != {expected} (tol {tol})"));
        }
    }

    /// A boolean property, recorded only as a check.
    pub fn holds(&mut self, what: &str, ok: bool) {
        self.checks += 1;
        if !ok {
            self.failures.push(what.to_string());
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.rows.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(r);
            out.push('\n');
        }
        out
    }
}

pub struct Scenario {
    pub name: &'static str,
    pub summary: &'static str,
    run: fn(&Params) -> Result<Table>,
}

pub const SCENARIOS: &[Scenario] = &[
    Scenario { name: "kl-identity", summary: "stepwise vs block d_n on random Markov pairs", run: scenarios::kl_identity },
    Scenario { name: "laplace", summary: "Laplace predictor against Bernoulli sources", run: scenarios::laplace },
    Scenario { name: "bernoulli-mixture", summary: "rational-grid Bernoulli mixture and its bound", run: scenarios::bernoulli_mixture },
    Scenario { name: "weights-matter", summary: "quadratic vs geometric weights on zeros-then-ones", run: scenarios::weights_matter },
    Scenario { name: "sparse-deterministic", summary: "sparse-zero deterministic class vs 1/(t+1) predictor", run: scenarios::sparse_deterministic },
    Scenario { name: "stationary-mixture", summary: "double mixture over Markov orders and grids", run: scenarios::stationary_mixture },
    Scenario { name: "nml-negative", summary: "NML conditionals with negative divergence", run: scenarios::nml_negative },
    Scenario { name: "nml-normalizers", summary: "NML normalizers c_n for several classes", run: scenarios::nml_normalizers },
    Scenario { name: "nml-bound", summary: "redundancy of the NML predictor vs its bound", run: scenarios::nml_bound },
    Scenario { name: "capacity", summary: "Blahut-Arimoto vs minimax, capacity growth and sandwich", run: scenarios::capacity },
    Scenario { name: "capacity-predictor", summary: "redundancy of the capacity predictor", run: scenarios::capacity_predictor },
    Scenario { name: "cover", summary: "greedy covers, nu and the regularizer", run: scenarios::cover },
];

pub fn scenario_names() -> Vec<&'static str> {
    SCENARIOS.iter().map(|s| s.name).collect()
}

#[derive(Debug, Clone)]
pub struct ScenarioReport {
    pub name: String,
    /// `None` when the scenario aborted with an error.
    pub table: Option<Table>,
    pub failures: Vec<String>,
    pub elapsed: Duration,
}

impl ScenarioReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn status(&self) -> &'static str {
        match (&self.table, self.passed()) {
            (None, _) => "error",
            (_, true) => "pass",
            (_, false) => "fail",
        }
    }
}

/// Run one scenario; errors inside it become failures of the report.
pub fn run_scenario(name: &str, params: &Params) -> Result<ScenarioReport> {
    let scenario = SCENARIOS
        .iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::Domain(format!("unknown scenario {name:?}; try --list")))?;
    let start = Instant::now();
    let (table, failures) = match (scenario.run)(params) {
        Ok(t) => {
            let f = t.failures.clone();
            (Some(t), f)
        }
        Err(e) => (None, vec![format!("{name}: {e}")]),
    };
    Ok(ScenarioReport { name: name.to_string(), table, failures, elapsed: start.elapsed() })
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub reports: Vec<ScenarioReport>,
}

impl RunSummary {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(ScenarioReport::passed)
    }

    pub fn failed(&self) -> Vec<&ScenarioReport> {
        self.reports.iter().filter(|r| !r.passed()).collect()
    }

    /// Plain-text table: scenario, status, checks, wall time.
    pub fn manifest(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:<22} {:<6} {:>8} {:>10}", "scenario", "status", "checks", "wall_ms");
        for r in &self.reports {
            let checks = r.table.as_ref().map_or(0, |t| t.checks);
            let _ = writeln!(out, "{:<22} {:<6} {:>8} {:>10}", r.name, r.status(), checks, r.elapsed.as_millis());
        }
        out
    }
}

/// Run the named scenarios (all when `names` is empty), writing
/// `<scenario>.csv` files and the manifest into `out_dir`.
pub fn run_all(out_dir: &Path, names: &[String], params: &Params) -> Result<RunSummary> {
    let selected: Vec<&str> = if names.is_empty() {
        scenario_names()
    } else {
        for n in names {
            if !SCENARIOS.iter().any(|s| s.name == n) {
                return Err(Error::Domain(format!("unknown scenario {n:?}; try --list")));
            }
        }
        names.iter().map(String::as_str).collect()
    };
    fs::create_dir_all(out_dir)?;
    let mut reports = Vec::with_capacity(selected.len());
    for name in selected {
        let report = run_scenario(name, params)?;
        if let Some(t) = &report.table {
            fs::write(out_dir.join(format!("{name}.csv")), t.to_csv())?;
        }
        reports.push(report);
    }
    let summary = RunSummary { reports };
    fs::write(out_dir.join(MANIFEST), summary.manifest())?;
    Ok(summary)
}

/// `members` random laws on `atoms` points, each entry zero with chance 1/5.
pub fn random_member_set<R: Rng>(rng: &mut R, members: usize, atoms: usize) -> Vec<Vec<f64>> {
    (0..members)
        .map(|_| {
            let mut row: Vec<f64> = (0..atoms).map(|_| if rng.gen_bool(0.2) { 0.0 } else { rng.gen::<f64>() }).collect();
            if row.iter().all(|&p| p == 0.0) {
                row[0] = 1.0;
            }
            let total: f64 = row.iter().sum();
            row.iter_mut().for_each(|p| *p /= total);
            row
        })
        .collect()
}

/// A binary order-1 chain with transition probabilities in `[0.02, 0.98]`
/// and a random initial law.
pub fn random_markov1<R: Rng>(rng: &mut R) -> Measure {
    let mut row = || {
        let p: f64 = rng.gen_range(0.02..0.98);
        vec![p, 1.0 - p]
    };
    let table = vec![row(), row()];
    let initial = row();
    Measure::markov(Alphabet::BINARY, 1, table, initial).expect("valid random chain")
}
