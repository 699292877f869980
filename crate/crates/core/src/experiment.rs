//! Batch verification of the sufficient conditions and the sharpness family.
//!
//! Config is `key = value` text, one key per line, lists comma-separated:
//!
//! ```text
//! seed = 7
//! n = 12, 14
//! r = 3, 4
//! instances = 5          # per (n, r) cell
//! min_lambda = 1         # resample instances below this connectivity
//! max_b = 5              # default spec grid: 1 <= a <= b < r, a ≡ b, b <= max_b
//! specs = 1:1, 2:2       # optional explicit (a, b) list instead
//! petersen = true        # add the Petersen graph
//! extremal_r = 4, 6
//! extremal_m = 2
//! extremal_specs = 1:1   # default: every odd a <= b with b*m < r
//! ```

use std::fmt::Write as _;

use rayon::prelude::*;
use thiserror::Error;

use crate::conditions::{check_main_conditions, ConditionReport};
use crate::connectivity::edge_connectivity;
use crate::deficiency::{deficiency, verify_witness};
use crate::factor::{find_infeasibility_witness, find_parity_factor, verify_factor, Solution, SolverError};
use crate::generators::{
    extremal_construction, petersen, random_regular, seed_stream, ExtremalGraph, ExtremalParams, GeneratorError,
    DEFAULT_MAX_ATTEMPTS,
};
use crate::graph::{Graph, VertexSet};
use crate::parity::ParitySpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExperimentError {
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("counterexample at {context}: {message}\n--- instance ---\n{instance}")]
    Counterexample { context: String, message: String, instance: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub orders: Vec<usize>,
    pub degrees: Vec<usize>,
    pub instances: usize,
    pub min_lambda: usize,
    pub max_b: usize,
    pub specs: Option<Vec<(usize, usize)>>,
    pub petersen: bool,
    pub extremal_r: Vec<usize>,
    pub extremal_m: Vec<usize>,
    pub extremal_specs: Option<Vec<(usize, usize)>>,
    pub max_attempts: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            seed: 0,
            orders: Vec::new(),
            degrees: Vec::new(),
            instances: 1,
            min_lambda: 0,
            max_b: 5,
            specs: None,
            petersen: false,
            extremal_r: Vec::new(),
            extremal_m: Vec::new(),
            extremal_specs: None,
            max_attempts: DEFAULT_MAX_ATTEMPTS,
        }
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, ExperimentError> {
        let mut cfg = ExperimentConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let err = |message: String| ExperimentError::Config { line, message };
            let (key, value) =
                body.split_once('=').ok_or_else(|| err(format!("expected key = value, got {body:?}")))?;
            let value = value.trim();
            let num = |v: &str| v.trim().parse::<u64>().map_err(|_| err(format!("invalid number {v:?}")));
            let list = |v: &str| -> Result<Vec<usize>, ExperimentError> {
                v.split(',').filter(|s| !s.trim().is_empty()).map(|s| num(s).map(|x| x as usize)).collect()
            };
            let pairs = |v: &str| -> Result<Vec<(usize, usize)>, ExperimentError> {
                v.split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| {
                        let (a, b) = s.split_once(':').ok_or_else(|| err(format!("expected a:b, got {s:?}")))?;
                        Ok((num(a)? as usize, num(b)? as usize))
                    })
                    .collect()
            };
            match key.trim() {
                "seed" => cfg.seed = num(value)?,
                "n" => cfg.orders = list(value)?,
                "r" => cfg.degrees = list(value)?,
                "instances" => cfg.instances = num(value)? as usize,
                "min_lambda" => cfg.min_lambda = num(value)? as usize,
                "max_b" => cfg.max_b = num(value)? as usize,
                "specs" => cfg.specs = Some(pairs(value)?),
                "petersen" => {
                    cfg.petersen = value.parse().map_err(|_| err(format!("expected true/false, got {value:?}")))?
                }
                "extremal_r" => cfg.extremal_r = list(value)?,
                "extremal_m" => cfg.extremal_m = list(value)?,
                "extremal_specs" => cfg.extremal_specs = Some(pairs(value)?),
                "max_attempts" => cfg.max_attempts = num(value)? as usize,
                other => return Err(err(format!("unknown key {other:?}"))),
            }
        }
        Ok(cfg)
    }

    /// Constant specs tried on an `r`-regular instance.
    fn specs_for(&self, r: usize) -> Vec<(usize, usize)> {
        let valid = |&(a, b): &(usize, usize)| 1 <= a && a <= b && b < r && (b - a) % 2 == 0;
        match &self.specs {
            Some(list) => list.iter().copied().filter(valid).collect(),
            None => (1..r)
                .flat_map(|a| (a..r).map(move |b| (a, b)))
                .filter(|&(a, b)| b <= self.max_b && valid(&(a, b)))
                .collect(),
        }
    }

    fn extremal_specs_for(&self, p: ExtremalParams) -> Vec<(usize, usize)> {
        let (r, m) = (p.r(), p.m());
        let valid = |&(a, b): &(usize, usize)| a % 2 == 1 && a <= b && (b - a) % 2 == 0 && b * m < r;
        match &self.extremal_specs {
            Some(list) => list.iter().copied().filter(valid).collect(),
            None => (1..r).step_by(2).flat_map(|a| (a..r).step_by(2).map(move |b| (a, b))).filter(valid).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Found,
    Infeasible,
}

impl Outcome {
    pub fn label(self) -> &'static str {
        match self {
            Outcome::Found => "found",
            Outcome::Infeasible => "infeasible",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    /// `None` for fixed instances (Petersen, sharpness family).
    pub seed: Option<u64>,
    pub kind: &'static str,
    pub n: usize,
    pub r: usize,
    pub lambda: usize,
    pub a: usize,
    pub b: usize,
    /// Satisfied cases joined by `+`, or `-`.
    pub case: String,
    pub covered: bool,
    pub outcome: Outcome,
    pub delta: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ExperimentReport {
    pub rows: Vec<Row>,
    pub instances: usize,
}

impl ExperimentReport {
    pub fn covered(&self) -> usize {
        self.rows.iter().filter(|r| r.covered && r.kind != "extremal").count()
    }

    pub fn covered_found(&self) -> usize {
        self.rows.iter().filter(|r| r.covered && r.kind != "extremal" && r.outcome == Outcome::Found).count()
    }

    pub fn extremal_rows(&self) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(|r| r.kind == "extremal")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("seed,n,r,lambda,a,b,case,outcome,delta\n");
        for row in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                seed_label(row.seed),
                row.n,
                row.r,
                row.lambda,
                row.a,
                row.b,
                row.case,
                row.outcome.label(),
                row.delta.map(|d| d.to_string()).unwrap_or_default()
            );
        }
        out
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<20} {:<9} {:>4} {:>3} {:>6} {:>3} {:>3} {:<28} {:<10} {:>6}",
            "seed", "kind", "n", "r", "lambda", "a", "b", "case", "outcome", "delta"
        );
        for row in &self.rows {
            let _ = writeln!(
                out,
                "{:<20} {:<9} {:>4} {:>3} {:>6} {:>3} {:>3} {:<28} {:<10} {:>6}",
                seed_label(row.seed),
                row.kind,
                row.n,
                row.r,
                row.lambda,
                row.a,
                row.b,
                row.case,
                row.outcome.label(),
                row.delta.map(|d| d.to_string()).unwrap_or_else(|| "-".into())
            );
        }
        let extremal: Vec<&Row> = self.extremal_rows().collect();
        let _ = writeln!(
            out,
            "instances: {}  rows: {}  covered: {}  covered found: {}  sharpness infeasible: {}/{}",
            self.instances,
            self.rows.len(),
            self.covered(),
            self.covered_found(),
            extremal.iter().filter(|r| r.outcome == Outcome::Infeasible).count(),
            extremal.len()
        );
        out
    }
}

fn seed_label(seed: Option<u64>) -> String {
    seed.map(|s| s.to_string()).unwrap_or_else(|| "-".into())
}

enum Job {
    Random { n: usize, r: usize, seed: u64 },
    Petersen,
    Extremal(ExtremalParams),
}

pub fn run_verification_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport, ExperimentError> {
    let mut jobs = Vec::new();
    let mut seeds = seed_stream(cfg.seed);
    for &n in &cfg.orders {
        for &r in &cfg.degrees {
            if (n * r) % 2 == 1 || r >= n {
                continue;
            }
            for _ in 0..cfg.instances {
                jobs.push(Job::Random { n, r, seed: seeds.next().expect("endless stream") });
            }
        }
    }
    if cfg.petersen {
        jobs.push(Job::Petersen);
    }
    for &r in &cfg.extremal_r {
        for &m in &cfg.extremal_m {
            if let Ok(p) = ExtremalParams::new(r, m) {
                jobs.push(Job::Extremal(p));
            }
        }
    }
    let results: Vec<Result<Vec<Row>, ExperimentError>> = jobs.par_iter().map(|job| run_job(cfg, job)).collect();
    let mut report = ExperimentReport { rows: Vec::new(), instances: jobs.len() };
    for result in results {
        report.rows.extend(result?);
    }
    Ok(report)
}

fn run_job(cfg: &ExperimentConfig, job: &Job) -> Result<Vec<Row>, ExperimentError> {
    match *job {
        Job::Random { n, r, seed } => {
            let (graph, seed) = sample_instance(cfg, n, r, seed)?;
            let specs = cfg.specs_for(r);
            check_instance(&graph, Some(seed), "random", &specs)
        }
        Job::Petersen => {
            let graph = petersen();
            check_instance(&graph, None, "petersen", &cfg.specs_for(3))
        }
        Job::Extremal(p) => {
            let x = extremal_construction(p);
            let sharp = cfg.extremal_specs_for(p);
            let mut rows = check_extremal(p, &x, &sharp)?;
            // The remaining specs are ordinary instances with lambda = m < r.
            let rest: Vec<(usize, usize)> = cfg.specs_for(p.r()).into_iter().filter(|s| !sharp.contains(s)).collect();
            rows.extend(check_instance(&x.graph, None, "blocks", &rest)?);
            Ok(rows)
        }
    }
}

/// Draws an instance; below `min_lambda` it redraws from a stream seeded by `seed`.
fn sample_instance(cfg: &ExperimentConfig, n: usize, r: usize, seed: u64) -> Result<(Graph, u64), ExperimentError> {
    let mut candidates = std::iter::once(seed).chain(seed_stream(seed));
    for _ in 0..1000 {
        let s = candidates.next().expect("endless stream");
        let g = random_regular(n, r, s, cfg.max_attempts)?;
        if cfg.min_lambda == 0 || measured_lambda(&g) >= cfg.min_lambda {
            return Ok((g, s));
        }
    }
    Err(GeneratorError::RetriesExhausted { attempts: 1000 }.into())
}

fn measured_lambda(g: &Graph) -> usize {
    edge_connectivity(g).map(|(l, _)| l).unwrap_or(0)
}

/// Conditions evaluated at the measured connectivity; `None` when `lambda = 0`.
pub fn conditions_at(g: &Graph, a: usize, b: usize) -> Option<ConditionReport> {
    let r = g.regularity()?;
    let lambda = measured_lambda(g);
    if lambda == 0 {
        return None;
    }
    check_main_conditions(r, lambda, a, b, g.order() % 2 == 0).ok()
}

fn check_instance(
    g: &Graph,
    seed: Option<u64>,
    kind: &'static str,
    specs: &[(usize, usize)],
) -> Result<Vec<Row>, ExperimentError> {
    let r = g.regularity().unwrap_or(0);
    let lambda = measured_lambda(g);
    let mut rows = Vec::with_capacity(specs.len());
    for &(a, b) in specs {
        let report = if lambda > 0 { check_main_conditions(r, lambda, a, b, g.order() % 2 == 0).ok() } else { None };
        let covered = report.as_ref().is_some_and(ConditionReport::any);
        let case = report.as_ref().map(ConditionReport::case_label).unwrap_or_else(|| "-".into());
        let spec = ParitySpec::constant(a, b, g.order()).expect("specs are filtered");
        let context = || format!("seed={} a={a} b={b} case={case}", seed_label(seed));
        let (outcome, delta) = match find_parity_factor(g, &spec)? {
            Solution::Found(f) => {
                if let Err(v) = verify_factor(g, &spec, &f) {
                    return Err(counterexample(context(), format!("solver output rejected: {v}"), g));
                }
                (Outcome::Found, None)
            }
            Solution::Infeasible => {
                if covered {
                    return Err(counterexample(context(), "no factor although a case holds".into(), g));
                }
                let witness = find_infeasibility_witness(g, &spec, 0)?;
                let delta = witness.filter(|w| verify_witness(g, &spec, w).is_ok()).map(|w| w.delta);
                (Outcome::Infeasible, delta)
            }
        };
        rows.push(Row { seed, kind, n: g.order(), r, lambda, a, b, case, covered, outcome, delta });
    }
    Ok(rows)
}

fn check_extremal(p: ExtremalParams, x: &ExtremalGraph, specs: &[(usize, usize)]) -> Result<Vec<Row>, ExperimentError> {
    let g = &x.graph;
    let (r, m) = (p.r(), p.m());
    let lambda = measured_lambda(g);
    let mut rows = Vec::new();
    for &(a, b) in specs {
        let context = || format!("extremal r={r} m={m} a={a} b={b}");
        if lambda != m {
            return Err(counterexample(context(), format!("measured lambda {lambda}, expected {m}"), g));
        }
        let spec = ParitySpec::constant(a, b, g.order()).expect("odd a <= b");
        if find_parity_factor(g, &spec)?.is_found() {
            return Err(counterexample(context(), "solver found a factor".into(), g));
        }
        let w = deficiency(g, &spec, &x.hubs, &VertexSet::empty()).expect("hubs are in range");
        let expected = (b * m) as i64 - r as i64;
        if w.delta != expected || w.tau != r || verify_witness(g, &spec, &w).is_err() {
            return Err(counterexample(
                context(),
                format!("hub witness delta {} tau {}, expected {expected} and {r}", w.delta, w.tau),
                g,
            ));
        }
        let report = check_main_conditions(r, lambda, a, b, g.order() % 2 == 0).ok();
        let covered = report.as_ref().is_some_and(ConditionReport::any);
        if covered {
            return Err(counterexample(context(), "a sufficient condition holds on a sharpness instance".into(), g));
        }
        rows.push(Row {
            seed: None,
            kind: "extremal",
            n: g.order(),
            r,
            lambda,
            a,
            b,
            case: "-".into(),
            covered,
            outcome: Outcome::Infeasible,
            delta: Some(w.delta),
        });
    }
    Ok(rows)
}

fn counterexample(context: String, message: String, g: &Graph) -> ExperimentError {
    ExperimentError::Counterexample { context, message, instance: g.to_text() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_config() {
        let cfg = ExperimentConfig::parse(
            "# grid\nseed = 9\nn = 10, 12\nr=3\ninstances = 2\nspecs = 1:1, 2:2\npetersen = true\n\
             extremal_r = 4,6\nextremal_m = 2\n",
        )
        .unwrap();
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.orders, vec![10, 12]);
        assert_eq!(cfg.specs, Some(vec![(1, 1), (2, 2)]));
        assert!(cfg.petersen);
        assert!(matches!(ExperimentConfig::parse("seed = x\n"), Err(ExperimentError::Config { line: 1, .. })));
        assert!(matches!(ExperimentConfig::parse("\nbogus = 1\n"), Err(ExperimentError::Config { line: 2, .. })));
    }

    #[test]
    fn default_spec_grid() {
        let cfg = ExperimentConfig::default();
        assert_eq!(cfg.specs_for(4), vec![(1, 1), (1, 3), (2, 2), (3, 3)]);
        let p = ExtremalParams::new(8, 2).unwrap();
        assert_eq!(cfg.extremal_specs_for(p), vec![(1, 1), (1, 3), (3, 3)]);
    }

    #[test]
    fn petersen_row() {
        let cfg = ExperimentConfig { petersen: true, specs: Some(vec![(1, 1)]), ..Default::default() };
        let report = run_verification_experiment(&cfg).unwrap();
        assert_eq!(report.rows.len(), 1);
        let row = &report.rows[0];
        assert_eq!(row.lambda, 3);
        assert!(row.case.contains("Main-iii"));
        assert_eq!(row.outcome, Outcome::Found);
    }
}
