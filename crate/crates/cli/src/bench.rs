//! Suite runner. A suite file lists problem files (paths relative to the
//! suite) with parameter sets, and `(β, ℓ, γ)` sweeps over a generated
//! classical-DR family:
//!
//! ```json
//! {
//!   "instances": [{ "problem": "p.json", "params": [{}, { "gamma": 0.5, "classical": true }] }],
//!   "sweeps": [{ "beta": [0.5, 1, 2], "ell": [0.5, 1, 2], "gamma": [1] }],
//!   "samples": 1000
//! }
//! ```
//!
//! Sweep rows use `A` = a skew matrix of norm ℓ (monotone, ℓ-Lipschitz)
//! and `B = βId + c`, run classical DR with κ = ½ and compare the
//! theoretical constants with the sampled contraction of T.

use std::path::{Path, PathBuf};
use std::time::Instant;

use adr_core::oracle::DEFAULT_RADIUS;
use adr_core::rates::{compare_mv18, rate_lipschitz_a, rate_lipschitz_b};
use adr_core::splitting::fmt_float;
use adr_core::{
    estimate_contraction, iterate, rate_classical_dr, select_params, DrParams, IterateOptions, Matrix, OperatorHandle,
    ProblemSpec, Sampler, Vector,
};
use serde::Deserialize;

use crate::error::{CliError, CliResult};
use crate::output::{emit_bytes, load_problem};
use crate::params::ParamArgs;
use crate::solve::checked_params;
use crate::{BenchArgs, Status};

const DEFAULT_SAMPLES: usize = 1000;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Suite {
    #[serde(default)]
    instances: Vec<InstanceEntry>,
    #[serde(default)]
    sweeps: Vec<Sweep>,
    /// Pairs per empirical contraction estimate.
    samples: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceEntry {
    problem: PathBuf,
    /// Parameter sets with the same meaning as the CLI flags; one
    /// automatic set when empty.
    #[serde(default)]
    params: Vec<ParamArgs>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Sweep {
    beta: Vec<f64>,
    ell: Vec<f64>,
    #[serde(default = "unit_gamma")]
    gamma: Vec<f64>,
    #[serde(default = "default_dim")]
    dim: usize,
}

fn unit_gamma() -> Vec<f64> {
    vec![1.0]
}

fn default_dim() -> usize {
    2
}

/// One CSV row; `None` fields are written empty.
#[derive(Default)]
struct Row {
    source: String,
    label: String,
    beta: Option<f64>,
    ell: Option<f64>,
    gamma: Option<f64>,
    kappa: Option<f64>,
    mode: String,
    converged: Option<bool>,
    iterations: Option<usize>,
    iterations_adaptive: Option<usize>,
    rate_variant: String,
    rho: Option<f64>,
    rho_sharp: Option<f64>,
    r: Option<f64>,
    empirical: Option<f64>,
    solution_error: Option<f64>,
    wall_time_ms: f64,
    error: String,
}

const HEADER: [&str; 16] = [
    "row",
    "source",
    "label",
    "beta",
    "ell",
    "gamma",
    "kappa",
    "mode",
    "converged",
    "iterations",
    "iterations_adaptive",
    "rate_variant",
    "rho",
    "rho_sharp",
    "r",
    "empirical",
];

struct Settings {
    tol: f64,
    max_iter: usize,
    seed: u64,
    samples: usize,
}

impl Settings {
    fn options(&self) -> IterateOptions {
        IterateOptions { tol: self.tol, max_iter: self.max_iter, ..Default::default() }
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or(String::new(), |v| v.to_string())
}

fn opt_float(v: Option<f64>) -> String {
    v.map_or(String::new(), fmt_float)
}

fn set_params(row: &mut Row, params: &DrParams) {
    row.gamma = Some(params.gamma);
    row.kappa = Some(params.kappa);
    row.mode = serde_json::to_value(params.mode).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
}

fn instance_row(
    problem: &ProblemSpec,
    args: &ParamArgs,
    settings: &Settings,
    row_seed: u64,
    row: &mut Row,
) -> CliResult<()> {
    let (alpha, beta) = (problem.alpha(), problem.beta());
    row.beta = Some(beta);
    row.ell = problem.op_a.lipschitz();
    let params = checked_params(problem, args)?;
    set_params(row, &params);
    let run = iterate(problem, &params, &Vector::zeros(problem.dim), &settings.options())?;
    row.converged = Some(run.converged);
    row.iterations = Some(run.iterations);
    let lip_a = problem
        .op_a
        .lipschitz()
        .and_then(|ell| rate_lipschitz_a(alpha, beta, ell, &params, problem.op_a.is_equality_class()).ok());
    let lip_b = problem
        .op_b
        .lipschitz()
        .filter(|_| problem.op_b.is_linear())
        .and_then(|ell| rate_lipschitz_b(alpha, beta, ell, &params, true).ok());
    if let Some(report) = [lip_a, lip_b]
        .into_iter()
        .flatten()
        .filter(|r| r.rho.is_some())
        .min_by(|a, b| a.rho.partial_cmp(&b.rho).unwrap())
    {
        row.rate_variant = report.variant.as_str().to_string();
        row.rho = report.rho;
    }
    if run.converged {
        let center = Some(&run.fixed_point);
        row.empirical =
            Some(estimate_contraction(problem, &params, settings.samples, row_seed, DEFAULT_RADIUS, center)?);
    }
    row.solution_error = problem.known_solution.as_ref().map(|x| (x - &run.solution).norm());
    Ok(())
}

fn sweep_problem(beta: f64, ell: f64, dim: usize, seed: u64) -> CliResult<ProblemSpec> {
    let mut rng = Sampler::new(seed);
    let skew = rng.skew_matrix(dim, ell);
    let a = OperatorHandle::skew_plus_alpha(skew, 0.0)?;
    let b = OperatorHandle::affine_matrix(Matrix::identity(dim, dim) * beta, Some(rng.normal_vector(dim)))?;
    Ok(ProblemSpec::new(a, b)?.with_label(format!("classical_dr beta={beta} ell={ell}")))
}

fn sweep_row(
    beta: f64,
    ell: f64,
    gamma: f64,
    dim: usize,
    settings: &Settings,
    row_seed: u64,
    row: &mut Row,
) -> CliResult<()> {
    row.beta = Some(beta);
    row.ell = Some(ell);
    row.gamma = Some(gamma);
    row.rate_variant = "classical_dr".into();
    let problem = sweep_problem(beta, ell, dim, row_seed)?;
    row.label = problem.label.clone();
    let rho = rate_classical_dr(beta, ell, gamma, false)?;
    row.rho = rho.rho;
    row.rho_sharp = rate_classical_dr(beta, ell, gamma, true)?.rho;
    if gamma == 1.0 {
        row.r = Some(compare_mv18(beta, ell)?.r);
    }
    let params = DrParams::classical(gamma, 0.5)?;
    set_params(row, &params);
    let x0 = Vector::zeros(dim);
    let run = iterate(&problem, &params, &x0, &settings.options())?;
    row.converged = Some(run.converged);
    row.iterations = Some(run.iterations);
    let adaptive = select_params(0.0, beta, Some(gamma), 0.5)?;
    let adaptive_run = iterate(&problem, &adaptive, &x0, &settings.options())?;
    row.iterations_adaptive = adaptive_run.converged.then_some(adaptive_run.iterations);
    let center = run.converged.then_some(&run.fixed_point);
    row.empirical = Some(estimate_contraction(&problem, &params, settings.samples, row_seed, DEFAULT_RADIUS, center)?);
    Ok(())
}

fn timed(row: &mut Row, f: impl FnOnce(&mut Row) -> CliResult<()>) {
    let start = Instant::now();
    if let Err(e) = f(row) {
        row.error = e.code;
    }
    row.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
}

fn resolve(suite_path: &Path, problem: &Path) -> PathBuf {
    if problem.is_absolute() {
        problem.to_path_buf()
    } else {
        suite_path.parent().unwrap_or(Path::new(".")).join(problem)
    }
}

pub fn run(args: &BenchArgs) -> CliResult<Status> {
    let text = std::fs::read_to_string(&args.suite).map_err(|e| CliError::io(&args.suite, e))?;
    let suite: Suite = serde_json::from_str(&text).map_err(|e| CliError::new("INVALID_SUITE", e.to_string()))?;
    let settings = Settings {
        tol: args.common.tol,
        max_iter: args.common.max_iter,
        seed: args.common.seed,
        samples: suite.samples.unwrap_or(DEFAULT_SAMPLES),
    };

    let mut rows = Vec::new();
    for entry in &suite.instances {
        let path = resolve(&args.suite, &entry.problem);
        let problem = load_problem(&path);
        let sets = if entry.params.is_empty() { vec![ParamArgs::default()] } else { entry.params.clone() };
        for set in &sets {
            let row_seed = settings.seed.wrapping_add(rows.len() as u64);
            let mut row = Row { source: entry.problem.display().to_string(), ..Default::default() };
            timed(&mut row, |row| {
                let problem = problem.clone()?;
                row.label = problem.label.clone();
                instance_row(&problem, set, &settings, row_seed, row)
            });
            rows.push(row);
        }
    }
    for sweep in &suite.sweeps {
        for &beta in &sweep.beta {
            for &ell in &sweep.ell {
                for &gamma in &sweep.gamma {
                    let row_seed = settings.seed.wrapping_add(rows.len() as u64);
                    let mut row = Row { source: "sweep".into(), ..Default::default() };
                    timed(&mut row, |row| sweep_row(beta, ell, gamma, sweep.dim, &settings, row_seed, row));
                    rows.push(row);
                }
            }
        }
    }

    let with_solution_error = rows.iter().any(|r| r.solution_error.is_some());
    let mut header: Vec<&str> = HEADER.to_vec();
    if with_solution_error {
        header.push("solution_error");
    }
    if !args.omit_timing {
        header.push("wall_time_ms");
    }
    header.push("error");

    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| CliError::new("IO_ERROR", e.to_string());
    w.write_record(&header).map_err(csv_err)?;
    for (i, r) in rows.iter().enumerate() {
        let mut rec = vec![
            i.to_string(),
            r.source.clone(),
            r.label.clone(),
            opt_float(r.beta),
            opt_float(r.ell),
            opt_float(r.gamma),
            opt_float(r.kappa),
            r.mode.clone(),
            opt(r.converged),
            opt(r.iterations),
            opt(r.iterations_adaptive),
            r.rate_variant.clone(),
            opt_float(r.rho),
            opt_float(r.rho_sharp),
            opt_float(r.r),
            opt_float(r.empirical),
        ];
        if with_solution_error {
            rec.push(opt_float(r.solution_error));
        }
        if !args.omit_timing {
            rec.push(format!("{:.3}", r.wall_time_ms));
        }
        rec.push(r.error.clone());
        w.write_record(&rec).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::new("IO_ERROR", e.to_string()))?;
    emit_bytes(&bytes, args.common.out.as_deref())?;
    Ok(Status::Ok)
}
