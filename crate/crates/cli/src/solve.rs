use std::fs::File;
use std::io::BufWriter;

use adr_core::linalg::{serialize_vector, Vector};
use adr_core::splitting::reference_fixed_point;
use adr_core::validation::{convergence_hypotheses, CERTIFICATE_TOLERANCE};
use adr_core::{certify_solution, iterate, Certificate, DrParams, Error, IterateOptions, ProblemSpec};
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::output::{emit_json, load_problem};
use crate::{SolveArgs, Status};

#[derive(Serialize)]
struct SolveReport<'a> {
    status: &'static str,
    label: &'a str,
    dim: usize,
    alpha: f64,
    beta: f64,
    params: DrParams,
    param_source: &'static str,
    converged: bool,
    iterations: usize,
    final_residual: f64,
    #[serde(serialize_with = "serialize_vector")]
    solution: &'a Vector,
    #[serde(serialize_with = "serialize_vector")]
    fixed_point: &'a Vector,
    #[serde(skip_serializing_if = "Option::is_none")]
    solution_error: Option<f64>,
    certificate: Certificate,
    residuals: &'a [f64],
}

/// Parameters for `problem`, refusing any that fall outside the
/// convergence theorem.
pub fn checked_params(problem: &ProblemSpec, args: &crate::params::ParamArgs) -> CliResult<DrParams> {
    let params = args.resolve(problem.alpha(), problem.beta())?;
    if !convergence_hypotheses(problem, &params) {
        return Err(Error::InfeasibleParameters(format!(
            "parameters {params:?} do not satisfy the convergence conditions for α = {}, β = {}",
            problem.alpha(),
            problem.beta()
        ))
        .into());
    }
    Ok(params)
}

pub fn run(args: &SolveArgs) -> CliResult<Status> {
    let problem = load_problem(&args.problem)?;
    let params = checked_params(&problem, &args.params)?;
    let x0 = Vector::zeros(problem.dim);
    let opts = IterateOptions {
        tol: args.common.tol,
        max_iter: args.common.max_iter,
        record_points: args.trace.is_some(),
        ..Default::default()
    };
    let mut result = iterate(&problem, &params, &x0, &opts)?;
    let certificate = certify_solution(&problem, &params, &result.fixed_point, CERTIFICATE_TOLERANCE)?;

    if let Some(path) = &args.trace {
        if result.converged {
            // Distances to a tighter fixed point started from the limit.
            let y = reference_fixed_point(&problem, &params, &result.fixed_point, args.common.max_iter)?;
            let points = result.trace.points.as_ref().expect("points recorded");
            result.trace.fejer_distances = Some(points.iter().map(|p| (&p.x - &y).norm()).collect());
        }
        let file = File::create(path).map_err(|e| CliError::io(path, e))?;
        result.trace.write_csv(BufWriter::new(file), true)?;
    }

    let report = SolveReport {
        status: if result.converged { "converged" } else { "max_iter_exceeded" },
        label: &problem.label,
        dim: problem.dim,
        alpha: problem.alpha(),
        beta: problem.beta(),
        params,
        param_source: if args.params.is_manual() { "manual" } else { "auto" },
        converged: result.converged,
        iterations: result.iterations,
        final_residual: result.final_residual,
        solution: &result.solution,
        fixed_point: &result.fixed_point,
        solution_error: problem.known_solution.as_ref().map(|x| (x - &result.solution).norm()),
        certificate,
        residuals: &result.trace.residuals,
    };
    emit_json(&report, args.common.out.as_deref())?;
    Ok(if result.converged { Status::Ok } else { Status::BudgetExhausted })
}
