use adr_core::validation::demo_problem;
use adr_core::{run_validation, ValidationOptions};

use crate::error::CliResult;
use crate::output::{emit_json, load_problem};
use crate::{Status, ValidateArgs};

pub fn run(args: &ValidateArgs) -> CliResult<Status> {
    let problem = match &args.problem {
        Some(path) => load_problem(path)?,
        None => demo_problem(),
    };
    let params = if args.params.is_manual() || args.params.gamma.is_some() || args.params.kappa.is_some() {
        Some(args.params.resolve(problem.alpha(), problem.beta())?)
    } else {
        None
    };
    let opts = ValidationOptions {
        seed: args.common.seed,
        params,
        tol: args.common.tol,
        max_iter: args.common.max_iter,
        ..Default::default()
    };
    let report = run_validation(&problem, &opts)?;
    emit_json(&report, args.common.out.as_deref())?;
    Ok(if report.passed { Status::Ok } else { Status::ValidationFailed })
}
