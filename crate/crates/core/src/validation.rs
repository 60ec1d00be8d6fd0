//! Seeded invariant battery for a problem: operator metadata, resolvent
//! estimates, the metric inequality, Fejér/telescoping behaviour of an
//! actual run, the solution certificate and contraction versus theory.

use serde::Serialize;

use crate::error::Result;
use crate::linalg::Vector;
use crate::oracle::{estimate_contraction, DEFAULT_RADIUS};
use crate::problem::ProblemSpec;
use crate::rates::{check_params, classical_condition, rate_lipschitz_a, rate_lipschitz_b, select_params};
use crate::report::CheckReport;
use crate::resolvents::ResolventEvaluator;
use crate::sampling::Sampler;
use crate::splitting::{
    certify_solution, check_metric_inequality, iterate, reference_fixed_point, DrParams, IterateOptions, Mode,
};

pub const FEJER_TOLERANCE: f64 = 1e-12;
pub const TELESCOPE_TOLERANCE: f64 = 1e-9;
pub const CERTIFICATE_TOLERANCE: f64 = 1e-8;
pub const CONTRACTION_RELATIVE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationOptions {
    pub seed: u64,
    /// Pairs per sampled inequality.
    pub samples: usize,
    /// Pairs for the contraction estimate.
    pub contraction_samples: usize,
    /// Parameters to validate; chosen by [`select_params`] when `None`.
    pub params: Option<DrParams>,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        Self { seed: 0, samples: 1000, contraction_samples: 10_000, params: None, tol: 1e-10, max_iter: 100_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Invariant {
    pub name: String,
    pub passed: bool,
    pub skipped: bool,
    pub worst_margin: f64,
    pub tolerance: f64,
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Invariant {
    fn from_check(name: &str, r: CheckReport) -> Self {
        Self {
            name: name.to_string(),
            passed: r.passed,
            skipped: false,
            worst_margin: r.worst_margin,
            tolerance: r.tolerance,
            samples: r.samples,
            note: r.note,
        }
    }

    fn skipped(name: &str, note: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            passed: true,
            skipped: true,
            worst_margin: 0.0,
            tolerance: 0.0,
            samples: 0,
            note: Some(note.into()),
        }
    }

    fn failed(name: &str, note: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            passed: false,
            skipped: false,
            worst_margin: f64::NEG_INFINITY,
            tolerance: 0.0,
            samples: 0,
            note: Some(note.into()),
        }
    }

    fn margins(name: &str, tolerance: f64, margins: impl IntoIterator<Item = f64>) -> Self {
        let mut r = CheckReport::start(name, tolerance);
        for m in margins {
            r.record(m);
        }
        Self::from_check(name, r.finish())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub label: String,
    pub seed: u64,
    pub params: DrParams,
    pub passed: bool,
    pub invariants: Vec<Invariant>,
}

impl ValidationReport {
    pub fn failing(&self) -> impl Iterator<Item = &Invariant> {
        self.invariants.iter().filter(|i| !i.passed)
    }
}

/// Whether the convergence theorem covers `(problem, params)`, which makes
/// T nonexpansive with a positive residual weight.
pub fn convergence_hypotheses(problem: &ProblemSpec, params: &DrParams) -> bool {
    let (alpha, beta) = (problem.alpha(), problem.beta());
    let adaptive = alpha + beta >= 0.0 && check_params(params, alpha, beta);
    let classical = params.mode == Mode::Classical && classical_condition(alpha, beta, params.gamma, params.kappa);
    adaptive || classical
}

/// Run the battery. Errors only when `params` are unusable (invalid
/// parameters or a resolvent precondition fails); every other problem is
/// reported as a failing invariant.
pub fn run_validation(problem: &ProblemSpec, opts: &ValidationOptions) -> Result<ValidationReport> {
    let params = match opts.params {
        Some(p) => {
            p.validate()?;
            p
        }
        None => select_params(problem.alpha(), problem.beta(), None, 0.5)?,
    };
    let seed = opts.seed;
    let n = opts.samples;
    let mut out = Vec::new();

    for (tag, op) in [("A", &problem.op_a), ("B", &problem.op_b)] {
        let name = format!("monotonicity_{tag}");
        out.push(match op.verify_monotonicity(n, seed) {
            Ok(r) => Invariant::from_check(&name, r),
            Err(e) => Invariant::skipped(&name, e.to_string()),
        });
        let name = format!("operator_lipschitz_{tag}");
        out.push(match op.check_lipschitz(n, seed.wrapping_add(1)) {
            Ok(r) => Invariant::from_check(&name, r),
            Err(e) => Invariant::skipped(&name, e.to_string()),
        });
    }

    let j1 = ResolventEvaluator::new(&problem.op_a, params.gamma)?;
    let j2 = ResolventEvaluator::new(&problem.op_b, params.delta)?;
    for (tag, ev) in [("J1", &j1), ("J2", &j2)] {
        let c = ev.check_cocoercivity(n, seed.wrapping_add(2));
        out.push(Invariant::from_check(&format!("cocoercivity_inner_{tag}"), c.inner));
        out.push(Invariant::from_check(&format!("cocoercivity_norm_{tag}"), c.norm));
        match ev.check_lipschitz_resolvent(n, seed.wrapping_add(3)) {
            Ok(r) => {
                out.push(Invariant::from_check(&format!("resolvent_expansion_{tag}"), r.expansion));
                out.push(Invariant::from_check(&format!("resolvent_quadratic_{tag}"), r.quadratic));
                out.push(Invariant::from_check(&format!("resolvent_strong_monotonicity_{tag}"), r.strong_monotonicity));
            }
            Err(e) => out.push(Invariant::skipped(&format!("resolvent_lipschitz_{tag}"), e.to_string())),
        }
    }

    out.push(Invariant::from_check(
        "metric_inequality",
        check_metric_inequality(problem, &params, n, seed.wrapping_add(4)),
    ));

    run_invariants(problem, &params, opts, &mut out)?;
    contraction_invariant(problem, &params, opts, &mut out)?;

    Ok(ValidationReport {
        label: problem.label.clone(),
        seed,
        params,
        passed: out.iter().all(|i| i.passed),
        invariants: out,
    })
}

fn run_invariants(
    problem: &ProblemSpec,
    params: &DrParams,
    opts: &ValidationOptions,
    out: &mut Vec<Invariant>,
) -> Result<()> {
    let hypotheses = convergence_hypotheses(problem, params);
    let x0 = Sampler::derive(opts.seed, 7).normal_vector(problem.dim) * 5.0;
    let y = reference_fixed_point(problem, params, &x0, opts.max_iter.max(1) * 2)?;
    let run_opts =
        IterateOptions { tol: opts.tol, max_iter: opts.max_iter, reference: Some(y.clone()), ..Default::default() };
    let run = iterate(problem, params, &x0, &run_opts)?;
    let r = &run.trace.residuals;
    let d = run.trace.fejer_distances.as_ref().expect("reference supplied");
    let kappa_mu = params.kappa * params.mu;

    out.push(Invariant::margins(
        "shadow_identity",
        1e-10,
        r.iter().zip(&run.trace.shadow_gaps).map(|(r, g)| -(r - kappa_mu * g).abs() / (1.0 + r)),
    ));

    if !hypotheses {
        for name in ["fejer_monotonicity", "residual_monotonicity", "telescoping_bound"] {
            out.push(Invariant::skipped(name, "parameters outside the convergence theorem"));
        }
    } else {
        out.push(Invariant::margins("fejer_monotonicity", FEJER_TOLERANCE, d.windows(2).map(|w| w[0] - w[1])));
        out.push(Invariant::margins("residual_monotonicity", FEJER_TOLERANCE, r.windows(2).map(|w| w[0] - w[1])));
        let weight = params.weights(problem.alpha(), problem.beta()).residual_weight;
        let mut partial = 0.0;
        let bound = (&x0 - &y).norm_squared();
        out.push(Invariant::margins(
            "telescoping_bound",
            TELESCOPE_TOLERANCE,
            r.iter().map(|r| {
                partial += weight * r * r;
                bound - partial
            }),
        ));
    }

    out.push(if run.converged {
        let cert = certify_solution(problem, params, &run.fixed_point, CERTIFICATE_TOLERANCE)?;
        let worst = cert.fixed_point_residual.max(cert.inclusion_residual.unwrap_or(0.0));
        Invariant {
            name: "certificate".into(),
            passed: cert.passed,
            skipped: false,
            worst_margin: CERTIFICATE_TOLERANCE - worst,
            tolerance: 0.0,
            samples: 1,
            note: None,
        }
    } else {
        Invariant::failed(
            "certificate",
            format!("no convergence within {} iterations (residual {:e})", opts.max_iter, run.final_residual),
        )
    });
    Ok(())
}

/// Compare the empirical contraction of T against the first applicable
/// rate theorem (Lipschitz A, then linear Lipschitz B).
fn contraction_invariant(
    problem: &ProblemSpec,
    params: &DrParams,
    opts: &ValidationOptions,
    out: &mut Vec<Invariant>,
) -> Result<()> {
    let (alpha, beta) = (problem.alpha(), problem.beta());
    let rate_a = problem
        .op_a
        .lipschitz()
        .filter(|_| problem.op_a.supports_forward())
        .and_then(|ell| rate_lipschitz_a(alpha, beta, ell, params, problem.op_a.is_equality_class()).ok());
    let rate_b = || {
        problem
            .op_b
            .lipschitz()
            .filter(|_| problem.op_b.affine_parts().is_some())
            .and_then(|ell| rate_lipschitz_b(alpha, beta, ell, params, true).ok())
    };
    let Some(rho) = rate_a.or_else(rate_b).and_then(|r| r.rho) else {
        out.push(Invariant::skipped("contraction_vs_rate", "no linear-rate theorem applies"));
        return Ok(());
    };
    let est = estimate_contraction(
        problem,
        params,
        opts.contraction_samples,
        opts.seed.wrapping_add(5),
        DEFAULT_RADIUS,
        None,
    )?;
    out.push(Invariant {
        name: "contraction_vs_rate".into(),
        passed: est <= rho * (1.0 + CONTRACTION_RELATIVE_TOLERANCE),
        skipped: false,
        worst_margin: rho - est,
        tolerance: rho * CONTRACTION_RELATIVE_TOLERANCE,
        samples: opts.contraction_samples,
        note: Some(format!("empirical {est:.12} vs rho {rho:.12}")),
    });
    Ok(())
}

/// Demo problem used when no problem file is given: a skew-plus-identity
/// `A` (α = 1, equality class) and a weakly convex quadratic `B`
/// (β = −½) on R³ with a nonzero solution.
pub fn demo_problem() -> ProblemSpec {
    use crate::linalg::Matrix;
    use crate::operators::OperatorHandle;
    let s = Matrix::from_row_slice(3, 3, &[0.0, 1.0, -0.5, -1.0, 0.0, 2.0, 0.5, -2.0, 0.0]);
    let a = OperatorHandle::affine_skew_plus_alpha(s, 1.0, Some(Vector::from_row_slice(&[1.0, -2.0, 0.5])))
        .expect("valid skew payload");
    let q = Matrix::from_row_slice(3, 3, &[-0.5, 0.0, 0.0, 0.0, 0.25, 0.0, 0.0, 0.0, 1.0]);
    let b = OperatorHandle::prox_quadratic(q, Vector::zeros(3)).expect("symmetric");
    ProblemSpec::new(a, b).expect("matching dimensions").with_label("demo")
}
