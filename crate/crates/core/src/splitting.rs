//! The adaptive DR operator `T = (1−κ)Id + κR₂R₁`, its fixed-point
//! iteration, and extraction of a zero of `A + B` from a fixed point.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, ParamCode, Result};
use crate::linalg::Vector;
use crate::problem::ProblemSpec;
use crate::report::CheckReport;
use crate::resolvents::ResolventEvaluator;
use crate::sampling::Sampler;

/// Absolute tolerance on `(λ−1)(μ−1) = 1`; `δ = (λ−1)γ` uses it scaled by γ.
pub const CQ_TOLERANCE: f64 = 1e-12;
/// Slack for the sampled metric inequality, scaled by `1 + ‖x−y‖²`.
pub const METRIC_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Adaptive,
    Classical,
}

/// Step sizes `γ, δ`, relaxations `λ, μ` and averaging weight `κ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DrParams {
    pub gamma: f64,
    pub delta: f64,
    pub lambda: f64,
    pub mu: f64,
    pub kappa: f64,
    pub mode: Mode,
}

impl DrParams {
    /// `λ = μ = 2`, `δ = γ`.
    pub fn classical(gamma: f64, kappa: f64) -> Result<Self> {
        let p = Self { gamma, delta: gamma, lambda: 2.0, mu: 2.0, kappa, mode: Mode::Classical };
        p.validate()?;
        Ok(p)
    }

    /// Given γ and μ, sets `λ = μ/(μ−1)` and `δ = (λ−1)γ`.
    pub fn adaptive(gamma: f64, mu: f64, kappa: f64) -> Result<Self> {
        let lambda = 1.0 + 1.0 / (mu - 1.0);
        let p = Self { gamma, delta: (lambda - 1.0) * gamma, lambda, mu, kappa, mode: Mode::Adaptive };
        p.validate()?;
        Ok(p)
    }

    pub fn manual(gamma: f64, delta: f64, lambda: f64, mu: f64, kappa: f64, mode: Mode) -> Result<Self> {
        let p = Self { gamma, delta, lambda, mu, kappa, mode };
        p.validate()?;
        Ok(p)
    }

    /// Checks, in order: κ ∈ (0,1); γ, δ > 0; λ, μ > 1; the coupling
    /// `(λ−1)(μ−1) = 1`, `δ = (λ−1)γ`; and, in classical mode,
    /// `λ = μ = 2`, `γ = δ`.
    pub fn validate(&self) -> Result<()> {
        let fail = |code, message: String| Err(Error::InvalidParams { code, message });
        let Self { gamma, delta, lambda, mu, kappa, mode } = *self;
        if !(kappa > 0.0 && kappa < 1.0) {
            return fail(ParamCode::KappaRange, format!("κ = {kappa} is outside (0, 1)"));
        }
        if !(gamma > 0.0 && gamma.is_finite() && delta > 0.0 && delta.is_finite()) {
            return fail(ParamCode::NonpositiveStep, format!("γ = {gamma}, δ = {delta} must be positive and finite"));
        }
        if !(lambda > 1.0 && lambda.is_finite() && mu > 1.0 && mu.is_finite()) {
            return fail(ParamCode::RelaxationRange, format!("λ = {lambda}, μ = {mu} must exceed 1"));
        }
        let product = (lambda - 1.0) * (mu - 1.0) - 1.0;
        let coupling = delta - (lambda - 1.0) * gamma;
        if product.abs() > CQ_TOLERANCE || coupling.abs() > CQ_TOLERANCE * gamma {
            return fail(ParamCode::CqViolated, format!("(λ−1)(μ−1) − 1 = {product:e}, δ − (λ−1)γ = {coupling:e}"));
        }
        if mode == Mode::Classical && (lambda != 2.0 || mu != 2.0 || gamma != delta) {
            return fail(
                ParamCode::ClassicalMismatch,
                format!(
                    "classical mode needs λ = μ = 2 and γ = δ, got λ = {lambda}, μ = {mu}, γ = {gamma}, δ = {delta}"
                ),
            );
        }
        Ok(())
    }

    /// Coefficients of the metric inequality for an α-monotone `A` and a
    /// β-monotone `B`.
    pub fn weights(&self, alpha: f64, beta: f64) -> MetricWeights {
        let Self { gamma, mu, kappa, .. } = *self;
        let w1 = (1.0 - kappa) / kappa;
        let w2 = kappa * mu * (2.0 + 2.0 * gamma * alpha - mu);
        let w3 = kappa * mu * (mu - (2.0 - 2.0 * gamma * beta));
        let w2p = if w2 == 0.0 && w3 == 0.0 { 0.0 } else { w2 * w3 / (w2 + w3) };
        MetricWeights { w1, w2, w3, w2_prime: w2p, residual_weight: w1 + w2p / (kappa * kappa * mu * mu) }
    }
}

/// `ω₁ = (1−κ)/κ`, `ω₂ = κμ(2+2γα−μ)`, `ω₃ = κμ(μ−(2−2γβ))`,
/// `ω₂' = ω₂ω₃/(ω₂+ω₃)` and the residual weight `ω₁ + ω₂'/(κ²μ²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricWeights {
    pub w1: f64,
    pub w2: f64,
    pub w3: f64,
    pub w2_prime: f64,
    pub residual_weight: f64,
}

/// Intermediate points of one application of T.
#[derive(Debug, Clone, PartialEq)]
pub struct DrStep {
    pub tx: Vector,
    /// `J₁x`.
    pub shadow1: Vector,
    /// `R₁x`.
    pub reflected: Vector,
    /// `J₂R₁x`.
    pub shadow2: Vector,
    /// `‖x − Tx‖`.
    pub residual: f64,
}

/// T with both resolvents factorized once.
#[derive(Debug, Clone)]
pub struct DrOperator {
    j1: ResolventEvaluator,
    j2: ResolventEvaluator,
    params: DrParams,
}

impl DrOperator {
    pub fn new(problem: &ProblemSpec, params: &DrParams) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            j1: ResolventEvaluator::new(&problem.op_a, params.gamma)?,
            j2: ResolventEvaluator::new(&problem.op_b, params.delta)?,
            params: *params,
        })
    }

    pub fn params(&self) -> &DrParams {
        &self.params
    }

    pub fn j1(&self) -> &ResolventEvaluator {
        &self.j1
    }

    pub fn j2(&self) -> &ResolventEvaluator {
        &self.j2
    }

    pub fn step(&self, x: &Vector) -> Result<DrStep> {
        let DrParams { lambda, mu, kappa, .. } = self.params;
        let shadow1 = self.j1.resolve(x)?;
        let reflected = x * (1.0 - lambda) + &shadow1 * lambda;
        let shadow2 = self.j2.resolve(&reflected)?;
        let r2 = &reflected * (1.0 - mu) + &shadow2 * mu;
        let tx = x * (1.0 - kappa) + r2 * kappa;
        let residual = (x - &tx).norm();
        Ok(DrStep { tx, shadow1, reflected, shadow2, residual })
    }

    pub fn apply(&self, x: &Vector) -> Result<Vector> {
        Ok(self.step(x)?.tx)
    }
}

/// `(1−κ)x + κR₂R₁x`.
pub fn apply_t(problem: &ProblemSpec, params: &DrParams, x: &Vector) -> Result<Vector> {
    DrOperator::new(problem, params)?.apply(x)
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterateOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Stop as soon as `r_n <= tol`. When false, run exactly `max_iter`
    /// steps.
    pub early_stop: bool,
    /// Keep `x_n` and both shadows for every n.
    pub record_points: bool,
    /// Reference fixed point for Fejér distances.
    pub reference: Option<Vector>,
}

impl Default for IterateOptions {
    fn default() -> Self {
        Self { tol: 1e-10, max_iter: 100_000, early_stop: true, record_points: false, reference: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TracePoint {
    #[serde(serialize_with = "crate::linalg::serialize_vector")]
    pub x: Vector,
    #[serde(serialize_with = "crate::linalg::serialize_vector")]
    pub shadow1: Vector,
    #[serde(serialize_with = "crate::linalg::serialize_vector")]
    pub shadow2: Vector,
}

/// Per-iteration scalars, indexed by n (entry n describes `x_n`).
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct IterationTrace {
    pub residuals: Vec<f64>,
    /// `‖J₁x_n − J₂R₁x_n‖`.
    pub shadow_gaps: Vec<f64>,
    pub fejer_distances: Option<Vec<f64>>,
    pub points: Option<Vec<TracePoint>>,
}

impl IterationTrace {
    pub fn len(&self) -> usize {
        self.residuals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residuals.is_empty()
    }

    /// CSV with header `n,residual,fejer_distance,shadow_gap` followed by
    /// `x_0..x_{d-1}` when points were recorded and `with_iterates` is set.
    /// Floats use 17 significant digits; a missing Fejér distance is empty.
    pub fn write_csv<W: Write>(&self, writer: W, with_iterates: bool) -> Result<()> {
        let to_err = |e: csv::Error| Error::InvalidProblem(format!("trace write failed: {e}"));
        let mut w = csv::Writer::from_writer(writer);
        let points = if with_iterates { self.points.as_ref() } else { None };
        let dim = points.and_then(|p| p.first()).map_or(0, |p| p.x.len());
        let mut header = vec!["n".to_string(), "residual".into(), "fejer_distance".into(), "shadow_gap".into()];
        header.extend((0..dim).map(|i| format!("x_{i}")));
        w.write_record(&header).map_err(to_err)?;
        for n in 0..self.len() {
            let mut row = vec![n.to_string(), fmt_float(self.residuals[n])];
            row.push(self.fejer_distances.as_ref().map_or(String::new(), |d| fmt_float(d[n])));
            row.push(fmt_float(self.shadow_gaps[n]));
            if let Some(p) = points {
                row.extend(p[n].x.iter().map(|v| fmt_float(*v)));
            }
            w.write_record(&row).map_err(to_err)?;
        }
        w.flush().map_err(|e| Error::InvalidProblem(format!("trace write failed: {e}")))?;
        Ok(())
    }
}

/// Scientific notation with 17 significant digits.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveResult {
    /// Last iterate `x̄`.
    #[serde(serialize_with = "crate::linalg::serialize_vector")]
    pub fixed_point: Vector,
    /// `J₁x̄`.
    #[serde(serialize_with = "crate::linalg::serialize_vector")]
    pub solution: Vector,
    /// `J₂R₁x̄`.
    #[serde(serialize_with = "crate::linalg::serialize_vector")]
    pub shadow2: Vector,
    /// Number of applications of T.
    pub iterations: usize,
    pub final_residual: f64,
    pub converged: bool,
    pub trace: IterationTrace,
}

/// Run `x_{n+1} = Tx_n` until `‖x_n − Tx_n‖ <= tol` or `max_iter` steps.
/// Exhausting the budget is not an error: `converged` is false and the
/// trace is complete.
pub fn iterate(problem: &ProblemSpec, params: &DrParams, x0: &Vector, opts: &IterateOptions) -> Result<SolveResult> {
    if !(opts.tol > 0.0) && opts.early_stop {
        return Err(Error::InvalidProblem(format!("tolerance must be positive, got {}", opts.tol)));
    }
    if opts.max_iter == 0 {
        return Err(Error::InvalidProblem("max_iter must be at least 1".into()));
    }
    problem.op_a.check_input(x0)?;
    if let Some(y) = &opts.reference {
        problem.op_a.check_input(y)?;
    }
    let op = DrOperator::new(problem, params)?;
    let mut trace = IterationTrace {
        fejer_distances: opts.reference.as_ref().map(|_| Vec::new()),
        points: opts.record_points.then(Vec::new),
        ..Default::default()
    };
    let mut x = x0.clone();
    let mut n = 0;
    loop {
        let step = op.step(&x)?;
        trace.residuals.push(step.residual);
        trace.shadow_gaps.push((&step.shadow1 - &step.shadow2).norm());
        if let (Some(d), Some(y)) = (trace.fejer_distances.as_mut(), opts.reference.as_ref()) {
            d.push((&x - y).norm());
        }
        let done = (opts.early_stop && step.residual <= opts.tol) || n == opts.max_iter;
        if done {
            if let Some(p) = trace.points.as_mut() {
                p.push(TracePoint { x: x.clone(), shadow1: step.shadow1.clone(), shadow2: step.shadow2.clone() });
            }
            return Ok(SolveResult {
                converged: step.residual <= opts.tol,
                final_residual: step.residual,
                iterations: n,
                solution: step.shadow1,
                shadow2: step.shadow2,
                fixed_point: x,
                trace,
            });
        }
        if let Some(p) = trace.points.as_mut() {
            p.push(TracePoint { x: x.clone(), shadow1: step.shadow1, shadow2: step.shadow2 });
        }
        x = step.tx;
        n += 1;
    }
}

/// Run to tolerance 1e-14 (or the floating-point floor, whichever comes
/// first) to obtain a reference fixed point for Fejér checks.
pub fn reference_fixed_point(problem: &ProblemSpec, params: &DrParams, x0: &Vector, max_iter: usize) -> Result<Vector> {
    let op = DrOperator::new(problem, params)?;
    let mut x = x0.clone();
    let mut best = (f64::INFINITY, x.clone());
    let mut stalled = 0;
    for _ in 0..max_iter {
        let step = op.step(&x)?;
        if step.residual < best.0 {
            best = (step.residual, x.clone());
            stalled = 0;
        } else {
            stalled += 1;
        }
        if step.residual <= 1e-14 || stalled > 1000 {
            break;
        }
        x = step.tx;
    }
    Ok(best.1)
}

/// Residuals of the two checks certifying `J₁x̄ ∈ zer(A+B)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    #[serde(serialize_with = "crate::linalg::serialize_vector")]
    pub solution: Vector,
    /// `‖a − J₂((1−λ)x̄ + λa)‖` with `a = J₁x̄`.
    pub fixed_point_residual: f64,
    /// `‖Aa + Ba‖ / (1 + ‖a‖)`, when both operators are forward-evaluable.
    pub inclusion_residual: Option<f64>,
    pub tol: f64,
    pub passed: bool,
}

pub fn certify_solution(problem: &ProblemSpec, params: &DrParams, xbar: &Vector, tol: f64) -> Result<Certificate> {
    let op = DrOperator::new(problem, params)?;
    let step = op.step(xbar)?;
    let a = step.shadow1;
    let fixed_point_residual = (&a - &step.shadow2).norm();
    let inclusion_residual = if problem.op_a.supports_forward() && problem.op_b.supports_forward() {
        let s = problem.op_a.forward_eval(&a)? + problem.op_b.forward_eval(&a)?;
        Some(s.norm() / (1.0 + a.norm()))
    } else {
        None
    };
    let passed = fixed_point_residual <= tol && inclusion_residual.is_none_or(|r| r <= tol);
    Ok(Certificate { solution: a, fixed_point_residual, inclusion_residual, tol, passed })
}

/// Sampled check of
/// `‖Tx−Ty‖² ≤ ‖x−y‖² − ω₁‖(I−T)x−(I−T)y‖² − ω₂‖J₁x−J₁y‖² − ω₃‖J₂R₁x−J₂R₁y‖²`
/// with the declared α of A and β of B. Margins are scaled by `1 + ‖x−y‖²`.
pub fn check_metric_inequality(problem: &ProblemSpec, params: &DrParams, samples: usize, seed: u64) -> CheckReport {
    const NAME: &str = "metric_inequality";
    if params.lambda.min(params.mu) < 1.0 {
        return CheckReport::failed_precondition(NAME, "requires min(λ, μ) >= 1");
    }
    if let Err(e) = params.validate() {
        return CheckReport::failed_precondition(NAME, e.to_string());
    }
    let op = match DrOperator::new(problem, params) {
        Ok(op) => op,
        Err(e) => return CheckReport::failed_precondition(NAME, e.to_string()),
    };
    let w = params.weights(problem.alpha(), problem.beta());
    let mut report = CheckReport::start(NAME, METRIC_TOLERANCE);
    let mut rng = Sampler::new(seed);
    for _ in 0..samples.max(1) {
        let (x, y) = rng.normal_pair(problem.dim, 2.0);
        let (sx, sy) = match (op.step(&x), op.step(&y)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => return CheckReport::failed_precondition(NAME, e.to_string()),
        };
        let d = &x - &y;
        let dt = &sx.tx - &sy.tx;
        let di = &d - &dt;
        let rhs = d.norm_squared()
            - w.w1 * di.norm_squared()
            - w.w2 * (&sx.shadow1 - &sy.shadow1).norm_squared()
            - w.w3 * (&sx.shadow2 - &sy.shadow2).norm_squared();
        report.record((rhs - dt.norm_squared()) / (1.0 + d.norm_squared()));
    }
    report.finish()
}
