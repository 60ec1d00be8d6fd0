//! Reference solvers that do not go through the DR iteration, plus a
//! Monte-Carlo estimate of the Lipschitz constant of T.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Vector};
use crate::operators::{OperatorHandle, OperatorKind};
use crate::problem::ProblemSpec;
use crate::resolvents::ResolventEvaluator;
use crate::sampling::Sampler;
use crate::splitting::{iterate, DrOperator, DrParams, IterateOptions};

/// Relative singular-value floor below which `M_A + M_B` counts as singular.
pub const SINGULAR_SUM_RATIO: f64 = 1e-12;
/// Target grid cell size for [`OracleMethod::GridSearch`].
pub const GRID_CELL: f64 = 1e-6;
/// Pairs closer than this are skipped by [`estimate_contraction`].
pub const MIN_PAIR_DISTANCE: f64 = 1e-8;
/// Default sampling radius for [`estimate_contraction`].
pub const DEFAULT_RADIUS: f64 = 10.0;

const GRID_POINTS: usize = 101;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleMethod {
    LinearSolve,
    GridSearch,
    ProximalGradient,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleResult {
    #[serde(serialize_with = "crate::linalg::serialize_vector")]
    pub solution: Vector,
    pub method: OracleMethod,
    /// `‖Ax+Bx‖` for linear solves, final cell size for grid search, and
    /// the gradient-mapping norm for proximal gradient.
    pub residual: f64,
    pub certified: bool,
    pub objective: Option<f64>,
}

/// Solve `(M_A + M_B)x + c_A + c_B = 0` for affine `A`, `B`.
pub fn solve_linear_sum(problem: &ProblemSpec) -> Result<OracleResult> {
    let (ma, ca) = problem
        .op_a
        .affine_parts()
        .ok_or_else(|| Error::OracleNotApplicable(format!("A ({}) is not affine", problem.op_a.kind_name())))?;
    let (mb, cb) = problem
        .op_b
        .affine_parts()
        .ok_or_else(|| Error::OracleNotApplicable(format!("B ({}) is not affine", problem.op_b.kind_name())))?;
    let m = ma + mb;
    let c = ca + cb;
    let svals = m.clone().singular_values();
    let (smin, smax) = (svals.min(), svals.max());
    if !(smax > 0.0) || smin < SINGULAR_SUM_RATIO * smax {
        return Err(Error::SingularSum);
    }
    let x = m.clone().lu().solve(&(-&c)).ok_or(Error::SingularSum)?;
    let residual = (&m * &x + &c).norm();
    Ok(OracleResult {
        certified: residual <= 1e-10 * (1.0 + c.norm()),
        solution: x,
        method: OracleMethod::LinearSolve,
        residual,
        objective: None,
    })
}

/// Minimize `f + g` where `∂f = A` and `∂g = B` are prox-family operators
/// with computable function values.
///
/// `GridSearch` (dimension at most 2) scans a 101-point-per-axis grid and
/// zooms by a factor of 10 around the best point until the cell is at most
/// 1e-6; the initial box comes from box-indicator bounds when present and
/// otherwise grows until the minimizer is interior. `ProximalGradient`
/// takes `budget` steps of size `1/ℓ` on the smooth operator.
pub fn minimize_f_plus_g(problem: &ProblemSpec, method: OracleMethod, budget: usize) -> Result<OracleResult> {
    let probe = Vector::zeros(problem.dim);
    if problem.op_a.function_value(&probe).is_none() || problem.op_b.function_value(&probe).is_none() {
        return Err(Error::OracleNotApplicable("both operators need function values".into()));
    }
    if problem.alpha() + problem.beta() < 0.0 {
        return Err(Error::OracleNotApplicable("requires α + β >= 0".into()));
    }
    match method {
        OracleMethod::GridSearch => grid_search(problem),
        OracleMethod::ProximalGradient => proximal_gradient(problem, budget),
        OracleMethod::LinearSolve => solve_linear_sum(problem),
    }
}

fn objective(problem: &ProblemSpec, x: &Vector) -> f64 {
    let f = problem.op_a.function_value(x).unwrap_or(f64::INFINITY);
    let g = problem.op_b.function_value(x).unwrap_or(f64::INFINITY);
    f + g
}

fn box_bounds(op: &OperatorHandle) -> Option<(Vector, Vector)> {
    match op.kind() {
        OperatorKind::ProxBox { lower, upper } => Some((lower.clone(), upper.clone())),
        OperatorKind::ProxShifted { base, .. } => box_bounds(base),
        _ => None,
    }
}

fn grid_search(problem: &ProblemSpec) -> Result<OracleResult> {
    let dim = problem.dim;
    if dim > 2 {
        return Err(Error::DimensionTooLarge(dim));
    }
    let bounds = match (box_bounds(&problem.op_a), box_bounds(&problem.op_b)) {
        (Some((l1, u1)), Some((l2, u2))) => Some((l1.sup(&l2), u1.inf(&u2))),
        (a, b) => a.or(b),
    };
    let (mut lo, mut hi) = match &bounds {
        Some((l, u)) => (l.clone(), u.clone()),
        None => (Vector::from_element(dim, -4.0), Vector::from_element(dim, 4.0)),
    };
    if lo.iter().zip(hi.iter()).any(|(l, u)| !(l <= u)) {
        return Err(Error::OracleNotApplicable("box constraints are empty".into()));
    }
    // Grow an unbounded search box until the best grid point is interior.
    let mut best = scan(problem, &lo, &hi);
    if bounds.is_none() {
        while on_boundary(&best.0, &lo, &hi) && hi[0] < 1e6 {
            lo *= 4.0;
            hi *= 4.0;
            best = scan(problem, &lo, &hi);
        }
    }
    let (outer_lo, outer_hi) = (lo.clone(), hi.clone());
    let mut cell = max_cell(&lo, &hi);
    while cell > GRID_CELL {
        let half = cell * (GRID_POINTS as f64 - 1.0) / 20.0;
        lo = best.0.map(|v| v - half).sup(&outer_lo);
        hi = best.0.map(|v| v + half).inf(&outer_hi);
        best = scan(problem, &lo, &hi);
        let next = max_cell(&lo, &hi);
        if !(next < cell) {
            break;
        }
        cell = next;
    }
    let interior = bounds.is_some() || !on_boundary(&best.0, &outer_lo, &outer_hi);
    Ok(OracleResult {
        certified: cell <= GRID_CELL && interior && best.1.is_finite(),
        solution: best.0,
        method: OracleMethod::GridSearch,
        residual: cell,
        objective: Some(best.1),
    })
}

fn max_cell(lo: &Vector, hi: &Vector) -> f64 {
    (hi - lo).amax() / (GRID_POINTS as f64 - 1.0)
}

fn on_boundary(x: &Vector, lo: &Vector, hi: &Vector) -> bool {
    x.iter().zip(lo.iter().zip(hi.iter())).any(|(v, (l, u))| v <= l || v >= u)
}

/// Best point of the tensor grid over `[lo, hi]`, scanned in a fixed order
/// so ties resolve deterministically.
fn scan(problem: &ProblemSpec, lo: &Vector, hi: &Vector) -> (Vector, f64) {
    let dim = lo.len();
    let axis = |d: usize, i: usize| lo[d] + (hi[d] - lo[d]) * i as f64 / (GRID_POINTS as f64 - 1.0);
    let mut best = (Vector::zeros(dim), f64::INFINITY);
    let count = GRID_POINTS.pow(dim as u32);
    for k in 0..count {
        let x = Vector::from_fn(dim, |d, _| axis(d, (k / GRID_POINTS.pow(d as u32)) % GRID_POINTS));
        let val = objective(problem, &x);
        if val < best.1 {
            best = (x, val);
        }
    }
    best
}

fn proximal_gradient(problem: &ProblemSpec, budget: usize) -> Result<OracleResult> {
    let smooth_a = problem.op_a.supports_forward() && problem.op_a.lipschitz().is_some_and(|l| l > 0.0);
    let smooth_b = problem.op_b.supports_forward() && problem.op_b.lipschitz().is_some_and(|l| l > 0.0);
    let (smooth, other) = if smooth_a {
        (&problem.op_a, &problem.op_b)
    } else if smooth_b {
        (&problem.op_b, &problem.op_a)
    } else {
        return Err(Error::OracleNotApplicable("needs one forward-evaluable operator with ℓ > 0".into()));
    };
    let ell = smooth.lipschitz().expect("checked above");
    let prox = ResolventEvaluator::new(other, 1.0 / ell)?;
    let mut x = Vector::zeros(problem.dim);
    let mut residual = f64::INFINITY;
    for _ in 0..budget.max(1) {
        let grad = smooth.forward_eval(&x)?;
        let next = prox.resolve(&(&x - grad / ell))?;
        residual = (&next - &x).norm() * ell;
        x = next;
        if residual <= 1e-13 {
            break;
        }
    }
    Ok(OracleResult {
        certified: residual <= 1e-10,
        objective: Some(objective(problem, &x)),
        solution: x,
        method: OracleMethod::ProximalGradient,
        residual,
    })
}

/// Largest observed `‖Tx−Ty‖/‖x−y‖` over seeded pairs in the ball of the
/// given radius around `center` (the fixed point of T when `None`).
///
/// Half the pairs are drawn independently in the ball; the other half are
/// local pairs `y = x + h` with `‖h‖` between `radius·1e-4` and
/// `radius·1e-1`, which probe kinks of piecewise-linear resolvents.
pub fn estimate_contraction(
    problem: &ProblemSpec,
    params: &DrParams,
    samples: usize,
    seed: u64,
    radius: f64,
    center: Option<&Vector>,
) -> Result<f64> {
    let op = DrOperator::new(problem, params)?;
    let center = match center {
        Some(c) => c.clone(),
        None => {
            let zero = Vector::zeros(problem.dim);
            let opts = IterateOptions { tol: 1e-12, ..Default::default() };
            let r = iterate(problem, params, &zero, &opts)?;
            if r.converged {
                r.fixed_point
            } else {
                zero
            }
        }
    };
    let mut rng = Sampler::new(seed);
    let mut best: f64 = 0.0;
    for k in 0..samples.max(2) {
        let x = rng.ball_point(&center, radius);
        let y = if k % 2 == 0 {
            rng.ball_point(&center, radius)
        } else {
            let scale = radius * 10f64.powf(-rng.uniform(1.0, 4.0));
            let dir = rng.ball_point(&Vector::zeros(problem.dim), 1.0);
            let n = dir.norm();
            if n == 0.0 {
                continue;
            }
            &x + dir * (scale / n)
        };
        let d = (&x - &y).norm();
        if d < MIN_PAIR_DISTANCE {
            continue;
        }
        let ratio = (op.apply(&x)? - op.apply(&y)?).norm() / d;
        best = best.max(ratio);
    }
    Ok(best)
}

/// Exact operator norm of the linear part of T, for affine problems.
pub fn linear_t_norm(problem: &ProblemSpec, params: &DrParams) -> Result<f64> {
    let op = DrOperator::new(problem, params)?;
    let n = problem.dim;
    let zero = op.apply(&Vector::zeros(n))?;
    let mut t = Matrix::zeros(n, n);
    for j in 0..n {
        let mut e = Vector::zeros(n);
        e[j] = 1.0;
        t.set_column(j, &(op.apply(&e)? - &zero));
    }
    Ok(linalg::spectral_norm(&t))
}
