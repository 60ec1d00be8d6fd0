//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero when any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use adr_core::linalg::Vector;
use adr_core::oracle::DEFAULT_RADIUS;
use adr_core::rates::{alpha_j_both, parameter_constraints, parameter_constraints_symmetric, rate_lipschitz_b};
use adr_core::resolvents::soft_threshold;
use adr_core::splitting::reference_fixed_point;
use adr_core::*;
use common::{instance, Instance, Oracle, Regime};

const SEED: u64 = 2024;
const PER_REGIME: u64 = 20;

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self { passed, detail: detail.into() }
    }
}

/// Collects failures so a criterion reports the first few instead of
/// stopping at the first one.
#[derive(Default)]
struct Failures(Vec<String>);

impl Failures {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.0.push(what());
        }
    }

    fn outcome(self, summary: String) -> Outcome {
        if self.0.is_empty() {
            Outcome::new(true, summary)
        } else {
            let shown: Vec<_> = self.0.iter().take(3).cloned().collect();
            Outcome::new(false, format!("{} failure(s): {}", self.0.len(), shown.join("; ")))
        }
    }
}

struct Suite {
    instances: Vec<(Regime, u64, Instance)>,
}

impl Suite {
    fn build() -> Self {
        let mut instances = Vec::new();
        for regime in [Regime::Adaptive, Regime::ClassicalZero, Regime::ClassicalCondition] {
            for i in 0..PER_REGIME {
                instances.push((regime, i, instance(regime, SEED, i, None)));
            }
        }
        Self { instances }
    }
}

fn rate_formulas(_: &Suite) -> Outcome {
    let start = Instant::now();
    let mut f = Failures::default();
    let rho = rate_classical_dr(1.0, 1.0, 1.0, false).unwrap().rho.unwrap();
    f.check((rho - (5f64.sqrt() + 1.0) / 4.0).abs() <= 1e-12, || format!("classical DR rate {rho}"));
    let r = rate_mv18(1.0, 1.0).unwrap();
    f.check((r - (6f64.sqrt() + 1.0) / 4.0).abs() <= 1e-12, || format!("reference rate {r}"));
    let n = 50;
    let at = |k: usize| 0.05 + (5.0 - 0.05) * k as f64 / (n - 1) as f64;
    let mut worst_gap = f64::INFINITY;
    for i in 0..n {
        for j in 0..n {
            let (beta, ell) = (at(i), at(j));
            let rho = rate_classical_dr(beta, ell, 1.0, false).ok().and_then(|r| r.rho);
            let r = rate_mv18(beta, ell).ok();
            match (rho, r) {
                (Some(rho), Some(r)) => {
                    worst_gap = worst_gap.min(r - rho);
                    f.check(rho < r, || format!("rho {rho} >= r {r} at beta={beta}, ell={ell}"));
                }
                _ => f.check(false, || format!("no rate at beta={beta}, ell={ell}")),
            }
        }
    }
    let elapsed = start.elapsed();
    f.check(elapsed < Duration::from_secs(5), || format!("took {elapsed:.2?}"));
    f.outcome(format!("2500 grid points, min r - rho = {worst_gap:.3e}, {elapsed:.2?}"))
}

fn lipschitz_a_instance(index: u64) -> (ProblemSpec, DrParams, f64) {
    let mut rng = Sampler::derive(SEED, 5000 + index);
    let dim = 2 + rng.index(3);
    let alpha = rng.uniform(0.2, 1.5);
    let beta = rng.uniform(-0.5 * alpha, 1.0);
    let a = if index.is_multiple_of(2) {
        let norm = rng.uniform(0.2, 2.0);
        let s = rng.skew_matrix(dim, norm);
        OperatorHandle::affine_skew_plus_alpha(s, alpha, Some(rng.normal_vector(dim))).unwrap()
    } else {
        let hi = alpha + rng.uniform(0.5, 2.0);
        let q = rng.symmetric_with_spectrum(dim, alpha, hi);
        OperatorHandle::prox_quadratic(q, rng.normal_vector(dim)).unwrap()
    };
    let b = match index % 4 {
        0 | 1 => {
            let hi = beta + rng.uniform(0.5, 2.0);
            let m = rng.symmetric_with_spectrum(dim, beta, hi) + rng.skew_matrix(dim, 0.3);
            OperatorHandle::affine_matrix(m, Some(rng.normal_vector(dim))).unwrap()
        }
        2 => {
            let w = Vector::from_fn(dim, |_, _| rng.uniform(0.3, 1.5));
            OperatorHandle::prox_shifted(OperatorHandle::prox_l1_weighted(w).unwrap(), beta).unwrap()
        }
        _ => {
            let lower = Vector::from_fn(dim, |_, _| rng.uniform(-2.0, 0.0));
            let upper = Vector::from_fn(dim, |i, _| lower[i] + rng.uniform(0.5, 2.5));
            OperatorHandle::prox_shifted(OperatorHandle::prox_box(lower, upper).unwrap(), beta).unwrap()
        }
    };
    let kappa = rng.uniform(0.3, 0.8);
    let problem = ProblemSpec::new(a, b).unwrap();
    let (alpha, beta) = (problem.alpha(), problem.beta());
    let params = select_params(alpha, beta, None, kappa).unwrap();
    let ell = problem.op_a.lipschitz().unwrap();
    let rho = rate_lipschitz_a(alpha, beta, ell, &params, problem.op_a.is_equality_class())
        .and_then(|r| r.guaranteed())
        .unwrap_or(f64::NAN);
    (problem, params, rho)
}

fn contraction_soundness(_: &Suite) -> Outcome {
    let start = Instant::now();
    let mut f = Failures::default();
    let mut tightest: f64 = 0.0;
    for i in 0..20 {
        let (problem, params, rho) = lipschitz_a_instance(i);
        f.check(rho.is_finite(), || format!("instance {i}: no guaranteed rate"));
        if !rho.is_finite() {
            continue;
        }
        let observed = estimate_contraction(&problem, &params, 10_000, SEED + i, DEFAULT_RADIUS, None).unwrap();
        tightest = tightest.max(observed / rho);
        f.check(observed <= rho * (1.0 + 1e-9), || format!("instance {i}: observed {observed} > rho {rho}"));
    }
    let elapsed = start.elapsed();
    f.check(elapsed < Duration::from_secs(60), || format!("took {elapsed:.2?}"));
    f.outcome(format!("20 instances, max observed/rho = {tightest:.9}, {elapsed:.2?}"))
}

fn convergence_and_certificate(suite: &Suite) -> Outcome {
    let mut f = Failures::default();
    let mut worst_linear: f64 = 0.0;
    let mut worst_grid: f64 = 0.0;
    let mut max_iterations = 0;
    for (regime, i, inst) in &suite.instances {
        let tag = format!("{regime:?} {i}");
        let run = iterate(&inst.problem, &inst.params, &inst.x0, &IterateOptions::default()).unwrap();
        max_iterations = max_iterations.max(run.iterations);
        f.check(run.converged && run.final_residual <= 1e-10, || {
            format!("{tag}: residual {} after {} iterations", run.final_residual, run.iterations)
        });
        let cert = certify_solution(&inst.problem, &inst.params, &run.fixed_point, 1e-8).unwrap();
        f.check(cert.passed, || format!("{tag}: certificate {cert:?}"));
        let (oracle, tol) = match inst.oracle {
            Oracle::LinearSolve => (solve_linear_sum(&inst.problem), 1e-7),
            Oracle::GridSearch => (minimize_f_plus_g(&inst.problem, OracleMethod::GridSearch, 0), 1e-5),
        };
        match oracle {
            Ok(o) => {
                let gap = (&o.solution - &run.solution).norm();
                match inst.oracle {
                    Oracle::LinearSolve => worst_linear = worst_linear.max(gap),
                    Oracle::GridSearch => worst_grid = worst_grid.max(gap),
                }
                f.check(gap <= tol, || format!("{tag}: oracle gap {gap:.3e}"));
            }
            Err(e) => f.check(false, || format!("{tag}: oracle failed: {e}")),
        }
    }
    f.outcome(format!(
        "60 problems, max iterations {max_iterations}, linear gap {worst_linear:.2e}, grid gap {worst_grid:.2e}"
    ))
}

fn fejer_and_telescoping(suite: &Suite) -> Outcome {
    let mut f = Failures::default();
    let mut worst_fejer = f64::INFINITY;
    let mut worst_telescope = f64::INFINITY;
    for (regime, i, inst) in &suite.instances {
        let tag = format!("{regime:?} {i}");
        let y = reference_fixed_point(&inst.problem, &inst.params, &inst.x0, 1_000_000).unwrap();
        let ref_residual = (apply_t(&inst.problem, &inst.params, &y).unwrap() - &y).norm();
        f.check(ref_residual <= 1e-14, || format!("{tag}: reference residual {ref_residual:.2e}"));
        let opts = IterateOptions { reference: Some(y.clone()), ..Default::default() };
        let run = iterate(&inst.problem, &inst.params, &inst.x0, &opts).unwrap();
        let d = run.trace.fejer_distances.as_ref().unwrap();
        for (n, w) in d.windows(2).enumerate() {
            let margin = w[0] - w[1];
            worst_fejer = worst_fejer.min(margin);
            if margin < -1e-12 {
                f.check(false, || format!("{tag}: distance grows by {:.2e} at n={n}", -margin));
                break;
            }
        }
        let weight = inst.params.weights(inst.problem.alpha(), inst.problem.beta()).residual_weight;
        let sum: f64 = run.trace.residuals.iter().map(|r| weight * r * r).sum();
        let margin = (&inst.x0 - &y).norm_squared() - sum;
        worst_telescope = worst_telescope.min(margin);
        f.check(margin >= -1e-9, || format!("{tag}: telescoping margin {margin:.2e}"));
    }
    f.outcome(format!("worst Fejer margin {worst_fejer:.2e}, worst telescoping margin {worst_telescope:.2e}"))
}

fn asymptotic_regularity(suite: &Suite) -> Outcome {
    let mut f = Failures::default();
    let mut worst_ratio: f64 = 0.0;
    for (regime, i, inst) in &suite.instances {
        let tag = format!("{regime:?} {i}");
        let opts = IterateOptions { max_iter: 4096, early_stop: false, ..Default::default() };
        let run = iterate(&inst.problem, &inst.params, &inst.x0, &opts).unwrap();
        let r = &run.trace.residuals;
        f.check(r.len() == 4097, || format!("{tag}: trace has {} entries", r.len()));
        if let Some(n) = r.windows(2).position(|w| w[1] > w[0] + 1e-12) {
            f.check(false, || format!("{tag}: residual increases at n={n}"));
        }
        let (late, early) = (4096f64.sqrt() * r[4096], 0.5 * 256f64.sqrt() * r[256]);
        worst_ratio = worst_ratio.max(late / early);
        f.check(late < early, || format!("{tag}: 64 r_4096 = {late:.3e} vs 8 r_256 = {early:.3e}"));
    }
    f.outcome(format!("60 runs of 4096 steps, max (64 r_4096)/(8 r_256) = {worst_ratio:.3e}"))
}

fn random_alpha_beta(rng: &mut Sampler, k: usize) -> (f64, f64) {
    let alpha = rng.uniform(-2.0, 3.0);
    let beta = if k.is_multiple_of(20) { -alpha } else { -alpha + rng.uniform(0.0, 3.0) };
    (alpha, beta)
}

fn parameter_machinery(_: &Suite) -> Outcome {
    let mut f = Failures::default();
    let mut rng = Sampler::derive(SEED, 6000);
    for k in 0..1000 {
        let (alpha, beta) = random_alpha_beta(&mut rng, k);
        let kappa = rng.uniform(0.05, 0.95);
        match select_params(alpha, beta, None, kappa) {
            Ok(p) => {
                let constraints = parameter_constraints(&p, alpha, beta);
                f.check(constraints.iter().all(|c| c.satisfied), || format!("({alpha}, {beta}): {constraints:?}"));
                let symmetric = parameter_constraints_symmetric(&p, alpha, beta);
                f.check(symmetric.iter().all(|c| c.satisfied), || {
                    format!("({alpha}, {beta}): symmetric form {symmetric:?}")
                });
            }
            Err(e) => f.check(false, || format!("({alpha}, {beta}): {e}")),
        }
    }
    // Agreement of the two forms on arbitrary parameter tuples, feasible or not.
    let mut disagreements = 0;
    let mut feasible = 0;
    for k in 0..1000 {
        let (alpha, beta) = random_alpha_beta(&mut rng, k);
        let gamma = rng.uniform(0.05, 3.0);
        let mu = rng.uniform(1.05, 4.0);
        let kappa = rng.uniform(0.05, 0.95);
        let p = DrParams::adaptive(gamma, mu, kappa).unwrap();
        let a = check_params(&p, alpha, beta);
        feasible += a as usize;
        if a != check_params_symmetric(&p, alpha, beta) {
            disagreements += 1;
        }
    }
    f.check(disagreements == 0, || format!("{disagreements} disagreements between the two forms"));
    // μ at its lower endpoint makes ε and φ vanish exactly.
    for _ in 0..200 {
        let alpha = rng.uniform(0.1, 2.0);
        let beta = rng.uniform(0.0, 0.45);
        let gamma = rng.uniform(0.1, 1.0);
        let mu = 2.0 - 2.0 * gamma * beta;
        let kappa = rng.uniform(0.1, 0.9);
        let p = DrParams::adaptive(gamma, mu, kappa).unwrap();
        match rate_lipschitz_a(alpha, beta, alpha + 1.0, &p, false) {
            Ok(r) => f.check(r.epsilon == Some(0.0) && r.phi == Some(0.0), || {
                format!("eps {:?} phi {:?} at mu = 2 - 2 gamma beta", r.epsilon, r.phi)
            }),
            Err(e) => f.check(false, || format!("lower endpoint rejected: {e}")),
        }
    }
    // Mirror: λ at its lower endpoint 2 − 2δα on the B side.
    for _ in 0..200 {
        let alpha = rng.uniform(0.0, 0.45);
        let beta = rng.uniform(0.1, 2.0);
        let gamma = rng.uniform(0.1, 1.0);
        let kappa = rng.uniform(0.1, 0.9);
        let delta = ((2.0 + 2.0 * gamma * alpha) / (1.0 + 2.0 * gamma * alpha) - 1.0) * gamma;
        let lambda = 2.0 - 2.0 * delta * alpha;
        let mu = 1.0 + 1.0 / (lambda - 1.0);
        let p = DrParams::manual(gamma, delta, lambda, mu, kappa, Mode::Adaptive).unwrap();
        match rate_lipschitz_b(alpha, beta, beta + 1.0, &p, true) {
            Ok(r) => f.check(r.epsilon == Some(0.0) && r.phi == Some(0.0), || {
                format!("B side eps {:?} phi {:?} at lambda = 2 - 2 delta alpha", r.epsilon, r.phi)
            }),
            Err(e) => f.check(false, || format!("B-side lower endpoint rejected: {e}")),
        }
    }
    f.outcome(format!(
        "1000 selections feasible, 1000 tuples agree ({feasible} feasible), epsilon = phi = 0 at endpoints"
    ))
}

fn operator_zoo() -> Vec<(&'static str, OperatorHandle)> {
    let mut rng = Sampler::derive(SEED, 7000);
    let dim = 3;
    let skew = rng.skew_matrix(dim, 1.5);
    let spd = rng.symmetric_with_spectrum(dim, 0.2, 2.0);
    let weak = rng.symmetric_with_spectrum(dim, -0.3, 1.5);
    let general = rng.symmetric_with_spectrum(dim, 0.1, 1.0) + rng.skew_matrix(dim, 0.8);
    let weights = Vector::from_fn(dim, |_, _| rng.uniform(0.2, 1.5));
    let lower = Vector::from_fn(dim, |_, _| rng.uniform(-2.0, 0.0));
    let upper = Vector::from_fn(dim, |i, _| lower[i] + rng.uniform(0.5, 2.5));
    let b = rng.normal_vector(dim);
    let offset = rng.normal_vector(dim);
    vec![
        ("scaled_identity", OperatorHandle::scaled_identity(dim, 0.7).unwrap()),
        ("scaled_identity_weak", OperatorHandle::scaled_identity(dim, -0.3).unwrap()),
        ("linear_matrix", OperatorHandle::affine_matrix(general, Some(offset.clone())).unwrap()),
        ("skew_plus_alpha", OperatorHandle::affine_skew_plus_alpha(skew.clone(), 0.5, Some(offset)).unwrap()),
        ("skew_plus_alpha_weak", OperatorHandle::skew_plus_alpha(skew, -0.2).unwrap()),
        ("prox_quadratic", OperatorHandle::prox_quadratic(spd.clone(), b.clone()).unwrap()),
        ("prox_quadratic_weak", OperatorHandle::prox_quadratic(weak, b.clone()).unwrap()),
        ("prox_l1", OperatorHandle::prox_l1(dim, 0.8).unwrap()),
        ("prox_l1_weighted", OperatorHandle::prox_l1_weighted(weights.clone()).unwrap()),
        ("prox_box", OperatorHandle::prox_box(lower.clone(), upper.clone()).unwrap()),
        (
            "prox_shifted_l1",
            OperatorHandle::prox_shifted(OperatorHandle::prox_l1_weighted(weights).unwrap(), -0.3).unwrap(),
        ),
        (
            "prox_shifted_box",
            OperatorHandle::prox_shifted(OperatorHandle::prox_box(lower, upper).unwrap(), 0.5).unwrap(),
        ),
        (
            "prox_shifted_quadratic",
            OperatorHandle::prox_shifted(OperatorHandle::prox_quadratic(spd, b).unwrap(), -0.1).unwrap(),
        ),
    ]
}

/// Minimizer of a unimodal function on `[lo, hi]` given only a strict
/// comparison `less(a, b) ⇔ φ(a) < φ(b)`.
fn golden_section(mut lo: f64, mut hi: f64, less: impl Fn(f64, f64) -> bool) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - inv_phi * (hi - lo);
    let mut b = lo + inv_phi * (hi - lo);
    for _ in 0..200 {
        if hi - lo <= 1e-15 * (1.0 + lo.abs().max(hi.abs())) {
            break;
        }
        if less(a, b) {
            hi = b;
            b = a;
            a = hi - inv_phi * (hi - lo);
        } else {
            lo = a;
            a = b;
            b = lo + inv_phi * (hi - lo);
        }
    }
    0.5 * (lo + hi)
}

/// Per-coordinate prox by golden section on `w|z| + (c/2)z² + (z−x)²/(2γ)`
/// (or the squared distance alone on `[lo, hi]` for a box). Objective
/// differences are evaluated in factored form so the comparison stays
/// accurate near the minimizer.
fn golden_prox(x: f64, gamma: f64, w: f64, c: f64, bracket: Option<(f64, f64)>) -> f64 {
    let diff = |z1: f64, z2: f64| {
        w * (z1.abs() - z2.abs()) + 0.5 * c * (z1 - z2) * (z1 + z2) + (z1 - z2) * (z1 + z2 - 2.0 * x) / (2.0 * gamma)
    };
    let reach = (x.abs() + gamma * w) / (1.0 + gamma * c) + 1.0;
    let (lo, hi) = bracket.unwrap_or((-reach, reach));
    golden_section(lo, hi, |a, b| diff(a, b) < 0.0)
}

/// `(x_i, γ, i) ↦` the i-th coordinate of the prox.
type CoordinateProx = Box<dyn Fn(f64, f64, usize) -> f64>;

type Criterion = (&'static str, fn(&Suite) -> Outcome);

fn resolvent_calculus(_: &Suite) -> Outcome {
    let mut f = Failures::default();
    let mut checks = 0;
    let mut golden_worst: f64 = 0.0;
    for (k, (name, op)) in operator_zoo().into_iter().enumerate() {
        for (g, gamma) in [0.1, 0.5, 1.0, 2.0].into_iter().enumerate() {
            let seed = SEED + 100 * k as u64 + g as u64;
            let j = ResolventEvaluator::new(&op, gamma).unwrap();
            let co = j.check_cocoercivity(1000, seed);
            f.check(co.passed, || format!("{name} gamma={gamma}: cocoercivity {co:?}"));
            checks += 1;
            if op.lipschitz().is_some() {
                let lip = j.check_lipschitz_resolvent(1000, seed).unwrap();
                f.check(lip.passed, || format!("{name} gamma={gamma}: Lipschitz resolvent {lip:?}"));
                checks += 1;
            }
        }
        // At α = −ℓ the step γ = 1/ℓ makes 1 + γα vanish; there is no resolvent to probe.
        if let Some(ell) = op.lipschitz().filter(|l| *l > 0.0 && 1.0 + op.alpha() / l > 1e-3) {
            let alpha = op.alpha();
            let (large, small) = alpha_j_both(alpha, ell, 1.0 / ell);
            f.check((large - small).abs() <= 1e-12 * large, || {
                format!("{name}: branches {large} vs {small} at gamma ell = 1")
            });
            let below = compute_alpha_j(alpha, ell, (1.0 - 1e-9) / ell, false).unwrap();
            let above = compute_alpha_j(alpha, ell, (1.0 + 1e-9) / ell, false).unwrap();
            f.check((below - above).abs() <= 1e-8 * large, || {
                format!("{name}: jump {below} vs {above} across gamma ell = 1")
            });
            let j = ResolventEvaluator::new(&op, 1.0 / ell).unwrap();
            let lip = j.check_lipschitz_resolvent(1000, SEED + 100 * k as u64 + 9).unwrap();
            f.check(lip.passed, || format!("{name} at gamma ell = 1: {lip:?}"));
        }
        let coordinate_prox: Option<CoordinateProx> = match op.kind() {
            OperatorKind::ProxL1 { weights } => {
                let w = weights.clone();
                Some(Box::new(move |x, gamma, i| golden_prox(x, gamma, w[i], 0.0, None)))
            }
            OperatorKind::ProxBox { lower, upper } => {
                let (l, u) = (lower.clone(), upper.clone());
                Some(Box::new(move |x, gamma, i| golden_prox(x, gamma, 0.0, 0.0, Some((l[i], u[i])))))
            }
            OperatorKind::ProxShifted { base, c } => match base.kind() {
                OperatorKind::ProxL1 { weights } => {
                    let (w, c) = (weights.clone(), *c);
                    Some(Box::new(move |x, gamma, i| golden_prox(x, gamma, w[i], c, None)))
                }
                _ => None,
            },
            _ => None,
        };
        if let Some(prox) = coordinate_prox {
            let mut rng = Sampler::derive(SEED, 7100 + k as u64);
            for gamma in [0.1, 0.5, 1.0, 2.0] {
                let j = ResolventEvaluator::new(&op, gamma).unwrap();
                for _ in 0..1000 {
                    let x = rng.normal_vector(op.dim()) * 3.0;
                    let z = j.resolve(&x).unwrap();
                    for i in 0..op.dim() {
                        let gap = (prox(x[i], gamma, i) - z[i]).abs();
                        golden_worst = golden_worst.max(gap);
                        if gap > 1e-8 {
                            f.check(false, || {
                                format!("{name} gamma={gamma}: golden-section gap {gap:.2e} at x={}", x[i])
                            });
                        }
                    }
                }
            }
        }
    }
    // The closed-form soft threshold itself agrees with golden section.
    for &(v, t) in &[(2.5, 1.0), (-0.3, 0.5), (0.0, 0.2), (-4.0, 1.5)] {
        let gap = (soft_threshold(v, t) - golden_prox(v, 1.0, t, 0.0, None)).abs();
        f.check(gap <= 1e-8, || format!("soft_threshold({v}, {t}) off by {gap:.2e}"));
    }
    f.outcome(format!(
        "{checks} resolvent checks over 13 operators x 4 steps, golden-section max gap {golden_worst:.2e}"
    ))
}

fn shadow_convergence(suite: &Suite) -> Outcome {
    let mut f = Failures::default();
    let mut worst_identity: f64 = 0.0;
    let mut worst_final: f64 = 0.0;
    let mut count = 0;
    for (regime, i, inst) in &suite.instances {
        if inst.problem.alpha() + inst.problem.beta() <= 0.0 {
            continue;
        }
        count += 1;
        let tag = format!("{regime:?} {i}");
        let run = iterate(&inst.problem, &inst.params, &inst.x0, &IterateOptions::default()).unwrap();
        let km = inst.params.kappa * inst.params.mu;
        for (r, g) in run.trace.residuals.iter().zip(&run.trace.shadow_gaps) {
            let excess = (g - r / km) / (1.0 + r / km);
            worst_identity = worst_identity.max(((g - r / km) / (1.0 + r / km)).abs());
            f.check(excess <= 1e-12, || format!("{tag}: shadow gap {g:.6e} exceeds r/(kappa mu) = {:.6e}", r / km));
        }
        let cert = certify_solution(&inst.problem, &inst.params, &run.fixed_point, 1e-8).unwrap();
        f.check(cert.passed, || format!("{tag}: certificate failed"));
        let d1 = (&run.solution - &cert.solution).norm();
        let d2 = (&run.shadow2 - &cert.solution).norm();
        worst_final = worst_final.max(d1.max(d2));
        f.check(d1 <= 1e-7 && d2 <= 1e-7, || format!("{tag}: final shadows off by {d1:.2e}, {d2:.2e}"));
    }
    f.outcome(format!(
        "{count} problems, identity max relative deviation {worst_identity:.2e}, final shadow gap {worst_final:.2e}"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("rate formulas", rate_formulas),
        ("contraction soundness", contraction_soundness),
        ("convergence and certificate", convergence_and_certificate),
        ("Fejer and telescoping", fejer_and_telescoping),
        ("asymptotic regularity", asymptotic_regularity),
        ("parameter machinery", parameter_machinery),
        ("resolvent calculus", resolvent_calculus),
        ("shadow convergence", shadow_convergence),
    ];
    let suite = Suite::build();
    let mut all = true;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run(&suite);
        all &= outcome.passed;
        println!(
            "criterion {} {name}: {} ({}; {:.2?})",
            n + 1,
            if outcome.passed { "PASS" } else { "FAIL" },
            outcome.detail,
            start.elapsed()
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
