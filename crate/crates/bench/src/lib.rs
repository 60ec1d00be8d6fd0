//! Seeded problem fixtures for the criterion benchmarks.

use adr_core::{select_params, DrParams, OperatorHandle, ProblemSpec, Sampler, Vector};

/// `A = S + Id` with an offset, `B` affine with symmetric part spectrum in
/// `[-0.5, 1.5]`.
pub fn affine_problem(dim: usize, seed: u64) -> (ProblemSpec, DrParams) {
    let mut rng = Sampler::new(seed);
    let a = OperatorHandle::affine_skew_plus_alpha(rng.skew_matrix(dim, 2.0), 1.0, Some(rng.normal_vector(dim)))
        .expect("skew payload");
    let m = rng.symmetric_with_spectrum(dim, -0.5, 1.5) + rng.skew_matrix(dim, 0.5);
    let b = OperatorHandle::affine_matrix(m, Some(rng.normal_vector(dim))).expect("square matrix");
    let problem = ProblemSpec::new(a, b).expect("matching dimensions");
    let params = select_params(problem.alpha(), problem.beta(), None, 0.5).expect("α + β > 0");
    (problem, params)
}

/// Strongly convex quadratic plus a weakly convex weighted ℓ1 term.
pub fn prox_problem(dim: usize, seed: u64) -> (ProblemSpec, DrParams) {
    let mut rng = Sampler::new(seed);
    let q = rng.symmetric_with_spectrum(dim, 1.0, 4.0);
    let a = OperatorHandle::prox_quadratic(q, rng.normal_vector(dim) * 2.0).expect("symmetric Q");
    let w = Vector::from_fn(dim, |_, _| rng.uniform(0.2, 1.0));
    let b = OperatorHandle::prox_shifted(OperatorHandle::prox_l1_weighted(w).expect("positive weights"), -0.5)
        .expect("prox base");
    let problem = ProblemSpec::new(a, b).expect("matching dimensions");
    let params = select_params(problem.alpha(), problem.beta(), None, 0.5).expect("α + β > 0");
    (problem, params)
}
