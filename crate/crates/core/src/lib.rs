//! Adaptive Douglas–Rachford splitting for finding a zero of `A + B`, where
//! `A` is α-monotone and `B` is β-monotone on `R^n` with `α + β >= 0`.
//!
//! The iteration is `x_{n+1} = T x_n` with
//! `T = (1−κ)Id + κR₂R₁`, `R₁ = (1−λ)Id + λJ_{γA}` and
//! `R₂ = (1−μ)Id + μJ_{δB}`, where `(λ−1)(μ−1) = 1` and `δ = (λ−1)γ`.
//! A zero of `A + B` is recovered as `J_{γA}x̄` for a fixed point `x̄`.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` deliberately rejects NaN.

pub mod error;
pub mod linalg;
pub mod operators;
pub mod oracle;
pub mod problem;
pub mod rates;
pub mod report;
pub mod resolvents;
pub mod sampling;
pub mod splitting;
pub mod validation;

pub use error::{Error, ParamCode, Result};
pub use linalg::{Matrix, Vector};
pub use operators::{OperatorHandle, OperatorKind};
pub use oracle::{estimate_contraction, minimize_f_plus_g, solve_linear_sum, OracleMethod, OracleResult};
pub use problem::ProblemSpec;
pub use rates::{
    check_params, check_params_symmetric, classical_condition, compute_alpha_j, rate_classical_dr, rate_classical_gis,
    rate_lipschitz_a, rate_lipschitz_b, rate_mv18, select_params, RateReport, RateVariant,
};
pub use report::CheckReport;
pub use resolvents::ResolventEvaluator;
pub use sampling::Sampler;
pub use splitting::{
    apply_t, certify_solution, check_metric_inequality, iterate, Certificate, DrOperator, DrParams, IterateOptions,
    IterationTrace, Mode, SolveResult,
};
pub use validation::{run_validation, ValidationOptions, ValidationReport};
