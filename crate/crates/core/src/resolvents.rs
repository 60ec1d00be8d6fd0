//! Closed-form resolvents `J_{γA} = (Id + γA)⁻¹`, relaxed resolvents, and
//! sampled checks of the metric estimates they satisfy.

use nalgebra::{Dyn, LU};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::operators::{OperatorHandle, OperatorKind};
use crate::rates::{alpha_j_both, compute_alpha_j};
use crate::report::CheckReport;
use crate::sampling::Sampler;

/// Slack used by the sampled resolvent checks, scaled by `1 + ‖x−y‖²`.
pub const RESOLVENT_TOLERANCE: f64 = 1e-10;

/// Reciprocal condition estimate below which `I + γM` is treated as singular.
const PIVOT_RATIO_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone)]
enum Factor {
    /// `a = x / (1 + γs)`.
    Scalar {
        inv: f64,
    },
    /// `a = (I + γM)⁻¹ (x − γc)`.
    Linear {
        lu: LU<f64, Dyn, Dyn>,
        shift: Option<Vector>,
    },
    SoftThreshold {
        thresholds: Vector,
    },
    Clamp {
        lower: Vector,
        upper: Vector,
    },
    /// `a = J_inner(x · scale)` with `inner` at step `γ·scale`.
    Shifted {
        scale: f64,
        inner: Box<ResolventEvaluator>,
    },
}

/// Resolvent of `γA` with its factorization cached for repeated use.
#[derive(Debug, Clone)]
pub struct ResolventEvaluator {
    op: OperatorHandle,
    gamma: f64,
    factor: Factor,
}

impl ResolventEvaluator {
    /// Requires `γ > 0` and `1 + γα > 0`, which makes `J_{γA}` single-valued
    /// with full domain for maximal α-monotone `A`.
    pub fn new(op: &OperatorHandle, gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::SingularSystem(format!("step size must be positive and finite, got {gamma}")));
        }
        let margin = 1.0 + gamma * op.alpha();
        if !(margin > 0.0) {
            return Err(Error::SingularSystem(format!(
                "1 + γα = {margin} <= 0 (γ = {gamma}, α = {}); resolvent is not single-valued",
                op.alpha()
            )));
        }
        let factor = build_factor(op, gamma)?;
        Ok(Self { op: op.clone(), gamma, factor })
    }

    pub fn op(&self) -> &OperatorHandle {
        &self.op
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    /// The unique `a` with `x ∈ a + γAa`.
    pub fn resolve(&self, x: &Vector) -> Result<Vector> {
        self.op.check_input(x)?;
        Ok(self.apply(x))
    }

    fn apply(&self, x: &Vector) -> Vector {
        match &self.factor {
            Factor::Scalar { inv } => x * *inv,
            Factor::Linear { lu, shift } => {
                let rhs = match shift {
                    Some(c) => x - c,
                    None => x.clone(),
                };
                lu.solve(&rhs).expect("factorization checked invertible at construction")
            }
            Factor::SoftThreshold { thresholds } => {
                Vector::from_iterator(x.len(), x.iter().zip(thresholds.iter()).map(|(v, t)| soft_threshold(*v, *t)))
            }
            Factor::Clamp { lower, upper } => Vector::from_iterator(
                x.len(),
                x.iter().zip(lower.iter().zip(upper.iter())).map(|(v, (l, u))| v.clamp(*l, *u)),
            ),
            Factor::Shifted { scale, inner } => inner.apply(&(x * *scale)),
        }
    }

    /// `(1−λ)x + λ J x`.
    pub fn relaxed_resolve(&self, lambda: f64, x: &Vector) -> Result<Vector> {
        let j = self.resolve(x)?;
        Ok(x * (1.0 - lambda) + j * lambda)
    }

    /// Checks `⟨x−y, Jx−Jy⟩ ≥ (1+γα)‖Jx−Jy‖²` and
    /// `‖x−y‖ ≥ (1+γα)‖Jx−Jy‖` over seeded pairs.
    pub fn check_cocoercivity(&self, samples: usize, seed: u64) -> CocoercivityReport {
        let c = 1.0 + self.gamma * self.op.alpha();
        let mut inner = CheckReport::start("cocoercivity_inner", RESOLVENT_TOLERANCE);
        let mut norm = CheckReport::start("cocoercivity_norm", RESOLVENT_TOLERANCE);
        let mut rng = Sampler::new(seed);
        for _ in 0..samples.max(1) {
            let (x, y, jx, jy) = self.sample_pair(&mut rng);
            let d = &x - &y;
            let dj = &jx - &jy;
            let scale = 1.0 + d.norm_squared();
            inner.record((d.dot(&dj) - c * dj.norm_squared()) / scale);
            norm.record((d.norm() - c * dj.norm()) / scale);
        }
        CocoercivityReport {
            passed: inner.passed && norm.passed,
            cocoercivity: c,
            inner: inner.finish(),
            norm: norm.finish(),
        }
    }

    /// Checks the three estimates available when `A` is ℓ-Lipschitz:
    /// expansion `‖Jx−Jy‖ ≥ ‖x−y‖/(1+γℓ)`, the quadratic bound
    /// `2⟨x−y,Jx−Jy⟩ ≥ ‖x−y‖² + (1−γ²ℓ²)‖Jx−Jy‖²`, and strong monotonicity
    /// `⟨x−y,Jx−Jy⟩ ≥ (1+γα)α_J‖x−y‖²`.
    pub fn check_lipschitz_resolvent(&self, samples: usize, seed: u64) -> Result<LipschitzResolventReport> {
        let ell = self.op.lipschitz().ok_or(Error::MissingLipschitz)?;
        let gamma = self.gamma;
        let alpha = self.op.alpha();
        let equality = self.op.is_equality_class();
        let alpha_j = compute_alpha_j(alpha, ell, gamma, equality)?;
        let (branch_ge, branch_le) = alpha_j_both(alpha, ell, gamma);
        let mut expansion = CheckReport::start("resolvent_expansion", RESOLVENT_TOLERANCE);
        let mut quadratic = CheckReport::start("resolvent_quadratic", RESOLVENT_TOLERANCE);
        let mut strong = CheckReport::start("resolvent_strong_monotonicity", RESOLVENT_TOLERANCE);
        let mut rng = Sampler::new(seed);
        for _ in 0..samples.max(1) {
            let (x, y, jx, jy) = self.sample_pair(&mut rng);
            let d = &x - &y;
            let dj = &jx - &jy;
            let d2 = d.norm_squared();
            let scale = 1.0 + d2;
            expansion.record((dj.norm() - d.norm() / (1.0 + gamma * ell)) / scale);
            quadratic.record((2.0 * d.dot(&dj) - d2 - (1.0 - gamma * gamma * ell * ell) * dj.norm_squared()) / scale);
            strong.record((d.dot(&dj) - (1.0 + gamma * alpha) * alpha_j * d2) / scale);
        }
        Ok(LipschitzResolventReport {
            passed: expansion.passed && quadratic.passed && strong.passed,
            alpha_j,
            alpha_j_large_step: branch_ge,
            alpha_j_small_step: branch_le,
            equality_branch: equality,
            expansion: expansion.finish(),
            quadratic: quadratic.finish(),
            strong_monotonicity: strong.finish(),
        })
    }

    fn sample_pair(&self, rng: &mut Sampler) -> (Vector, Vector, Vector, Vector) {
        // Scale 2 puts a fair share of samples beyond l1 kinks and unit boxes.
        let (x, y) = rng.normal_pair(self.dim(), 2.0);
        let jx = self.apply(&x);
        let jy = self.apply(&y);
        (x, y, jx, jy)
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct CocoercivityReport {
    pub passed: bool,
    pub cocoercivity: f64,
    pub inner: CheckReport,
    pub norm: CheckReport,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct LipschitzResolventReport {
    pub passed: bool,
    /// Value asserted in the strong-monotonicity check.
    pub alpha_j: f64,
    /// `1/(1+2γα+γ²ℓ²)`, valid when `γℓ ≥ 1`.
    pub alpha_j_large_step: f64,
    /// `1/((1+γα)(1+γℓ))`, valid when `γℓ ≤ 1`.
    pub alpha_j_small_step: f64,
    pub equality_branch: bool,
    pub expansion: CheckReport,
    pub quadratic: CheckReport,
    pub strong_monotonicity: CheckReport,
}

pub fn soft_threshold(v: f64, t: f64) -> f64 {
    if v > t {
        v - t
    } else if v < -t {
        v + t
    } else {
        0.0
    }
}

fn build_factor(op: &OperatorHandle, gamma: f64) -> Result<Factor> {
    let n = op.dim();
    let linear = |m: Matrix, offset: Option<&Vector>| -> Result<Factor> {
        let system = Matrix::identity(n, n) + m * gamma;
        let lu = system.lu();
        let diag = lu.u().diagonal().map(f64::abs);
        let (lo, hi) = (diag.min(), diag.max());
        if !lu.is_invertible() || !(lo > PIVOT_RATIO_FLOOR * hi) {
            return Err(Error::SingularSystem(format!("I + γM is numerically singular (γ = {gamma})")));
        }
        let shift = offset.filter(|c| c.iter().any(|v| *v != 0.0)).map(|c| c * gamma);
        Ok(Factor::Linear { lu, shift })
    };
    match op.kind() {
        OperatorKind::ScaledIdentity { scale } => {
            let denom = 1.0 + gamma * scale;
            if !(denom > 0.0) {
                return Err(Error::SingularSystem(format!("1 + γs = {denom} <= 0")));
            }
            Ok(Factor::Scalar { inv: 1.0 / denom })
        }
        OperatorKind::LinearMatrix { matrix, offset } => linear(matrix.clone(), offset.as_ref()),
        OperatorKind::SkewPlusAlpha { skew, shift, offset } => {
            linear(skew + Matrix::identity(n, n) * *shift, offset.as_ref())
        }
        OperatorKind::ProxQuadratic { q, b } => linear(q.clone(), Some(b)),
        OperatorKind::ProxL1 { weights } => Ok(Factor::SoftThreshold { thresholds: weights * gamma }),
        OperatorKind::ProxBox { lower, upper } => Ok(Factor::Clamp { lower: lower.clone(), upper: upper.clone() }),
        OperatorKind::ProxShifted { base, c } => {
            // argmin f(z) + (c/2)|z|² + |z−x|²/(2γ)
            //   = argmin f(z) + (1+γc)/(2γ) |z − x/(1+γc)|²
            let denom = 1.0 + gamma * c;
            if !(denom > 0.0) {
                return Err(Error::SingularSystem(format!("1 + γc = {denom} <= 0 for shifted prox")));
            }
            let inner = ResolventEvaluator::new(base, gamma / denom)?;
            Ok(Factor::Shifted { scale: 1.0 / denom, inner: Box::new(inner) })
        }
    }
}
