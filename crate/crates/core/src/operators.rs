//! Operator handles: monotonicity metadata plus the payload needed to
//! evaluate each built-in operator and its resolvent in closed form.
//!
//! Every built-in is maximally α-monotone: the continuous full-domain kinds
//! (scaled identity, matrices, quadratic gradients) by continuity, and the
//! prox kinds because they are subdifferentials of lower semicontinuous
//! α-convex functions.

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Vector};
use crate::report::CheckReport;
use crate::sampling::Sampler;

/// Tolerance on `max |S + Sᵀ|` for skew payloads.
pub const SKEW_TOLERANCE: f64 = 1e-12;
/// Relative slack on sampled monotonicity / Lipschitz margins.
pub const MONOTONICITY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub enum OperatorKind {
    /// `x ↦ s·x`.
    ScaledIdentity { scale: f64 },
    /// `x ↦ Mx + c`.
    LinearMatrix { matrix: Matrix, offset: Option<Vector> },
    /// `x ↦ Sx + a·x + c` with `Sᵀ = −S`.
    SkewPlusAlpha { skew: Matrix, shift: f64, offset: Option<Vector> },
    /// Gradient of `½xᵀQx + bᵀx`, `Q` symmetric.
    ProxQuadratic { q: Matrix, b: Vector },
    /// Subdifferential of `Σ wᵢ|xᵢ|`.
    ProxL1 { weights: Vector },
    /// Normal cone of the box `[lower, upper]`.
    ProxBox { lower: Vector, upper: Vector },
    /// Subdifferential of `f + (c/2)‖·‖²` for a prox-capable base `f`.
    ProxShifted { base: Box<OperatorHandle>, c: f64 },
}

impl OperatorKind {
    pub fn name(&self) -> &'static str {
        match self {
            OperatorKind::ScaledIdentity { .. } => "scaled_identity",
            OperatorKind::LinearMatrix { .. } => "linear_matrix",
            OperatorKind::SkewPlusAlpha { .. } => "skew_plus_alpha",
            OperatorKind::ProxQuadratic { .. } => "prox_quadratic",
            OperatorKind::ProxL1 { .. } => "prox_l1",
            OperatorKind::ProxBox { .. } => "prox_box_indicator",
            OperatorKind::ProxShifted { .. } => "prox_shifted",
        }
    }
}

/// A resolvent-evaluable operator on `R^n` with declared monotonicity
/// constant `alpha` and optional Lipschitz constant.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorHandle {
    dim: usize,
    alpha: f64,
    lipschitz: Option<f64>,
    kind: OperatorKind,
    alpha_overridden: bool,
}

impl OperatorHandle {
    pub fn scaled_identity(dim: usize, scale: f64) -> Result<Self> {
        check_dim(dim)?;
        check_finite("scale", scale)?;
        Ok(Self {
            dim,
            alpha: scale,
            lipschitz: Some(scale.abs()),
            kind: OperatorKind::ScaledIdentity { scale },
            alpha_overridden: false,
        })
    }

    /// `x ↦ Mx`. The monotonicity constant is the smallest eigenvalue of
    /// the symmetric part of `M`; the Lipschitz constant is `‖M‖₂`.
    pub fn linear_matrix(matrix: Matrix) -> Result<Self> {
        Self::affine_matrix(matrix, None)
    }

    pub fn affine_matrix(matrix: Matrix, offset: Option<Vector>) -> Result<Self> {
        let dim = square_dim(&matrix, "matrix")?;
        check_offset(dim, offset.as_ref())?;
        let alpha = linalg::sym_part_min_eigenvalue(&matrix);
        let lip = linalg::spectral_norm(&matrix).max(alpha.abs());
        Ok(Self {
            dim,
            alpha,
            lipschitz: Some(lip),
            kind: OperatorKind::LinearMatrix { matrix, offset },
            alpha_overridden: false,
        })
    }

    /// `x ↦ Sx + αx`, which satisfies the monotonicity inequality with
    /// equality.
    pub fn skew_plus_alpha(skew: Matrix, alpha: f64) -> Result<Self> {
        Self::affine_skew_plus_alpha(skew, alpha, None)
    }

    pub fn affine_skew_plus_alpha(skew: Matrix, alpha: f64, offset: Option<Vector>) -> Result<Self> {
        let dim = square_dim(&skew, "skew")?;
        check_finite("alpha", alpha)?;
        check_offset(dim, offset.as_ref())?;
        let defect = linalg::skew_defect(&skew);
        if defect > SKEW_TOLERANCE {
            return Err(Error::InvalidOperator(format!("skew payload is not skew-symmetric: max|S+Sᵀ| = {defect:e}")));
        }
        let full = &skew + Matrix::identity(dim, dim) * alpha;
        let lip = linalg::spectral_norm(&full).max(alpha.abs());
        Ok(Self {
            dim,
            alpha,
            lipschitz: Some(lip),
            kind: OperatorKind::SkewPlusAlpha { skew, shift: alpha, offset },
            alpha_overridden: false,
        })
    }

    /// Gradient of `f(x) = ½xᵀQx + bᵀx`; `Q` is symmetrised.
    pub fn prox_quadratic(q: Matrix, b: Vector) -> Result<Self> {
        let dim = square_dim(&q, "Q")?;
        check_offset(dim, Some(&b))?;
        let defect = linalg::symmetry_defect(&q);
        if defect > 1e-10 * (1.0 + q.amax()) {
            return Err(Error::InvalidOperator(format!("Q is not symmetric: max|Q-Qᵀ| = {defect:e}")));
        }
        let q = (&q + q.transpose()) * 0.5;
        let eig = q.symmetric_eigenvalues();
        let alpha = eig.min();
        let lip = eig.amax().max(alpha.abs());
        Ok(Self {
            dim,
            alpha,
            lipschitz: Some(lip),
            kind: OperatorKind::ProxQuadratic { q, b },
            alpha_overridden: false,
        })
    }

    pub fn prox_l1(dim: usize, weight: f64) -> Result<Self> {
        check_dim(dim)?;
        Self::prox_l1_weighted(Vector::from_element(dim, weight))
    }

    pub fn prox_l1_weighted(weights: Vector) -> Result<Self> {
        check_dim(weights.len())?;
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::InvalidOperator("l1 weights must be finite and nonnegative".into()));
        }
        Ok(Self {
            dim: weights.len(),
            alpha: 0.0,
            lipschitz: None,
            kind: OperatorKind::ProxL1 { weights },
            alpha_overridden: false,
        })
    }

    pub fn prox_box(lower: Vector, upper: Vector) -> Result<Self> {
        check_dim(lower.len())?;
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch { expected: lower.len(), found: upper.len() });
        }
        if lower.iter().zip(upper.iter()).any(|(l, u)| !(l <= u) || l.is_nan()) {
            return Err(Error::InvalidOperator("box requires lower <= upper componentwise".into()));
        }
        Ok(Self {
            dim: lower.len(),
            alpha: 0.0,
            lipschitz: None,
            kind: OperatorKind::ProxBox { lower, upper },
            alpha_overridden: false,
        })
    }

    /// Subdifferential of `f + (c/2)‖·‖²` where `f` is the function behind
    /// `base`. Nested shifts collapse into one.
    pub fn prox_shifted(base: OperatorHandle, c: f64) -> Result<Self> {
        check_finite("c", c)?;
        let (base, c) = match base.kind {
            OperatorKind::ProxShifted { base: inner, c: c0 } => (*inner, c0 + c),
            _ => (base, c),
        };
        if base.function_value(&Vector::zeros(base.dim)).is_none() {
            return Err(Error::InvalidOperator(format!(
                "prox_shifted base `{}` has no associated function",
                base.kind.name()
            )));
        }
        Ok(Self {
            dim: base.dim,
            alpha: base.alpha + c,
            lipschitz: base.lipschitz.map(|l| l + c.abs()),
            alpha_overridden: base.alpha_overridden,
            kind: OperatorKind::ProxShifted { base: Box::new(base), c },
        })
    }

    /// Replace the declared monotonicity constant without touching the
    /// payload. Used to probe the validation battery with wrong metadata.
    pub fn with_declared_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self.alpha_overridden = true;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn lipschitz(&self) -> Option<f64> {
        self.lipschitz
    }

    pub fn kind(&self) -> &OperatorKind {
        &self.kind
    }

    pub fn kind_name(&self) -> &'static str {
        self.kind.name()
    }

    /// All built-ins are maximal.
    pub fn maximal(&self) -> bool {
        true
    }

    pub fn alpha_overridden(&self) -> bool {
        self.alpha_overridden
    }

    /// Structurally of the form skew + αI with the declared α, so the
    /// monotonicity inequality holds with equality.
    pub fn is_equality_class(&self) -> bool {
        matches!(self.kind, OperatorKind::SkewPlusAlpha { .. }) && !self.alpha_overridden
    }

    pub fn supports_forward(&self) -> bool {
        match &self.kind {
            OperatorKind::ProxL1 { .. } | OperatorKind::ProxBox { .. } => false,
            OperatorKind::ProxShifted { base, .. } => base.supports_forward(),
            _ => true,
        }
    }

    /// Linear (not merely affine) operators.
    pub fn is_linear(&self) -> bool {
        let zero = |v: &Option<Vector>| v.as_ref().is_none_or(|v| v.iter().all(|x| *x == 0.0));
        match &self.kind {
            OperatorKind::ScaledIdentity { .. } => true,
            OperatorKind::LinearMatrix { offset, .. } => zero(offset),
            OperatorKind::SkewPlusAlpha { offset, .. } => zero(offset),
            OperatorKind::ProxQuadratic { b, .. } => b.iter().all(|x| *x == 0.0),
            OperatorKind::ProxShifted { base, .. } => base.is_linear(),
            _ => false,
        }
    }

    /// `(M, c)` with `Ax = Mx + c`, for affine kinds.
    pub fn affine_parts(&self) -> Option<(Matrix, Vector)> {
        let n = self.dim;
        let or_zero = |v: &Option<Vector>| v.clone().unwrap_or_else(|| Vector::zeros(n));
        match &self.kind {
            OperatorKind::ScaledIdentity { scale } => Some((Matrix::identity(n, n) * *scale, Vector::zeros(n))),
            OperatorKind::LinearMatrix { matrix, offset } => Some((matrix.clone(), or_zero(offset))),
            OperatorKind::SkewPlusAlpha { skew, shift, offset } => {
                Some((skew + Matrix::identity(n, n) * *shift, or_zero(offset)))
            }
            OperatorKind::ProxQuadratic { q, b } => Some((q.clone(), b.clone())),
            OperatorKind::ProxShifted { base, c } => {
                base.affine_parts().map(|(m, v)| (m + Matrix::identity(n, n) * *c, v))
            }
            _ => None,
        }
    }

    /// Value of the function whose (Fréchet) subdifferential is this
    /// operator, when there is one. Box indicators return `+∞` outside.
    pub fn function_value(&self, x: &Vector) -> Option<f64> {
        match &self.kind {
            OperatorKind::ScaledIdentity { scale } => Some(0.5 * scale * x.norm_squared()),
            OperatorKind::LinearMatrix { matrix, offset } => {
                if linalg::symmetry_defect(matrix) != 0.0 {
                    return None;
                }
                let lin = offset.as_ref().map_or(0.0, |c| c.dot(x));
                Some(0.5 * x.dot(&(matrix * x)) + lin)
            }
            OperatorKind::SkewPlusAlpha { skew, shift, offset } => {
                if skew.amax() != 0.0 {
                    return None;
                }
                let lin = offset.as_ref().map_or(0.0, |c| c.dot(x));
                Some(0.5 * shift * x.norm_squared() + lin)
            }
            OperatorKind::ProxQuadratic { q, b } => Some(0.5 * x.dot(&(q * x)) + b.dot(x)),
            OperatorKind::ProxL1 { weights } => Some(weights.iter().zip(x.iter()).map(|(w, v)| w * v.abs()).sum()),
            OperatorKind::ProxBox { lower, upper } => {
                let inside = x.iter().zip(lower.iter().zip(upper.iter())).all(|(v, (l, u))| l <= v && v <= u);
                Some(if inside { 0.0 } else { f64::INFINITY })
            }
            OperatorKind::ProxShifted { base, c } => base.function_value(x).map(|f| f + 0.5 * c * x.norm_squared()),
        }
    }

    /// `Ax` for single-valued kinds.
    pub fn forward_eval(&self, x: &Vector) -> Result<Vector> {
        self.check_input(x)?;
        match &self.kind {
            OperatorKind::ScaledIdentity { scale } => Ok(x * *scale),
            OperatorKind::LinearMatrix { matrix, offset } => Ok(add_offset(matrix * x, offset)),
            OperatorKind::SkewPlusAlpha { skew, shift, offset } => Ok(add_offset(skew * x + x * *shift, offset)),
            OperatorKind::ProxQuadratic { q, b } => Ok(q * x + b),
            OperatorKind::ProxL1 { .. } | OperatorKind::ProxBox { .. } => {
                Err(Error::UnsupportedForward(self.kind.name()))
            }
            OperatorKind::ProxShifted { base, c } => {
                base.forward_eval(x).map(|v| v + x * *c).map_err(|_| Error::UnsupportedForward(self.kind.name()))
            }
        }
    }

    /// `A + c·Id`: monotonicity constant `α + c`, resolvent still closed-form.
    pub fn shift(&self, c: f64) -> OperatorHandle {
        let n = self.dim;
        let mut shifted = match &self.kind {
            OperatorKind::ScaledIdentity { scale } => {
                Self::scaled_identity(n, scale + c).expect("finite shift of valid operator")
            }
            OperatorKind::LinearMatrix { matrix, offset } => {
                Self::affine_matrix(matrix + Matrix::identity(n, n) * c, offset.clone())
                    .expect("shift preserves matrix shape")
            }
            OperatorKind::SkewPlusAlpha { skew, shift, offset } => {
                Self::affine_skew_plus_alpha(skew.clone(), shift + c, offset.clone())
                    .expect("shift preserves skew payload")
            }
            OperatorKind::ProxQuadratic { q, b } => {
                Self::prox_quadratic(q + Matrix::identity(n, n) * c, b.clone()).expect("shift preserves symmetry")
            }
            OperatorKind::ProxShifted { base, c: c0 } if c0 + c == 0.0 => {
                let mut base = (**base).clone();
                base.alpha = self.alpha + c;
                base.alpha_overridden = self.alpha_overridden;
                return base;
            }
            _ => Self::prox_shifted(self.clone(), c).expect("prox kinds have function values"),
        };
        if self.alpha_overridden {
            shifted.alpha = self.alpha + c;
            shifted.alpha_overridden = true;
        }
        shifted
    }

    /// Sample pairs `(x, y)` from a seeded standard normal and check
    /// `⟨x−y, Ax−Ay⟩ ≥ α‖x−y‖²`. Margins are normalised by `‖x−y‖²`.
    pub fn verify_monotonicity(&self, samples: usize, seed: u64) -> Result<CheckReport> {
        if !self.supports_forward() {
            return Err(Error::UnsupportedForward(self.kind.name()));
        }
        let mut report = CheckReport::start("monotonicity", MONOTONICITY_TOLERANCE);
        let mut rng = Sampler::new(seed);
        for _ in 0..samples.max(1) {
            let (x, y) = rng.normal_pair(self.dim, 1.0);
            let d = &x - &y;
            let d2 = d.norm_squared();
            if d2 == 0.0 {
                continue;
            }
            let du = self.forward_eval(&x)? - self.forward_eval(&y)?;
            report.record((d.dot(&du) - self.alpha * d2) / d2);
        }
        Ok(report.finish())
    }

    /// Check `‖Ax−Ay‖ ≤ ℓ‖x−y‖(1+1e-12)` on seeded pairs; margins are
    /// normalised by `‖x−y‖`.
    pub fn check_lipschitz(&self, samples: usize, seed: u64) -> Result<CheckReport> {
        let lip = self.lipschitz.ok_or(Error::MissingLipschitz)?;
        if !self.supports_forward() {
            return Err(Error::UnsupportedForward(self.kind.name()));
        }
        let mut report = CheckReport::start("operator_lipschitz", 0.0);
        let mut rng = Sampler::new(seed);
        for _ in 0..samples.max(1) {
            let (x, y) = rng.normal_pair(self.dim, 1.0);
            let dn = (&x - &y).norm();
            if dn == 0.0 {
                continue;
            }
            let du = (self.forward_eval(&x)? - self.forward_eval(&y)?).norm();
            report.record((lip * dn * (1.0 + 1e-12) - du) / dn);
        }
        Ok(report.finish())
    }

    pub(crate) fn check_input(&self, x: &Vector) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: x.len() });
        }
        Ok(())
    }
}

fn add_offset(v: Vector, offset: &Option<Vector>) -> Vector {
    match offset {
        Some(c) => v + c,
        None => v,
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::InvalidOperator("dimension must be positive".into()));
    }
    Ok(())
}

fn check_finite(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() {
        return Err(Error::InvalidOperator(format!("{name} must be finite")));
    }
    Ok(())
}

fn square_dim(m: &Matrix, name: &str) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::InvalidOperator(format!("{name} must be square, got {}x{}", m.nrows(), m.ncols())));
    }
    check_dim(m.nrows())?;
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidOperator(format!("{name} has non-finite entries")));
    }
    Ok(m.nrows())
}

fn check_offset(dim: usize, offset: Option<&Vector>) -> Result<()> {
    if let Some(c) = offset {
        if c.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: c.len() });
        }
        if c.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidOperator("offset has non-finite entries".into()));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[f64]) -> Vector {
        Vector::from_row_slice(xs)
    }

    fn m(n: usize, xs: &[f64]) -> Matrix {
        Matrix::from_row_slice(n, n, xs)
    }

    #[test]
    fn forward_eval_examples() {
        let a = OperatorHandle::scaled_identity(2, 2.0).unwrap();
        assert_eq!(a.forward_eval(&v(&[3.0, -1.0])).unwrap(), v(&[6.0, -2.0]));

        let rot = OperatorHandle::linear_matrix(m(2, &[0.0, 1.0, -1.0, 0.0])).unwrap();
        assert_eq!(rot.forward_eval(&v(&[1.0, 0.0])).unwrap(), v(&[0.0, -1.0]));
    }

    #[test]
    fn quadratic_forward_matches_finite_difference_gradient() {
        let q = m(2, &[2.0, 0.0, 0.0, 4.0]);
        let b = v(&[1.0, 0.0]);
        let op = OperatorHandle::prox_quadratic(q, b).unwrap();
        let x = v(&[1.0, 1.0]);
        let h = 1e-6;
        let fd = Vector::from_fn(2, |i, _| {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[i] += h;
            xm[i] -= h;
            (op.function_value(&xp).unwrap() - op.function_value(&xm).unwrap()) / (2.0 * h)
        });
        // Frozen from the central difference above: (3, 4).
        assert!((fd.clone() - v(&[3.0, 4.0])).amax() < 1e-8);
        assert_eq!(op.forward_eval(&x).unwrap(), v(&[3.0, 4.0]));
    }

    #[test]
    fn forward_unsupported_and_dimension_errors() {
        let l1 = OperatorHandle::prox_l1(2, 1.0).unwrap();
        assert_eq!(l1.forward_eval(&v(&[1.0, 2.0])), Err(Error::UnsupportedForward("prox_l1")));
        let bx = OperatorHandle::prox_box(v(&[-1.0]), v(&[1.0])).unwrap();
        assert!(matches!(bx.forward_eval(&v(&[0.0])), Err(Error::UnsupportedForward(_))));
        let a = OperatorHandle::scaled_identity(2, 1.0).unwrap();
        assert_eq!(a.forward_eval(&v(&[1.0])), Err(Error::DimensionMismatch { expected: 2, found: 1 }));
    }

    #[test]
    fn linear_matrix_alpha_is_symmetric_part_eigenvalue() {
        let op = OperatorHandle::linear_matrix(m(2, &[1.0, 3.0, -1.0, -2.0])).unwrap();
        // Symmetric part [[1,1],[1,-2]] has eigenvalues (-1 ± √13)/2.
        let expected = (-1.0 - 13f64.sqrt()) / 2.0;
        assert!((op.alpha() - expected).abs() < 1e-14);
        assert!(op.lipschitz().unwrap() >= op.alpha().abs());
    }

    #[test]
    fn skew_payload_is_validated() {
        assert!(OperatorHandle::skew_plus_alpha(m(2, &[0.0, 1.0, -1.0, 0.0]), 0.5).is_ok());
        let err = OperatorHandle::skew_plus_alpha(m(2, &[0.0, 1.0, -1.0 + 1e-9, 0.0]), 0.5);
        assert!(matches!(err, Err(Error::InvalidOperator(_))));
    }

    #[test]
    fn shift_examples() {
        let a = OperatorHandle::scaled_identity(3, 1.0).unwrap().shift(-1.0);
        assert!(matches!(a.kind(), OperatorKind::ScaledIdentity { scale } if *scale == 0.0));
        assert_eq!(a.alpha(), 0.0);

        let s = OperatorHandle::skew_plus_alpha(m(2, &[0.0, 1.0, -1.0, 0.0]), 0.0).unwrap().shift(0.5);
        assert!(matches!(s.kind(), OperatorKind::SkewPlusAlpha { shift, .. } if *shift == 0.5));
        assert_eq!(s.alpha(), 0.5);
        assert!(s.is_equality_class());

        let l1 = OperatorHandle::prox_l1(2, 1.0).unwrap().shift(-0.25);
        assert_eq!(l1.kind_name(), "prox_shifted");
        assert_eq!(l1.alpha(), -0.25);
        let back = l1.shift(0.25);
        assert_eq!(back.kind_name(), "prox_l1");
    }

    #[test]
    fn shifted_lipschitz_does_not_exceed_conservative_bound() {
        let op = OperatorHandle::linear_matrix(m(2, &[1.0, 2.0, 0.0, -1.0])).unwrap();
        for c in [-3.0, -0.5, 0.7, 4.0] {
            let s = op.shift(c);
            assert!(s.lipschitz().unwrap() <= op.lipschitz().unwrap() + c.abs() + 1e-12);
            assert!((s.alpha() - (op.alpha() + c)).abs() < 1e-12);
        }
    }

    #[test]
    fn verify_monotonicity_examples() {
        let a = OperatorHandle::scaled_identity(3, 3.0).unwrap();
        let r = a.verify_monotonicity(100, 1).unwrap();
        assert!(r.passed);
        assert!(r.worst_margin.abs() < 1e-14);

        let s = OperatorHandle::skew_plus_alpha(m(2, &[0.0, 1.0, -1.0, 0.0]), 0.5).unwrap();
        let r = s.verify_monotonicity(1000, 2).unwrap();
        assert!(r.passed && r.worst_margin.abs() < 1e-12);

        let bad = OperatorHandle::linear_matrix(m(2, &[1.0, 0.0, 0.0, -2.0])).unwrap().with_declared_alpha(0.0);
        let r = bad.verify_monotonicity(1000, 3).unwrap();
        assert!(!r.passed);
        assert!(r.worst_margin < -1.0);
        assert!(r.worst_margin >= -2.0 - 1e-12);

        let l1 = OperatorHandle::prox_l1(2, 1.0).unwrap();
        assert!(l1.verify_monotonicity(10, 0).is_err());
    }

    #[test]
    fn affine_and_linear_flags() {
        let q = OperatorHandle::prox_quadratic(m(2, &[1.0, 0.0, 0.0, 1.0]), v(&[1.0, 0.0])).unwrap();
        assert!(!q.is_linear());
        let (mm, c) = q.affine_parts().unwrap();
        assert_eq!(mm, Matrix::identity(2, 2));
        assert_eq!(c, v(&[1.0, 0.0]));
        assert!(OperatorHandle::prox_l1(2, 1.0).unwrap().affine_parts().is_none());
        assert!(OperatorHandle::scaled_identity(2, -1.0).unwrap().is_linear());
    }

    #[test]
    fn shifted_prox_function_value() {
        let g = OperatorHandle::prox_shifted(OperatorHandle::prox_l1(2, 2.0).unwrap(), -1.0).unwrap();
        let x = v(&[1.0, -2.0]);
        assert_eq!(g.function_value(&x), Some(2.0 * 3.0 - 0.5 * 5.0));
        assert_eq!(g.alpha(), -1.0);
        assert!(g.lipschitz().is_none());
    }
}
