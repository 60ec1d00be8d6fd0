//! Parameter feasibility and selection, and the closed-form contraction
//! constants of the adaptive and classical DR operators.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::splitting::DrParams;

/// Absolute slack on equality constraints and closed-interval endpoints.
pub const FEASIBILITY_TOLERANCE: f64 = 1e-12;
/// The lower end of the μ interval is clamped to `1 + MU_FLOOR_OFFSET`.
pub const MU_FLOOR_OFFSET: f64 = 1e-6;

/// One named constraint. `margin >= 0` (or `> 0` for strict constraints)
/// means satisfied; equality constraints report `-|residual|`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Constraint {
    pub name: &'static str,
    pub margin: f64,
    pub satisfied: bool,
}

impl Constraint {
    fn strict(name: &'static str, margin: f64) -> Self {
        Self { name, margin, satisfied: margin > 0.0 }
    }

    fn closed(name: &'static str, margin: f64) -> Self {
        Self { name, margin, satisfied: margin >= -FEASIBILITY_TOLERANCE }
    }

    fn equality(name: &'static str, residual: f64, scale: f64) -> Self {
        Self { name, margin: -residual.abs(), satisfied: residual.abs() <= FEASIBILITY_TOLERANCE * scale }
    }
}

pub fn all_satisfied(constraints: &[Constraint]) -> bool {
    constraints.iter().all(|c| c.satisfied)
}

/// The four constraints `1+2γα > 0`, `μ ∈ [2−2γβ, 2+2γα]`,
/// `(λ−1)(μ−1) = 1` and `δ = (λ−1)γ`, plus positivity of the steps and
/// `λ, μ > 1`.
pub fn parameter_constraints(params: &DrParams, alpha: f64, beta: f64) -> Vec<Constraint> {
    let DrParams { gamma, delta, lambda, mu, .. } = *params;
    vec![
        Constraint::strict("gamma_positive", gamma),
        Constraint::strict("delta_positive", delta),
        Constraint::strict("lambda_above_one", lambda - 1.0),
        Constraint::strict("mu_above_one", mu - 1.0),
        Constraint::strict("one_plus_two_gamma_alpha", 1.0 + 2.0 * gamma * alpha),
        Constraint::closed("mu_lower", mu - (2.0 - 2.0 * gamma * beta)),
        Constraint::closed("mu_upper", (2.0 + 2.0 * gamma * alpha) - mu),
        Constraint::equality("cq_product", (lambda - 1.0) * (mu - 1.0) - 1.0, 1.0),
        Constraint::equality("cq_delta", delta - (lambda - 1.0) * gamma, gamma),
    ]
}

/// The mirrored constraint set `1+2δβ > 0`, `λ ∈ [2−2δα, 2+2δβ]`,
/// `(μ−1)(λ−1) = 1` and `γ = (μ−1)δ`.
pub fn parameter_constraints_symmetric(params: &DrParams, alpha: f64, beta: f64) -> Vec<Constraint> {
    let DrParams { gamma, delta, lambda, mu, .. } = *params;
    vec![
        Constraint::strict("gamma_positive", gamma),
        Constraint::strict("delta_positive", delta),
        Constraint::strict("lambda_above_one", lambda - 1.0),
        Constraint::strict("mu_above_one", mu - 1.0),
        Constraint::strict("one_plus_two_delta_beta", 1.0 + 2.0 * delta * beta),
        Constraint::closed("lambda_lower", lambda - (2.0 - 2.0 * delta * alpha)),
        Constraint::closed("lambda_upper", (2.0 + 2.0 * delta * beta) - lambda),
        Constraint::equality("cq_product", (mu - 1.0) * (lambda - 1.0) - 1.0, 1.0),
        Constraint::equality("cq_gamma", gamma - (mu - 1.0) * delta, gamma),
    ]
}

pub fn check_params(params: &DrParams, alpha: f64, beta: f64) -> bool {
    all_satisfied(&parameter_constraints(params, alpha, beta))
}

pub fn check_params_symmetric(params: &DrParams, alpha: f64, beta: f64) -> bool {
    all_satisfied(&parameter_constraints_symmetric(params, alpha, beta))
}

/// Default parameters for an α-monotone `A` and β-monotone `B`.
///
/// γ is the hint when given, else 1 for `α ≥ 0` and `1/(4|α|)` otherwise.
/// μ is the midpoint of `[max(2−2γβ, 1+1e-6), 2+2γα]`, `λ = μ/(μ−1)` and
/// `δ = (λ−1)γ`.
pub fn select_params(alpha: f64, beta: f64, gamma_hint: Option<f64>, kappa: f64) -> Result<DrParams> {
    if !(alpha.is_finite() && beta.is_finite()) {
        return Err(Error::InvalidConstants(format!("non-finite constants α = {alpha}, β = {beta}")));
    }
    if alpha + beta < 0.0 {
        return Err(Error::InfeasibleParameters(format!("α + β = {} < 0", alpha + beta)));
    }
    let gamma = match gamma_hint {
        Some(g) => {
            if !(g > 0.0 && g.is_finite() && 1.0 + 2.0 * g * alpha > 0.0) {
                return Err(Error::InfeasibleParameters(format!(
                    "γ = {g} violates γ > 0 and 1 + 2γα > 0 (α = {alpha})"
                )));
            }
            g
        }
        None if alpha >= 0.0 => 1.0,
        None => 1.0 / (4.0 * alpha.abs()),
    };
    let upper = 2.0 + 2.0 * gamma * alpha;
    let lower = (2.0 - 2.0 * gamma * beta).max(1.0 + MU_FLOOR_OFFSET);
    if !(lower <= upper) {
        return Err(Error::InfeasibleParameters(format!("μ interval [{lower}, {upper}] is empty")));
    }
    let mu = if lower == upper { lower } else { 0.5 * (lower + upper) };
    let params = DrParams::adaptive(gamma, mu, kappa)?;
    Ok(params)
}

/// `(α = β = 0)` or `(α + β > 0 and 1 + γαβ/(α+β) > κ)`.
pub fn classical_condition(alpha: f64, beta: f64, gamma: f64, kappa: f64) -> bool {
    if alpha == 0.0 && beta == 0.0 {
        return true;
    }
    let s = alpha + beta;
    s > 0.0 && 1.0 + gamma * alpha * beta / s > kappa
}

/// The two branches `(1/(1+2γα+γ²ℓ²), 1/((1+γα)(1+γℓ)))`, valid for
/// `γℓ ≥ 1` and `γℓ ≤ 1` respectively.
pub fn alpha_j_both(alpha: f64, ell: f64, gamma: f64) -> (f64, f64) {
    let large = 1.0 / (1.0 + 2.0 * gamma * alpha + gamma * gamma * ell * ell);
    let small = 1.0 / ((1.0 + gamma * alpha) * (1.0 + gamma * ell));
    (large, small)
}

/// Strong-monotonicity modulus factor of `J_{γA}` for ℓ-Lipschitz,
/// α-monotone `A`. The equality class (skew + αI) always uses
/// `1/(1+2γα+γ²ℓ²)`.
pub fn compute_alpha_j(alpha: f64, ell: f64, gamma: f64, equality_class: bool) -> Result<f64> {
    if !(alpha.abs() <= ell) {
        return Err(Error::InvalidConstants(format!("|α| = {} exceeds ℓ = {ell}", alpha.abs())));
    }
    if !(gamma > 0.0) {
        return Err(Error::InvalidConstants(format!("γ = {gamma} must be positive")));
    }
    if !(1.0 + gamma * alpha > 0.0) {
        return Err(Error::InvalidConstants(format!("1 + γα = {} <= 0", 1.0 + gamma * alpha)));
    }
    let (large, small) = alpha_j_both(alpha, ell, gamma);
    Ok(if equality_class || gamma * ell >= 1.0 { large } else { small })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RateVariant {
    #[serde(rename = "lipA")]
    LipA,
    #[serde(rename = "lipB")]
    LipB,
    #[serde(rename = "classical_gis")]
    ClassicalGis,
    #[serde(rename = "classical_dr")]
    ClassicalDr,
    #[serde(rename = "classical_dr_sharp")]
    ClassicalDrSharp,
    #[serde(rename = "mv18")]
    Mv18,
}

impl RateVariant {
    pub fn as_str(self) -> &'static str {
        match self {
            RateVariant::LipA => "lipA",
            RateVariant::LipB => "lipB",
            RateVariant::ClassicalGis => "classical_gis",
            RateVariant::ClassicalDr => "classical_dr",
            RateVariant::ClassicalDrSharp => "classical_dr_sharp",
            RateVariant::Mv18 => "mv18",
        }
    }
}

/// Theoretical contraction constant with the intermediate quantities it
/// was built from. `rho` is `None` when the formula does not give a value
/// below 1 (no guarantee).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateReport {
    pub variant: RateVariant,
    pub rho: Option<f64>,
    pub no_guarantee: bool,
    pub alpha_j: Option<f64>,
    pub epsilon: Option<f64>,
    /// ε₁ for the A-side theorem, ε₂ for the B-side theorem.
    pub epsilon_aux: Option<f64>,
    pub phi: Option<f64>,
    pub feasibility: Vec<Constraint>,
    pub notes: Vec<String>,
}

impl RateReport {
    fn new(variant: RateVariant, rho: f64) -> Self {
        let ok = rho.is_finite() && (0.0..1.0).contains(&rho);
        Self {
            variant,
            rho: ok.then_some(rho),
            no_guarantee: !ok,
            alpha_j: None,
            epsilon: None,
            epsilon_aux: None,
            phi: None,
            feasibility: Vec::new(),
            notes: Vec::new(),
        }
    }

    /// `rho`, or an error when there is no guarantee.
    pub fn guaranteed(&self) -> Result<f64> {
        self.rho
            .ok_or_else(|| Error::RateNotApplicable(format!("{} formula gives no contraction", self.variant.as_str())))
    }
}

fn sqrt_nonneg(v: f64) -> f64 {
    // Radicands are nonnegative in exact arithmetic; clip rounding noise.
    v.max(0.0).sqrt()
}

fn require_feasible(params: &DrParams, alpha: f64, beta: f64) -> Result<Vec<Constraint>> {
    params.validate()?;
    let constraints = parameter_constraints(params, alpha, beta);
    if let Some(bad) = constraints.iter().find(|c| !c.satisfied) {
        return Err(Error::InfeasibleParameters(format!("constraint {} fails with margin {}", bad.name, bad.margin)));
    }
    Ok(constraints)
}

/// Lipschitz constant of T when `A` is α-monotone and ℓ-Lipschitz, `B` is
/// β-monotone and `α + β > 0`.
pub fn rate_lipschitz_a(
    alpha: f64,
    beta: f64,
    ell: f64,
    params: &DrParams,
    equality_class: bool,
) -> Result<RateReport> {
    if !(alpha.abs() <= ell) {
        return Err(Error::RateNotApplicable(format!("|α| = {} exceeds ℓ = {ell}", alpha.abs())));
    }
    if !(alpha + beta > 0.0) {
        return Err(Error::RateNotApplicable(format!("requires α + β > 0, got {}", alpha + beta)));
    }
    let feasibility = require_feasible(params, alpha, beta)?;
    let DrParams { gamma, delta, lambda, mu, kappa, .. } = *params;
    let eps = (mu - (2.0 - 2.0 * gamma * beta)) / (2.0 * (1.0 + delta * beta));
    let eps1 = kappa * eps / (1.0 - kappa);
    let a = 1.0 + gamma * alpha;
    let phi = eps1 * lambda * (2.0 * a + eps1 * (lambda * (1.0 + 2.0 * gamma * alpha) - 2.0 * a));
    let alpha_j = compute_alpha_j(alpha, ell, gamma, equality_class)?;
    let first = sqrt_nonneg((1.0 + eps1 * (lambda - 1.0)).powi(2) - phi * alpha_j);
    let second = sqrt_nonneg(
        1.0 - mu * (2.0 + 2.0 * gamma * alpha - mu) / (1.0 + 2.0 * gamma * alpha + gamma * gamma * ell * ell),
    );
    let rho = (1.0 - kappa) * first + kappa * (1.0 - eps * (lambda - 1.0)) * second;
    let mut report = RateReport::new(RateVariant::LipA, rho);
    report.alpha_j = Some(alpha_j);
    report.epsilon = Some(eps);
    report.epsilon_aux = Some(eps1);
    report.phi = Some(phi);
    report.feasibility = feasibility;
    if equality_class {
        report.notes.push("alpha_j uses the equality-class branch".into());
    }
    Ok(report)
}

/// Variant for an ℓ-Lipschitz `A` with no monotonicity information and
/// `B` β-monotone with `β > ℓ`; uses `α := −ℓ`.
pub fn rate_lipschitz_a_from_bound(beta: f64, ell: f64, params: &DrParams) -> Result<RateReport> {
    if !(beta > ell) {
        return Err(Error::RateNotApplicable(format!("requires β > ℓ, got β = {beta}, ℓ = {ell}")));
    }
    let mut report = rate_lipschitz_a(-ell, beta, ell, params, false)?;
    report.notes.push(format!("alpha set to -ell = {}", -ell));
    Ok(report)
}

/// Lipschitz constant of T when `B` is linear, β-monotone and ℓ-Lipschitz,
/// `A` is α-monotone and `α + β > 0`. Mirror image of
/// [`rate_lipschitz_a`] under `(α, γ, λ) ↔ (β, δ, μ)`.
pub fn rate_lipschitz_b(alpha: f64, beta: f64, ell: f64, params: &DrParams, b_linear: bool) -> Result<RateReport> {
    if !b_linear {
        return Err(Error::RequiresLinearB);
    }
    if !(beta.abs() <= ell) {
        return Err(Error::RateNotApplicable(format!("|β| = {} exceeds ℓ = {ell}", beta.abs())));
    }
    if !(alpha + beta > 0.0) {
        return Err(Error::RateNotApplicable(format!("requires α + β > 0, got {}", alpha + beta)));
    }
    let feasibility = require_feasible(params, alpha, beta)?;
    let DrParams { gamma, delta, lambda, mu, kappa, .. } = *params;
    let eps = (lambda - (2.0 - 2.0 * delta * alpha)) / (2.0 * (1.0 + gamma * alpha));
    let eps2 = kappa * eps / (1.0 - kappa);
    let b = 1.0 + delta * beta;
    let phi = eps2 * mu * (2.0 * b + eps2 * (mu * (1.0 + 2.0 * delta * beta) - 2.0 * b));
    let alpha_j = compute_alpha_j(beta, ell, delta, false)?;
    let first = sqrt_nonneg((1.0 + eps2 * (mu - 1.0)).powi(2) - phi * alpha_j);
    let second = sqrt_nonneg(
        1.0 - lambda * (2.0 + 2.0 * delta * beta - lambda) / (1.0 + 2.0 * delta * beta + delta * delta * ell * ell),
    );
    let rho = (1.0 - kappa) * first + kappa * (1.0 - eps * (mu - 1.0)) * second;
    let mut report = RateReport::new(RateVariant::LipB, rho);
    report.alpha_j = Some(alpha_j);
    report.epsilon = Some(eps);
    report.epsilon_aux = Some(eps2);
    report.phi = Some(phi);
    report.feasibility = feasibility;
    report.notes.push("phi is built from epsilon_aux (the B-side epsilon), mirroring the A-side formula".into());
    Ok(report)
}

/// Variant for a linear ℓ-Lipschitz `B` with `ℓ < α`; uses `β := −ℓ`.
pub fn rate_lipschitz_b_from_bound(alpha: f64, ell: f64, params: &DrParams, b_linear: bool) -> Result<RateReport> {
    if !(ell < alpha) {
        return Err(Error::RateNotApplicable(format!("requires ℓ < α, got α = {alpha}, ℓ = {ell}")));
    }
    let mut report = rate_lipschitz_b(alpha, -ell, ell, params, b_linear)?;
    report.notes.push(format!("beta set to -ell = {}", -ell));
    Ok(report)
}

/// Classical DR (`λ = μ = 2`, `γ = δ`) with `A` α-monotone (α > 0) and
/// ℓ-Lipschitz, `B` monotone: `(1−κ) + κ√(1 − 4γα/(1+2γα+γ²ℓ²))`.
pub fn rate_classical_gis(alpha: f64, ell: f64, gamma: f64, kappa: f64) -> Result<RateReport> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidConstants(format!("requires α > 0, got {alpha}")));
    }
    if !(alpha <= ell) {
        return Err(Error::InvalidConstants(format!("α = {alpha} exceeds ℓ = {ell}")));
    }
    if !(gamma > 0.0) {
        return Err(Error::InvalidConstants(format!("γ = {gamma} must be positive")));
    }
    let params = DrParams::classical(gamma, kappa)?;
    let radicand = 1.0 - 4.0 * gamma * alpha / (1.0 + 2.0 * gamma * alpha + gamma * gamma * ell * ell);
    let rho = (1.0 - kappa) + kappa * sqrt_nonneg(radicand);
    let mut report = RateReport::new(RateVariant::ClassicalGis, rho);
    report.epsilon = Some(0.0);
    report.epsilon_aux = Some(0.0);
    report.phi = Some(0.0);
    report.feasibility = parameter_constraints(&params, alpha, 0.0);
    Ok(report)
}

/// Classical DR with `κ = ½`, `A` monotone and ℓ-Lipschitz, `B`
/// β-monotone (β > 0). With `sharp`, `A` is assumed to satisfy
/// `⟨x−y, Ax−Ay⟩ = 0` and the factor is `1/(1+γ²ℓ²)`.
pub fn rate_classical_dr(beta: f64, ell: f64, gamma: f64, sharp: bool) -> Result<RateReport> {
    if !(beta > 0.0) {
        return Err(Error::InvalidConstants(format!("requires β > 0, got {beta}")));
    }
    if !(ell >= 0.0) || !(gamma > 0.0) {
        return Err(Error::InvalidConstants(format!("requires ℓ >= 0 and γ > 0, got ℓ = {ell}, γ = {gamma}")));
    }
    let gb = gamma * beta;
    let alpha_j = if sharp {
        1.0 / (1.0 + gamma * gamma * ell * ell)
    } else {
        (1.0 / (1.0 + gamma * ell)).min(1.0 / (1.0 + gamma * gamma * ell * ell))
    };
    let rho = (sqrt_nonneg((1.0 + 2.0 * gb).powi(2) - 4.0 * gb * (1.0 + gb) * alpha_j) + 1.0) / (2.0 * (1.0 + gb));
    let variant = if sharp { RateVariant::ClassicalDrSharp } else { RateVariant::ClassicalDr };
    let mut report = RateReport::new(variant, rho);
    let params = DrParams::classical(gamma, 0.5)?;
    report.alpha_j = Some(alpha_j);
    report.epsilon = Some(gb / (1.0 + gb));
    report.feasibility = parameter_constraints(&params, 0.0, beta);
    Ok(report)
}

/// The earlier classical-DR constant at `γ = δ = 1`:
/// `r = (√((1+2β)² − 2β(1+β)(1/(1+ℓ)² + 1/(1+ℓ²))) + 1) / (2(1+β))`.
pub fn rate_mv18(beta: f64, ell: f64) -> Result<f64> {
    if !(beta > 0.0) || !(ell >= 0.0) {
        return Err(Error::InvalidConstants(format!("requires β > 0 and ℓ >= 0, got β = {beta}, ℓ = {ell}")));
    }
    let s = 1.0 / (1.0 + ell).powi(2) + 1.0 / (1.0 + ell * ell);
    Ok((sqrt_nonneg((1.0 + 2.0 * beta).powi(2) - 2.0 * beta * (1.0 + beta) * s) + 1.0) / (2.0 * (1.0 + beta)))
}

/// `(ρ, r, ρ < r)` at `γ = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Mv18Comparison {
    pub rho: f64,
    pub r: f64,
    pub strict: bool,
}

pub fn compare_mv18(beta: f64, ell: f64) -> Result<Mv18Comparison> {
    let rho = rate_classical_dr(beta, ell, 1.0, false)?.guaranteed()?;
    let r = rate_mv18(beta, ell)?;
    Ok(Mv18Comparison { rho, r, strict: rho < r })
}

/// Result of the heuristic step-size search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaSearch {
    pub gamma: f64,
    pub rho: f64,
    pub heuristic: bool,
}

/// Numerically minimize `γ ↦ ρ(γ)` over `[lo, hi]`: scan a log grid, then
/// golden-section search on the bracket around the best grid point. No
/// closed form for the minimizer is known, so the result is a heuristic.
pub fn optimal_gamma(rho_of: impl Fn(f64) -> Option<f64>, lo: f64, hi: f64) -> Option<GammaSearch> {
    if !(lo > 0.0 && hi > lo) {
        return None;
    }
    const GRID: usize = 64;
    let (llo, lhi) = (lo.ln(), hi.ln());
    let at = |i: usize| (llo + (lhi - llo) * i as f64 / (GRID - 1) as f64).exp();
    let value = |g: f64| rho_of(g).unwrap_or(f64::INFINITY);
    let best = (0..GRID).min_by(|a, b| value(at(*a)).total_cmp(&value(at(*b))))?;
    if !value(at(best)).is_finite() {
        return None;
    }
    let (mut a, mut b) = (at(best.saturating_sub(1)).ln(), at((best + 1).min(GRID - 1)).ln());
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let f = |t: f64| value(t.exp());
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..100 {
        if (b - a).abs() < 1e-12 {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let t = 0.5 * (a + b);
    let (gamma, rho) = if f(t) <= value(at(best)) { (t.exp(), f(t)) } else { (at(best), value(at(best))) };
    Some(GammaSearch { gamma, rho, heuristic: true })
}
