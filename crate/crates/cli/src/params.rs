use adr_core::{select_params, DrParams, Mode};
use clap::Args;
use serde::Deserialize;

use crate::error::{CliError, CliResult};

/// Splitting parameters. Any of `--delta`, `--lambda`, `--mu` switches to
/// manual mode, which needs all five values (κ defaults to ½). Otherwise
/// parameters come from `select_params` with `--gamma` as the step hint.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamArgs {
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Classical DR: λ = μ = 2, δ = γ (γ defaults to 1).
    #[arg(long)]
    #[serde(default)]
    pub classical: bool,
}

pub const DEFAULT_KAPPA: f64 = 0.5;

impl ParamArgs {
    pub fn is_manual(&self) -> bool {
        self.classical || self.delta.is_some() || self.lambda.is_some() || self.mu.is_some()
    }

    pub fn resolve(&self, alpha: f64, beta: f64) -> CliResult<DrParams> {
        let kappa = self.kappa.unwrap_or(DEFAULT_KAPPA);
        if self.classical {
            return Ok(DrParams::classical(self.gamma.unwrap_or(1.0), kappa)?);
        }
        if !self.is_manual() {
            return Ok(select_params(alpha, beta, self.gamma, kappa)?);
        }
        let gamma = self.gamma.ok_or_else(|| CliError::missing("gamma"))?;
        let delta = self.delta.ok_or_else(|| CliError::missing("delta"))?;
        let lambda = self.lambda.ok_or_else(|| CliError::missing("lambda"))?;
        let mu = self.mu.ok_or_else(|| CliError::missing("mu"))?;
        let mode = if lambda == 2.0 && mu == 2.0 && delta == gamma { Mode::Classical } else { Mode::Adaptive };
        Ok(DrParams::manual(gamma, delta, lambda, mu, kappa, mode)?)
    }
}
