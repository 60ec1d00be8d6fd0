use adr_core::rates::{compare_mv18, rate_lipschitz_a, rate_lipschitz_b};
use adr_core::{rate_classical_dr, rate_classical_gis, RateReport};
use clap::ValueEnum;
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::output::emit_json;
use crate::params::DEFAULT_KAPPA;
use crate::{RatesArgs, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    #[value(name = "lipA")]
    LipA,
    #[value(name = "lipB")]
    LipB,
    ClassicalGis,
    ClassicalDr,
    ClassicalDrSharp,
    #[value(name = "mv18-compare")]
    Mv18Compare,
}

fn need(v: Option<f64>, flag: &str) -> CliResult<f64> {
    v.ok_or_else(|| CliError::missing(flag))
}

fn with_params(report: RateReport, params: Option<adr_core::DrParams>) -> CliResult<Value> {
    let mut v = serde_json::to_value(&report).map_err(|e| CliError::new("SERIALIZE", e.to_string()))?;
    if let (Some(p), Value::Object(map)) = (params, &mut v) {
        map.insert("params".into(), serde_json::to_value(p).expect("params serialize"));
    }
    Ok(v)
}

pub fn run(args: &RatesArgs) -> CliResult<Status> {
    let p = &args.params;
    let value = match args.variant {
        Variant::LipA | Variant::LipB => {
            let alpha = need(args.alpha, "alpha")?;
            let beta = need(args.beta, "beta")?;
            let ell = need(args.ell, "ell")?;
            let params = p.resolve(alpha, beta)?;
            let report = if args.variant == Variant::LipA {
                rate_lipschitz_a(alpha, beta, ell, &params, args.equality_class)?
            } else {
                // The rate needs B linear; the constants describe such a B.
                rate_lipschitz_b(alpha, beta, ell, &params, true)?
            };
            with_params(report, Some(params))?
        }
        Variant::ClassicalGis => {
            let report = rate_classical_gis(
                need(args.alpha, "alpha")?,
                need(args.ell, "ell")?,
                p.gamma.unwrap_or(1.0),
                p.kappa.unwrap_or(DEFAULT_KAPPA),
            )?;
            with_params(report, None)?
        }
        Variant::ClassicalDr | Variant::ClassicalDrSharp => {
            let report = rate_classical_dr(
                need(args.beta, "beta")?,
                need(args.ell, "ell")?,
                p.gamma.unwrap_or(1.0),
                args.variant == Variant::ClassicalDrSharp,
            )?;
            with_params(report, None)?
        }
        Variant::Mv18Compare => {
            let beta = need(args.beta, "beta")?;
            let ell = need(args.ell, "ell")?;
            let c = compare_mv18(beta, ell)?;
            json!({ "variant": "mv18", "beta": beta, "ell": ell, "rho": c.rho, "r": c.r, "strict": c.strict })
        }
    };
    emit_json(&value, args.out.as_deref())?;
    Ok(Status::Ok)
}
