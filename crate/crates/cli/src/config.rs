//! Optimizer config: a flat TOML file of `key = value` lines.
//!
//! ```toml
//! # axes are { lo, hi, step }
//! theta1 = { lo = 0.25, hi = 0.5, step = 0.001 }
//! theta2 = { lo = 0.001, hi = 0.05, step = 0.001 }
//! lambda = { lo = 0.05, hi = 0.5, step = 0.01 }   # H only
//! theta  = { lo = 0.05, hi = 0.45, step = 0.01 }  # H only
//! refine_rounds = 3                               # H only
//! smax = 60.0
//! step = 0.0001
//! constants_cutoff = 100000000   # omit to use the stored constants
//! c_variant = "p-1"              # or "p-2"
//! csv = "scan.csv"               # optional full scan
//! output = "incumbent.json"      # optional; stdout otherwise
//! ```
//!
//! Relative paths are resolved against the config file's directory.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Deserialize;
use sievebound::constants::CVariant;
use sievebound::objective::{Axis, GSearchSpec, HSearchSpec};
use sievebound::sieve_functions::{DEFAULT_S_MAX, DEFAULT_STEP};

/// A malformed or inconsistent config file. Maps to exit code 2.
#[derive(Debug, thiserror::Error)]
#[error("config: {0}")]
pub struct ConfigError(pub String);

#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct OptimizeConfig {
    pub theta1: Option<Axis>,
    pub theta2: Option<Axis>,
    pub lambda: Option<Axis>,
    pub theta: Option<Axis>,
    pub refine_rounds: Option<u32>,
    pub smax: Option<f64>,
    pub step: Option<f64>,
    pub constants_cutoff: Option<u64>,
    pub c_variant: Option<VariantName>,
    pub csv: Option<PathBuf>,
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
pub enum VariantName {
    #[serde(rename = "p-1")]
    PMinusOne,
    #[serde(rename = "p-2")]
    PMinusTwo,
}

impl From<VariantName> for CVariant {
    fn from(v: VariantName) -> Self {
        match v {
            VariantName::PMinusOne => CVariant::PMinusOne,
            VariantName::PMinusTwo => CVariant::PMinusTwo,
        }
    }
}

/// Default G grid: the full step-0.0001 scan.
pub const DEFAULT_G_STEP: f64 = 1e-4;

impl OptimizeConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| ConfigError(e.message().to_string()).into())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::parse(&text).with_context(|| path.display().to_string())?;
        let base = path.parent().unwrap_or(Path::new("."));
        for p in [&mut cfg.csv, &mut cfg.output].into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }

    pub fn smax(&self) -> f64 {
        self.smax.unwrap_or(DEFAULT_S_MAX)
    }

    pub fn step(&self) -> f64 {
        self.step.unwrap_or(DEFAULT_STEP)
    }

    pub fn variant(&self) -> CVariant {
        self.c_variant.map(Into::into).unwrap_or_default()
    }

    pub fn g_spec(&self) -> Result<GSearchSpec> {
        if self.lambda.is_some() || self.theta.is_some() || self.refine_rounds.is_some() {
            bail!(ConfigError("lambda, theta and refine_rounds apply to H only".into()));
        }
        let d = GSearchSpec::with_step(DEFAULT_G_STEP);
        Ok(GSearchSpec {
            theta1: self.theta1.unwrap_or(d.theta1),
            theta2: self.theta2.unwrap_or(d.theta2),
        })
    }

    pub fn h_spec(&self) -> HSearchSpec {
        let d = HSearchSpec::default();
        HSearchSpec {
            lambda: self.lambda.unwrap_or(d.lambda),
            theta: self.theta.unwrap_or(d.theta),
            theta1: self.theta1.unwrap_or(d.theta1),
            theta2: self.theta2.unwrap_or(d.theta2),
            refine_rounds: self.refine_rounds.unwrap_or(d.refine_rounds),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_axes_and_defaults() {
        let cfg = OptimizeConfig::parse(
            "theta2 = { lo = 0.02, hi = 0.024, step = 0.0001 }\nc_variant = \"p-2\"\n",
        )
        .unwrap();
        let g = cfg.g_spec().unwrap();
        assert_eq!(g.theta2, Axis::new(0.02, 0.024, 0.0001));
        assert_eq!(g.theta1.step, DEFAULT_G_STEP);
        assert_eq!(cfg.variant(), CVariant::PMinusTwo);
        assert_eq!(cfg.h_spec().refine_rounds, 3);
    }

    #[test]
    fn rejects_unknown_keys_and_h_keys_for_g() {
        let err = OptimizeConfig::parse("thetaa = 1").unwrap_err();
        assert!(err.downcast_ref::<ConfigError>().is_some());
        let cfg = OptimizeConfig::parse("refine_rounds = 2").unwrap();
        assert!(cfg.g_spec().is_err());
    }
}
