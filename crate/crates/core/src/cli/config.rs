use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Signed;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{fmt_rational, parse_rational, q, to_f64, Rational};
use crate::fock::FieldMasses;
use crate::gravlimit::RegularizationConfig;
use crate::kinematics::DEFAULT_TOLERANCE;
use crate::smatrix::{LSZRecipe, DEFAULT_I_EPSILON};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ReportFormat {
    #[default]
    Text,
    Json,
}

impl FromStr for ReportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(ReportFormat::Text),
            "json" => Ok(ReportFormat::Json),
            _ => Err(Error::Config(format!("format must be text or json, got {s:?}"))),
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReportFormat::Text => "text",
            ReportFormat::Json => "json",
        })
    }
}

/// Settings shared by every command.
///
/// Read from flat `key = value` text; `#` starts a comment. `Vreg` may be
/// given directly, in which case `Vreg/Λ⁴` defaults to its binary value.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub tolerance: f64,
    pub i_epsilon: f64,
    pub seed: u64,
    pub lambda: f64,
    pub v_reg: Option<f64>,
    pub ratio: Option<Rational>,
    pub z: f64,
    pub z2: f64,
    pub z3: f64,
    pub masses: FieldMasses,
    pub format: ReportFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            tolerance: DEFAULT_TOLERANCE,
            i_epsilon: DEFAULT_I_EPSILON,
            seed: 0,
            lambda: 1.0,
            v_reg: None,
            ratio: None,
            z: 1.0,
            z2: 1.0,
            z3: 1.0,
            masses: FieldMasses::default(),
            format: ReportFormat::Text,
        }
    }
}

fn positive(key: &str, v: &str) -> Result<f64> {
    let x: f64 = v.parse().map_err(|_| Error::Config(format!("{key}: not a number: {v:?}")))?;
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::Config(format!("{key} must be positive, got {v}")));
    }
    Ok(x)
}

fn positive_rational(key: &str, v: &str) -> Result<Rational> {
    let x = parse_rational(v).ok_or_else(|| Error::Config(format!("{key}: not an exact number: {v:?}")))?;
    if !x.is_positive() {
        return Err(Error::Config(format!("{key} must be positive, got {v}")));
    }
    Ok(x)
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", n + 1)))?;
            cfg.set(k.trim(), v.trim()).map_err(|e| match e {
                Error::Config(m) => Error::Config(format!("line {}: {m}", n + 1)),
                other => other,
            })?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, v: &str) -> Result<()> {
        match key {
            "tolerance" | "tol" => self.tolerance = positive(key, v)?,
            "i_epsilon" | "epsilon" => self.i_epsilon = positive(key, v)?,
            "seed" => self.seed = v.parse().map_err(|_| Error::Config(format!("seed: not an integer: {v:?}")))?,
            "lambda" => self.lambda = positive(key, v)?,
            "v_reg" => self.v_reg = Some(positive(key, v)?),
            "ratio" => self.ratio = Some(positive_rational(key, v)?),
            "z" | "z2" | "z3" => {
                let x = positive(key, v)?;
                if x > 1.0 {
                    return Err(Error::Config(format!("{key} must lie in (0, 1], got {v}")));
                }
                *match key {
                    "z" => &mut self.z,
                    "z2" => &mut self.z2,
                    _ => &mut self.z3,
                } = x;
            }
            "mass_scalar" => self.masses.scalar = positive_rational(key, v)?,
            "mass_dirac" => self.masses.dirac = positive_rational(key, v)?,
            "mass_gauge" => self.masses.gauge = positive_rational(key, v)?,
            "format" => self.format = v.parse()?,
            _ => return Err(Error::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.regularization().map(|_| ()).map_err(|e| Error::Config(e.to_string()))?;
        self.lsz_recipe().validate().map_err(|e| Error::Config(e.to_string()))
    }

    /// The exact `Vreg/Λ⁴` in force.
    pub fn volume_ratio(&self) -> Rational {
        match (&self.ratio, self.v_reg) {
            (Some(r), _) => r.clone(),
            (None, Some(v)) => Rational::from_float(v / self.lambda.powi(4)).unwrap_or_else(|| q(1)),
            (None, None) => q(1),
        }
    }

    pub fn regularization(&self) -> Result<RegularizationConfig> {
        let ratio = self.volume_ratio();
        match self.v_reg {
            Some(v) => RegularizationConfig::with_volume(self.lambda, v, ratio),
            None => RegularizationConfig::new(self.lambda, ratio),
        }
    }

    pub fn lsz_recipe(&self) -> LSZRecipe {
        LSZRecipe { z: self.z, z2: self.z2, z3: self.z3, grav_limit: true, i_epsilon: self.i_epsilon }
    }

    /// Sorted key/value view used in reports.
    pub fn to_json(&self) -> Value {
        let ratio = self.volume_ratio();
        let v_reg = self.v_reg.unwrap_or_else(|| to_f64(&ratio) * self.lambda.powi(4));
        let m: BTreeMap<&str, Value> = [
            ("tolerance", json!(self.tolerance)),
            ("i_epsilon", json!(self.i_epsilon)),
            ("seed", json!(self.seed)),
            ("lambda", json!(self.lambda)),
            ("v_reg", json!(v_reg)),
            ("ratio", json!(fmt_rational(&ratio))),
            ("z", json!(self.z)),
            ("z2", json!(self.z2)),
            ("z3", json!(self.z3)),
            ("mass_scalar", json!(fmt_rational(&self.masses.scalar))),
            ("mass_dirac", json!(fmt_rational(&self.masses.dirac))),
            ("mass_gauge", json!(fmt_rational(&self.masses.gauge))),
            ("format", json!(self.format.to_string())),
        ]
        .into_iter()
        .collect();
        json!(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_validate() {
        let c = RunConfig::parse("# run\ntolerance = 1e-9\nseed=7\nratio = 1/2\nmass_dirac = 3/2\nformat = json\n").unwrap();
        assert_eq!(c.tolerance, 1e-9);
        assert_eq!(c.seed, 7);
        assert_eq!(c.volume_ratio(), crate::exact::qq(1, 2));
        assert_eq!(c.format, ReportFormat::Json);
        assert!(RunConfig::parse("tolerance = 0").is_err());
        assert!(RunConfig::parse("lambda = -1").is_err());
        assert!(RunConfig::parse("z2 = 1.5").is_err());
        assert!(RunConfig::parse("bogus = 1").is_err());
        assert!(RunConfig::parse("lambda = 2\nv_reg = 3\nratio = 1").is_err());
        let c = RunConfig::parse("lambda = 2\nv_reg = 8").unwrap();
        assert_eq!(c.volume_ratio(), crate::exact::qq(1, 2));
    }
}
