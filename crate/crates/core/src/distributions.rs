//! Marginal distributions for the coverage experiments.
//!
//! Normal draws use `rand_distr::StandardNormal` (ziggurat) on a ChaCha8
//! stream, so a seed reproduces the same sample for a given build. Pareto
//! draws use the inverse transform `x = k u^(-1/a)` with `u` uniform on the
//! open interval (0, 1) and `k = (a - 1) / a`, which fixes the mean at 1.

use std::fmt;

use rand::distr::Open01;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum MarginalSpec {
    Normal { mean: f64, variance: f64 },
    Exponential { mean: f64 },
    /// Pareto with tail index `a` and scale `(a - 1) / a`.
    Pareto { a: f64 },
    /// Pareto reflected about its mean: `2 - X`, tail towards `-inf`.
    ParetoInverted { a: f64 },
}

impl MarginalSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Domain(msg));
        match *self {
            MarginalSpec::Normal { mean, variance } => {
                if !mean.is_finite() || !(variance > 0.0 && variance.is_finite()) {
                    return bad(format!("normal needs finite mean and positive variance, got ({mean}, {variance})"));
                }
            }
            MarginalSpec::Exponential { mean } => {
                if !(mean > 0.0 && mean.is_finite()) {
                    return bad(format!("exponential mean must be positive, got {mean}"));
                }
            }
            MarginalSpec::Pareto { a } | MarginalSpec::ParetoInverted { a } => {
                if !(a > 1.0 && a.is_finite()) {
                    return bad(format!("Pareto tail index must exceed 1, got {a}"));
                }
            }
        }
        Ok(())
    }

    pub fn family(&self) -> &'static str {
        match self {
            MarginalSpec::Normal { .. } => "normal",
            MarginalSpec::Exponential { .. } => "exponential",
            MarginalSpec::Pareto { .. } => "pareto",
            MarginalSpec::ParetoInverted { .. } => "pareto-inverted",
        }
    }

    /// Parameter summary without commas, e.g. `mean=1;var=0.5` or `a=1.2`.
    pub fn param_label(&self) -> String {
        match *self {
            MarginalSpec::Normal { mean, variance } => format!("mean={mean};var={variance}"),
            MarginalSpec::Exponential { mean } => format!("mean={mean}"),
            MarginalSpec::Pareto { a } | MarginalSpec::ParetoInverted { a } => format!("a={a}"),
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            MarginalSpec::Normal { mean, .. } | MarginalSpec::Exponential { mean } => mean,
            MarginalSpec::Pareto { .. } | MarginalSpec::ParetoInverted { .. } => 1.0,
        }
    }

    /// Pareto scale `k = (a - 1) / a`; `None` for other families.
    pub fn pareto_scale(&self) -> Option<f64> {
        match *self {
            MarginalSpec::Pareto { a } | MarginalSpec::ParetoInverted { a } => Some((a - 1.0) / a),
            _ => None,
        }
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            MarginalSpec::Normal { mean, variance } => {
                let z: f64 = rng.sample(StandardNormal);
                mean + variance.sqrt() * z
            }
            MarginalSpec::Exponential { mean } => {
                let u: f64 = rng.sample(Open01);
                -mean * u.ln()
            }
            MarginalSpec::Pareto { a } => pareto_inverse(rng.sample(Open01), a),
            MarginalSpec::ParetoInverted { a } => 2.0 - pareto_inverse(rng.sample(Open01), a),
        }
    }
}

fn pareto_inverse(u: f64, a: f64) -> f64 {
    (a - 1.0) / a * u.powf(-1.0 / a)
}

impl fmt::Display for MarginalSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.family(), self.param_label())
    }
}

/// `n` independent draws.
pub fn sample_marginal<R: Rng + ?Sized>(spec: &MarginalSpec, n: usize, rng: &mut R) -> Vec<f64> {
    (0..n).map(|_| spec.draw(rng)).collect()
}

/// One experiment cell: independent marginals for X and Y and a sample size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellSpec {
    pub x: MarginalSpec,
    pub y: MarginalSpec,
    pub n: usize,
}

impl CellSpec {
    pub fn new(x: MarginalSpec, y: MarginalSpec, n: usize) -> Result<Self> {
        let cell = Self { x, y, n };
        cell.validate()?;
        Ok(cell)
    }

    pub fn validate(&self) -> Result<()> {
        self.x.validate()?;
        self.y.validate()?;
        if self.n < 2 {
            return Err(Error::InsufficientData { needed: 2, got: self.n });
        }
        if self.x.mean() == 0.0 {
            return Err(Error::DegenerateDenominator);
        }
        Ok(())
    }
}

/// Ground-truth ratio `E(Y) / E(X)` from the closed-form family means.
pub fn true_ratio(cell: &CellSpec) -> Result<f64> {
    let mx = cell.x.mean();
    if mx == 0.0 {
        return Err(Error::DegenerateDenominator);
    }
    Ok(cell.y.mean() / mx)
}
