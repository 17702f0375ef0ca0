use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One-dimensional lifetime distribution, given by its cdf. All kinds are
/// nondecreasing, right-continuous, 0 at -inf and 1 at +inf.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "dist", rename_all = "kebab-case")]
pub enum MarginalCdf {
    Exponential { rate: f64 },
    Weibull { shape: f64, scale: f64 },
    Uniform { lo: f64, hi: f64 },
    PointMass { value: f64 },
    EmpiricalStep { values: Vec<f64> },
}

impl MarginalCdf {
    pub fn exponential(rate: f64) -> Result<Self> {
        let m = MarginalCdf::Exponential { rate };
        m.validate()?;
        Ok(m)
    }

    pub fn weibull(shape: f64, scale: f64) -> Result<Self> {
        let m = MarginalCdf::Weibull { shape, scale };
        m.validate()?;
        Ok(m)
    }

    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        let m = MarginalCdf::Uniform { lo, hi };
        m.validate()?;
        Ok(m)
    }

    pub fn point_mass(value: f64) -> Result<Self> {
        let m = MarginalCdf::PointMass { value };
        m.validate()?;
        Ok(m)
    }

    /// Step cdf of a finite sample; the values are sorted on construction.
    pub fn empirical_step(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidMarginal("empirical sample is empty".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidMarginal(
                "empirical sample values must be finite".into(),
            ));
        }
        values.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
        Ok(MarginalCdf::EmpiricalStep { values })
    }

    /// Re-check parameter invariants; used after deserializing.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidMarginal(msg));
        match self {
            MarginalCdf::Exponential { rate } => {
                if !(rate.is_finite() && *rate > 0.0) {
                    return bad(format!("exponential rate must be positive, got {rate}"));
                }
            }
            MarginalCdf::Weibull { shape, scale } => {
                if !(shape.is_finite() && *shape > 0.0 && scale.is_finite() && *scale > 0.0) {
                    return bad(format!(
                        "weibull shape and scale must be positive, got {shape}, {scale}"
                    ));
                }
            }
            MarginalCdf::Uniform { lo, hi } => {
                if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                    return bad(format!("uniform needs finite lo < hi, got [{lo}, {hi}]"));
                }
            }
            MarginalCdf::PointMass { value } => {
                if !value.is_finite() {
                    return bad(format!("point mass must be finite, got {value}"));
                }
            }
            MarginalCdf::EmpiricalStep { values } => {
                if values.is_empty() {
                    return bad("empirical sample is empty".into());
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return bad("empirical sample values must be finite".into());
                }
                if !values.windows(2).all(|w| w[0] <= w[1]) {
                    return bad("empirical sample values must be sorted ascending".into());
                }
            }
        }
        Ok(())
    }

    /// F(y) = Pr(X <= y).
    pub fn cdf(&self, y: f64) -> f64 {
        match self {
            MarginalCdf::Exponential { rate } => {
                if y <= 0.0 {
                    0.0
                } else {
                    -f64::exp_m1(-rate * y)
                }
            }
            MarginalCdf::Weibull { shape, scale } => {
                if y <= 0.0 {
                    0.0
                } else {
                    -f64::exp_m1(-(y / scale).powf(*shape))
                }
            }
            MarginalCdf::Uniform { lo, hi } => ((y - lo) / (hi - lo)).clamp(0.0, 1.0),
            MarginalCdf::PointMass { value } => {
                if y >= *value {
                    1.0
                } else {
                    0.0
                }
            }
            MarginalCdf::EmpiricalStep { values } => {
                // ties with y count as <=: right-continuous step function.
                let above = values.partition_point(|&v| v <= y);
                above as f64 / values.len() as f64
            }
        }
    }

    /// Generalized inverse cdf for u in [0, 1).
    pub fn quantile(&self, u: f64) -> f64 {
        debug_assert!((0.0..1.0).contains(&u));
        match self {
            MarginalCdf::Exponential { rate } => -f64::ln_1p(-u) / rate,
            MarginalCdf::Weibull { shape, scale } => scale * (-f64::ln_1p(-u)).powf(1.0 / shape),
            MarginalCdf::Uniform { lo, hi } => lo + u * (hi - lo),
            MarginalCdf::PointMass { value } => *value,
            MarginalCdf::EmpiricalStep { values } => {
                let idx = ((u * values.len() as f64) as usize).min(values.len() - 1);
                values[idx]
            }
        }
    }

    /// Inverse-transform sampling from an explicit generator.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.quantile(rng.gen::<f64>())
    }
}
