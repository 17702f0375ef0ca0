use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The totally ordered carrier: a closed interval of the extended reals with
/// bottom element `a` and top element `b`. Infinite endpoints are allowed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeDomain {
    bottom: f64,
    top: f64,
}

impl LatticeDomain {
    pub fn new(bottom: f64, top: f64) -> Result<Self> {
        if bottom.is_nan() || top.is_nan() || !(bottom < top) {
            return Err(Error::InvalidDomain { bottom, top });
        }
        Ok(Self { bottom, top })
    }

    /// The unit interval [0, 1].
    pub fn unit() -> Self {
        Self {
            bottom: 0.0,
            top: 1.0,
        }
    }

    /// The nonnegative half line [0, +inf], the usual home of lifetimes.
    pub fn nonnegative() -> Self {
        Self {
            bottom: 0.0,
            top: f64::INFINITY,
        }
    }

    #[inline]
    pub fn bottom(&self) -> f64 {
        self.bottom
    }

    #[inline]
    pub fn top(&self) -> f64 {
        self.top
    }

    #[inline]
    pub fn contains(&self, value: f64) -> bool {
        value >= self.bottom && value <= self.top
    }

    /// Validate a value against the interval, passing it through unchanged.
    pub fn check(&self, value: f64) -> Result<f64> {
        if self.contains(value) {
            Ok(value)
        } else {
            Err(Error::OutOfDomain {
                value,
                bottom: self.bottom,
                top: self.top,
            })
        }
    }

    /// Validate a whole argument vector.
    pub fn check_all(&self, values: &[f64]) -> Result<()> {
        for &v in values {
            self.check(v)?;
        }
        Ok(())
    }
}

impl std::fmt::Display for LatticeDomain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", self.bottom, self.top)
    }
}
