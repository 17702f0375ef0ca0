//! Real-valued set functions on the subsets of {1,..,n} and the subset-sum
//! (zeta) transform with its Möbius inverse.
//!
//! Both transforms run as in-place butterflies in O(n 2^n); the quadratic
//! `*_naive` versions are reference implementations kept for the test suites.

use crate::bits;
use crate::error::{Error, Result};

/// A finite real table over all 2^n subsets, indexed by bitmask.
#[derive(Debug, Clone, PartialEq)]
pub struct RealSetFunction {
    arity: usize,
    table: Vec<f64>,
}

impl RealSetFunction {
    pub fn new(arity: usize, table: Vec<f64>) -> Result<Self> {
        if table.len() != bits::table_len(arity) {
            return Err(Error::InvalidInput(format!(
                "set function table has {} entries, expected {}",
                table.len(),
                bits::table_len(arity)
            )));
        }
        if let Some(bad) = table.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "set function entries must be finite, found {bad}"
            )));
        }
        Ok(Self { arity, table })
    }

    pub fn zeros(arity: usize) -> Self {
        Self {
            arity,
            table: vec![0.0; bits::table_len(arity)],
        }
    }

    #[inline]
    pub fn arity(&self) -> usize {
        self.arity
    }

    #[inline]
    pub fn value(&self, mask: u64) -> f64 {
        self.table[mask as usize]
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.table
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.table
    }

    pub fn into_values(self) -> Vec<f64> {
        self.table
    }

    /// m(S) = sum over T subset of S of (-1)^(|S|-|T|) f(T).
    pub fn mobius_transform(&self) -> RealSetFunction {
        let mut t = self.table.clone();
        for i in 0..self.arity {
            let bit = 1usize << i;
            for mask in 0..t.len() {
                if mask & bit != 0 {
                    t[mask] -= t[mask ^ bit];
                }
            }
        }
        Self {
            arity: self.arity,
            table: t,
        }
    }

    /// f(S) = sum over T subset of S of m(T); inverse of the Möbius transform.
    pub fn zeta_transform(&self) -> RealSetFunction {
        let mut t = self.table.clone();
        for i in 0..self.arity {
            let bit = 1usize << i;
            for mask in 0..t.len() {
                if mask & bit != 0 {
                    t[mask] += t[mask ^ bit];
                }
            }
        }
        Self {
            arity: self.arity,
            table: t,
        }
    }

    /// Quadratic reference implementation used by the test suites.
    pub fn mobius_transform_naive(&self) -> RealSetFunction {
        let mut t = vec![0.0; self.table.len()];
        for mask in 0..self.table.len() as u64 {
            let mut sub = mask;
            loop {
                let sign = if (bits::cardinality(mask) - bits::cardinality(sub)) % 2 == 0 {
                    1.0
                } else {
                    -1.0
                };
                t[mask as usize] += sign * self.table[sub as usize];
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & mask;
            }
        }
        Self {
            arity: self.arity,
            table: t,
        }
    }

    /// Quadratic reference implementation used by the test suites.
    pub fn zeta_transform_naive(&self) -> RealSetFunction {
        let mut t = vec![0.0; self.table.len()];
        for mask in 0..self.table.len() as u64 {
            let mut sub = mask;
            loop {
                t[mask as usize] += self.table[sub as usize];
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & mask;
            }
        }
        Self {
            arity: self.arity,
            table: t,
        }
    }
}
