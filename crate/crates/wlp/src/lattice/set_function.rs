use crate::bits;
use crate::error::{Error, Result};
use crate::lattice::{LatticeDomain, WlpExpression};

/// Hard ceiling on the ground-set size: every algorithm in this crate
/// enumerates all 2^n subsets, so tables beyond 2^20 entries are refused.
pub const MAX_ARITY: usize = 20;

/// An n-tuple with `present` in the positions of a subset and `absent`
/// elsewhere; the substitution points at which canonical set functions and
/// joint cdf values are read off.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicVector {
    mask: u64,
    len: usize,
    absent: f64,
    present: f64,
}

impl CharacteristicVector {
    pub fn new(mask: u64, len: usize, absent: f64, present: f64) -> Self {
        debug_assert!(len <= 64 && mask < (1u128 << len) as u64 || len == 64);
        Self {
            mask,
            len,
            absent,
            present,
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Component at 1-based position `i`.
    #[inline]
    pub fn component(&self, i: usize) -> f64 {
        if self.mask >> (i - 1) & 1 == 1 {
            self.present
        } else {
            self.absent
        }
    }

    pub fn to_vec(&self) -> Vec<f64> {
        (1..=self.len).map(|i| self.component(i)).collect()
    }
}

/// A table of lattice values over all subsets of {1,..,n}, indexed by bitmask.
///
/// The canonical instance of a weighted lattice polynomial stores the
/// polynomial's value at every {bottom, top}-characteristic vector and is
/// nondecreasing under subset inclusion.
#[derive(Debug, Clone, PartialEq)]
pub struct SetFunction {
    domain: LatticeDomain,
    arity: usize,
    table: Vec<f64>,
}

impl SetFunction {
    /// Build from a raw table. The table length must be 2^arity and every
    /// entry must lie in the domain. No monotonicity is required here; only
    /// tables produced by [`SetFunction::from_expression`] carry that
    /// guarantee.
    pub fn from_table(domain: LatticeDomain, arity: usize, table: Vec<f64>) -> Result<Self> {
        check_arity(arity, MAX_ARITY)?;
        if table.len() != bits::table_len(arity) {
            return Err(Error::InvalidInput(format!(
                "set function table has {} entries, expected {}",
                table.len(),
                bits::table_len(arity)
            )));
        }
        domain.check_all(&table)?;
        Ok(Self {
            domain,
            arity,
            table,
        })
    }

    /// The canonical nondecreasing set function of an expression: the value
    /// of the expression at every {bottom, top} characteristic vector.
    pub fn from_expression(expr: &WlpExpression, domain: LatticeDomain) -> Result<Self> {
        Self::from_expression_with_arity(expr, expr.arity(), domain)
    }

    /// Same as [`SetFunction::from_expression`] but over an explicit ground
    /// set, which may be wider than the indices the expression mentions.
    pub fn from_expression_with_arity(
        expr: &WlpExpression,
        arity: usize,
        domain: LatticeDomain,
    ) -> Result<Self> {
        Self::from_expression_capped(expr, arity, domain, MAX_ARITY)
    }

    /// Explicit-ceiling variant for callers that want a tighter memory bound.
    pub fn from_expression_capped(
        expr: &WlpExpression,
        arity: usize,
        domain: LatticeDomain,
        max_arity: usize,
    ) -> Result<Self> {
        check_arity(arity, max_arity.min(MAX_ARITY))?;
        if expr.arity() > arity {
            return Err(Error::ArityMismatch {
                expected: arity,
                found: expr.arity(),
            });
        }
        expr.check_constants(&domain)?;
        let len = bits::table_len(arity);
        let mut table = Vec::with_capacity(len);
        for mask in 0..len as u64 {
            let point =
                CharacteristicVector::new(mask, arity, domain.bottom(), domain.top()).to_vec();
            table.push(expr.eval(&point)?);
        }
        Ok(Self {
            domain,
            arity,
            table,
        })
    }

    /// Build the cardinality-based set function w(S) = m(|S|) from a
    /// nondecreasing level vector m of length n+1.
    pub fn from_cardinality_profile(levels: &[f64], domain: LatticeDomain) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidInput(
                "cardinality profile must have length n+1 >= 1".into(),
            ));
        }
        if !is_nondecreasing(levels) {
            return Err(Error::NonMonotoneLevels);
        }
        domain.check_all(levels)?;
        let arity = levels.len() - 1;
        check_arity(arity, MAX_ARITY)?;
        let table = (0..bits::table_len(arity) as u64)
            .map(|mask| levels[bits::cardinality(mask)])
            .collect();
        Ok(Self {
            domain,
            arity,
            table,
        })
    }

    /// Canonical set function of the k-th order statistic on n arguments:
    /// bottom below n-k+1 elements, top from there on.
    pub fn order_statistic(k: usize, arity: usize, domain: LatticeDomain) -> Result<Self> {
        if k == 0 || k > arity {
            return Err(Error::BadOrderIndex { k, max: arity });
        }
        let levels: Vec<f64> = (0..=arity)
            .map(|s| {
                if s >= arity - k + 1 {
                    domain.top()
                } else {
                    domain.bottom()
                }
            })
            .collect();
        Self::from_cardinality_profile(&levels, domain)
    }

    #[inline]
    pub fn arity(&self) -> usize {
        self.arity
    }

    #[inline]
    pub fn domain(&self) -> LatticeDomain {
        self.domain
    }

    #[inline]
    pub fn value(&self, mask: u64) -> f64 {
        self.table[mask as usize]
    }

    #[inline]
    pub fn table(&self) -> &[f64] {
        &self.table
    }

    /// Disjunctive-normal-form evaluation: the join over all subsets S of
    /// w(S) meet the components indexed by S. For the canonical table this
    /// reproduces the originating expression exactly.
    pub fn eval_dnf(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: x.len(),
            });
        }
        self.domain.check_all(x)?;
        let mut acc = self.table[0];
        for mask in 1..self.table.len() as u64 {
            let mut term = self.table[mask as usize];
            let mut rest = mask;
            while rest != 0 {
                let i = rest.trailing_zeros() as usize;
                term = term.min(x[i]);
                rest &= rest - 1;
            }
            acc = acc.max(term);
        }
        Ok(acc)
    }

    /// True when the table never decreases under subset inclusion.
    pub fn is_nondecreasing(&self) -> bool {
        for mask in 0..self.table.len() as u64 {
            for i in 0..self.arity {
                let with = mask | 1 << i;
                if with != mask && self.table[mask as usize] > self.table[with as usize] {
                    return false;
                }
            }
        }
        true
    }

    /// True when the range is {bottom, top} with w(empty)=bottom and
    /// w(full)=top: the expression uses no constants.
    pub fn is_lattice_polynomial(&self) -> bool {
        let a = self.domain.bottom();
        let b = self.domain.top();
        self.table[0] == a
            && self.table[self.table.len() - 1] == b
            && self.table.iter().all(|&v| v == a || v == b)
    }

    /// True when w(empty)=bottom and w(full)=top, range unrestricted.
    pub fn is_sugeno_integral(&self) -> bool {
        self.table[0] == self.domain.bottom()
            && self.table[self.table.len() - 1] == self.domain.top()
    }

    /// If the table depends only on subset cardinality, the level vector
    /// m(s) = w(any S with |S| = s); otherwise `None`.
    pub fn cardinality_profile(&self) -> Option<Vec<f64>> {
        let mut levels = vec![f64::NAN; self.arity + 1];
        for mask in 0..self.table.len() as u64 {
            let s = bits::cardinality(mask);
            let v = self.table[mask as usize];
            if levels[s].is_nan() {
                levels[s] = v;
            } else if levels[s] != v {
                return None;
            }
        }
        Some(levels)
    }
}

fn check_arity(arity: usize, max: usize) -> Result<()> {
    if arity > max {
        Err(Error::ArityTooLarge { arity, max })
    } else {
        Ok(())
    }
}

pub(crate) fn is_nondecreasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[0] <= w[1])
}

/// The k-th smallest component of `x`, with the formal boundary cases
/// k = 0 (bottom) and k = n+1 (top).
pub fn order_statistic(domain: &LatticeDomain, k: usize, x: &[f64]) -> Result<f64> {
    let n = x.len();
    if k > n + 1 {
        return Err(Error::BadOrderIndex { k, max: n + 1 });
    }
    domain.check_all(x)?;
    if k == 0 {
        return Ok(domain.bottom());
    }
    if k == n + 1 {
        return Ok(domain.top());
    }
    let mut sorted = x.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("domain check rejects NaN"));
    Ok(sorted[k - 1])
}

/// Evaluate a symmetric weighted lattice polynomial from its level vector:
/// the join over s of m(s) meet the (n-s+1)-th order statistic.
pub fn symmetric_decomposition_eval(
    domain: &LatticeDomain,
    levels: &[f64],
    x: &[f64],
) -> Result<f64> {
    let n = x.len();
    if levels.len() != n + 1 {
        return Err(Error::ArityMismatch {
            expected: n + 1,
            found: levels.len(),
        });
    }
    if !is_nondecreasing(levels) {
        return Err(Error::NonMonotoneLevels);
    }
    domain.check_all(levels)?;
    domain.check_all(x)?;
    let mut sorted = x.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("domain check rejects NaN"));
    let mut acc = domain.bottom();
    for (s, &m) in levels.iter().enumerate() {
        // order statistic index n-s+1; the s=0 term meets with the top.
        let stat = if s == 0 { domain.top() } else { sorted[n - s] };
        acc = acc.max(m.min(stat));
    }
    Ok(acc)
}
