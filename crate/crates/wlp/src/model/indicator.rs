use crate::bits;
use crate::error::{Error, Result};
use crate::setfn::RealSetFunction;

/// Entries of an indicator table may undershoot zero by at most this much
/// before the distribution is rejected.
pub const PROB_CLAMP: f64 = 1e-12;
/// The total mass must be within this distance of 1.
pub const MASS_TOLERANCE: f64 = 1e-9;

/// For a fixed threshold y, the distribution of the exceedance pattern: one
/// probability per subset S of components with lifetime strictly above y.
///
/// The table doubles as the coefficient table of the joint indicator
/// probability generating function, which is multilinear, so coefficient
/// extraction is plain lookup via [`IndicatorDistribution::prob`].
#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorDistribution {
    threshold: f64,
    probs: RealSetFunction,
}

impl IndicatorDistribution {
    /// Normalize and validate a raw table: tiny negatives (>= -1e-12) are
    /// clamped to zero, the total mass must be 1 within 1e-9, and the table
    /// is rescaled to sum to one exactly (up to rounding).
    pub fn new(threshold: f64, probs: RealSetFunction) -> Result<Self> {
        if threshold.is_nan() {
            return Err(Error::InvalidInput("threshold must not be NaN".into()));
        }
        let mut probs = probs;
        let mut total = 0.0;
        for v in probs.values_mut() {
            if *v < 0.0 {
                if *v < -PROB_CLAMP {
                    return Err(Error::InvalidPmf(format!(
                        "indicator probability {v} is negative beyond tolerance"
                    )));
                }
                *v = 0.0;
            }
            total += *v;
        }
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidPmf(format!(
                "indicator probabilities sum to {total}, expected 1"
            )));
        }
        for v in probs.values_mut() {
            *v /= total;
        }
        Ok(Self { threshold, probs })
    }

    #[inline]
    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    #[inline]
    pub fn arity(&self) -> usize {
        self.probs.arity()
    }

    #[inline]
    pub fn probs(&self) -> &RealSetFunction {
        &self.probs
    }

    /// Pr(exactly the components in `mask` exceed the threshold); also the
    /// pgf coefficient on the monomial of `mask`.
    #[inline]
    pub fn prob(&self, mask: u64) -> f64 {
        self.probs.value(mask)
    }

    /// Evaluate the joint indicator pgf at z, each |z_i| <= 1.
    pub fn pgf(&self, z: &[f64]) -> Result<f64> {
        let n = self.arity();
        if z.len() != n {
            return Err(Error::ArityMismatch {
                expected: n,
                found: z.len(),
            });
        }
        if let Some(bad) = z.iter().find(|v| !(v.abs() <= 1.0)) {
            return Err(Error::InvalidInput(format!(
                "pgf argument {bad} outside [-1, 1]"
            )));
        }
        let mut acc = 0.0;
        for mask in 0..self.probs.values().len() as u64 {
            let mut term = self.probs.value(mask);
            let mut rest = mask;
            while rest != 0 && term != 0.0 {
                let i = rest.trailing_zeros() as usize;
                term *= z[i];
                rest &= rest - 1;
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Pr(|pattern| = s) for s = 0..=n, by summing the table over each
    /// cardinality class.
    pub fn level_pmf(&self) -> Vec<f64> {
        let n = self.arity();
        let mut pmf = vec![0.0; n + 1];
        for mask in 0..self.probs.values().len() as u64 {
            pmf[bits::cardinality(mask)] += self.probs.value(mask);
        }
        pmf
    }

    /// True when probabilities within each cardinality class differ by at
    /// most `tol`: the exceedance pattern is exchangeable at this threshold.
    pub fn has_cardinality_symmetry(&self, tol: f64) -> bool {
        self.symmetry_witness(tol).is_none()
    }

    /// A pair of equal-cardinality masks whose probabilities differ by more
    /// than `tol`, if one exists.
    pub fn symmetry_witness(&self, tol: f64) -> Option<(u64, u64)> {
        let n = self.arity();
        let mut extremes: Vec<Option<(u64, f64, u64, f64)>> = vec![None; n + 1];
        for mask in 0..self.probs.values().len() as u64 {
            let s = bits::cardinality(mask);
            let v = self.probs.value(mask);
            match &mut extremes[s] {
                None => extremes[s] = Some((mask, v, mask, v)),
                Some((lo_m, lo_v, hi_m, hi_v)) => {
                    if v < *lo_v {
                        *lo_m = mask;
                        *lo_v = v;
                    }
                    if v > *hi_v {
                        *hi_m = mask;
                        *hi_v = v;
                    }
                }
            }
        }
        for entry in extremes.into_iter().flatten() {
            let (lo_m, lo_v, hi_m, hi_v) = entry;
            if hi_v - lo_v > tol {
                return Some((lo_m, hi_m));
            }
        }
        None
    }

    /// Per-cardinality weights g(s), the class means, available only when the
    /// distribution is cardinality symmetric within `tol`.
    pub fn level_weights(&self, tol: f64) -> Result<Vec<f64>> {
        if let Some((a, b)) = self.symmetry_witness(tol) {
            return Err(Error::InvalidLevelWeights(format!(
                "indicator distribution lacks cardinality symmetry: Pr{} = {} vs Pr{} = {}",
                bits::format_subset(a),
                self.prob(a),
                bits::format_subset(b),
                self.prob(b),
            )));
        }
        let n = self.arity();
        let pmf = self.level_pmf();
        Ok((0..=n)
            .map(|s| pmf[s] / bits::binomial(n, s) as f64)
            .collect())
    }
}
