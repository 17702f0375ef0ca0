use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::bits;
use crate::error::{Error, Result};
use crate::model::ingest::JointCdfTable;
use crate::model::{IndicatorDistribution, MarginalCdf};
use crate::setfn::RealSetFunction;

/// Möbius masses of a user-supplied joint-cdf table may undershoot zero by
/// this much and still be accepted (clamped, then renormalized); anything
/// more negative marks the table as not a cdf.
pub const JOINT_CDF_CLAMP: f64 = 1e-9;

/// Default tolerance when deriving per-cardinality weights from a model.
pub const SYMMETRY_TOLERANCE: f64 = 1e-9;

/// Row-major matrix of joint lifetime draws: one row per draw, one column per
/// component.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl SampleMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptySample);
        }
        let cols = rows[0].len();
        if cols == 0 {
            return Err(Error::InvalidInput("sample rows must be nonempty".into()));
        }
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::InvalidInput(format!(
                    "sample row {} has {} columns, expected {cols}",
                    i + 1,
                    row.len()
                )));
            }
            for &v in row {
                if !v.is_finite() {
                    return Err(Error::InvalidInput(format!(
                        "sample row {} contains non-finite value {v}",
                        i + 1
                    )));
                }
                data.push(v);
            }
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub(crate) fn from_flat(cols: usize, data: Vec<f64>) -> Self {
        debug_assert!(cols > 0 && data.len() % cols == 0);
        Self {
            rows: data.len() / cols,
            cols,
            data,
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }
}

/// Map from a threshold to per-cardinality pattern weights g_y(0..=n).
#[derive(Clone)]
pub struct LevelWeightFn(pub Arc<dyn Fn(f64) -> Vec<f64> + Send + Sync>);

impl LevelWeightFn {
    pub fn new<F: Fn(f64) -> Vec<f64> + Send + Sync + 'static>(f: F) -> Self {
        Self(Arc::new(f))
    }
}

impl std::fmt::Debug for LevelWeightFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("LevelWeightFn(..)")
    }
}

/// Joint law of the component lifetimes, in one of the dependence regimes the
/// engine understands. Every kind can produce, for any threshold y, the full
/// distribution of the exceedance pattern.
#[derive(Debug, Clone)]
pub enum JointModel {
    /// Independent components with arbitrary marginals.
    Independent { marginals: Vec<MarginalCdf> },
    /// Exchangeable exceedance indicators: the probability of a pattern
    /// depends only on its cardinality, through a caller-supplied g.
    ExchangeableIndicator {
        arity: usize,
        weights: LevelWeightFn,
    },
    /// The empirical law of a finite table of joint draws.
    EmpiricalSample { sample: SampleMatrix },
    /// Joint cdf known at the characteristic points, per subset.
    JointCdfTable { table: JointCdfTable },
    /// X_i = Z + Y_i with Z drawn from `shared` and Y_i i.i.d. from
    /// `individual`: a common random shift on otherwise independent parts.
    RandomShift {
        arity: usize,
        shared: MarginalCdf,
        individual: MarginalCdf,
    },
}

impl JointModel {
    pub fn independent(marginals: Vec<MarginalCdf>) -> Result<Self> {
        if marginals.is_empty() {
            return Err(Error::InvalidInput(
                "independent model needs at least one marginal".into(),
            ));
        }
        check_model_arity(marginals.len())?;
        for m in &marginals {
            m.validate()?;
        }
        Ok(JointModel::Independent { marginals })
    }

    pub fn exchangeable(arity: usize, weights: LevelWeightFn) -> Result<Self> {
        if arity == 0 {
            return Err(Error::InvalidInput(
                "exchangeable model needs arity >= 1".into(),
            ));
        }
        check_model_arity(arity)?;
        Ok(JointModel::ExchangeableIndicator { arity, weights })
    }

    pub fn empirical(sample: SampleMatrix) -> Result<Self> {
        check_model_arity(sample.cols())?;
        Ok(JointModel::EmpiricalSample { sample })
    }

    pub fn joint_cdf(table: JointCdfTable) -> Result<Self> {
        check_model_arity(table.arity())?;
        Ok(JointModel::JointCdfTable { table })
    }

    pub fn random_shift(arity: usize, shared: MarginalCdf, individual: MarginalCdf) -> Result<Self> {
        if arity == 0 {
            return Err(Error::InvalidInput(
                "random-shift model needs arity >= 1".into(),
            ));
        }
        check_model_arity(arity)?;
        shared.validate()?;
        individual.validate()?;
        Ok(JointModel::RandomShift {
            arity,
            shared,
            individual,
        })
    }

    pub fn arity(&self) -> usize {
        match self {
            JointModel::Independent { marginals } => marginals.len(),
            JointModel::ExchangeableIndicator { arity, .. } => *arity,
            JointModel::EmpiricalSample { sample } => sample.cols(),
            JointModel::JointCdfTable { table } => table.arity(),
            JointModel::RandomShift { arity, .. } => *arity,
        }
    }

    /// The distribution of the exceedance pattern at threshold y.
    pub fn indicator_distribution(&self, y: f64) -> Result<IndicatorDistribution> {
        let n = self.arity();
        let len = bits::table_len(n);
        let probs = match self {
            JointModel::Independent { marginals } => {
                let f: Vec<f64> = marginals.iter().map(|m| m.cdf(y)).collect();
                let mut table = vec![0.0; len];
                for (mask, slot) in table.iter_mut().enumerate() {
                    let mut p = 1.0;
                    for (i, fi) in f.iter().enumerate() {
                        p *= if mask >> i & 1 == 1 { 1.0 - fi } else { *fi };
                    }
                    *slot = p;
                }
                RealSetFunction::new(n, table)?
            }
            JointModel::ExchangeableIndicator { arity, weights } => {
                let g = validate_level_weights(&(weights.0)(y), *arity)?;
                table_from_level_weights(n, &g)?
            }
            JointModel::EmpiricalSample { sample } => {
                let mut counts = vec![0u64; len];
                for r in 0..sample.rows() {
                    counts[exceedance_mask(sample.row(r), y) as usize] += 1;
                }
                let total = sample.rows() as f64;
                RealSetFunction::new(n, counts.into_iter().map(|c| c as f64 / total).collect())?
            }
            JointModel::JointCdfTable { table } => {
                let f = RealSetFunction::new(
                    n,
                    (0..len as u64).map(|mask| table.evaluate(mask, y)).collect(),
                )?;
                let mut masses = f.mobius_transform();
                for (mask, v) in masses.values_mut().iter_mut().enumerate() {
                    if *v < -JOINT_CDF_CLAMP {
                        return Err(Error::InconsistentJointCdf {
                            mask: mask as u64,
                            mass: *v,
                        });
                    }
                    if *v < 0.0 {
                        *v = 0.0;
                    }
                }
                masses
            }
            JointModel::RandomShift {
                arity,
                shared,
                individual,
            } => {
                let g = shift_level_weights(*arity, shared, individual, y);
                table_from_level_weights(n, &g)?
            }
        };
        IndicatorDistribution::new(y, probs)
    }

    /// Pr(X_i <= y for every i outside `mask`): the joint cdf evaluated at
    /// the characteristic point with y off the subset and top on it.
    pub fn joint_cdf_at_characteristic(&self, mask: u64, y: f64) -> Result<f64> {
        let n = self.arity();
        debug_assert!(mask < bits::table_len(n) as u64);
        match self {
            JointModel::Independent { marginals } => {
                let mut p = 1.0;
                for (i, m) in marginals.iter().enumerate() {
                    if mask >> i & 1 == 0 {
                        p *= m.cdf(y);
                    }
                }
                Ok(p)
            }
            JointModel::ExchangeableIndicator { arity, weights } => {
                let g = validate_level_weights(&(weights.0)(y), *arity)?;
                let s = bits::cardinality(mask);
                Ok((0..=s)
                    .map(|t| bits::binomial(s, t) as f64 * g[t])
                    .sum())
            }
            JointModel::EmpiricalSample { sample } => {
                let mut count = 0usize;
                for r in 0..sample.rows() {
                    let row = sample.row(r);
                    let ok = (0..n).all(|i| mask >> i & 1 == 1 || row[i] <= y);
                    if ok {
                        count += 1;
                    }
                }
                Ok(count as f64 / sample.rows() as f64)
            }
            JointModel::JointCdfTable { table } => Ok(table.evaluate(mask, y)),
            JointModel::RandomShift {
                arity,
                shared,
                individual,
            } => {
                let below = *arity - bits::cardinality(mask);
                Ok(shared_mixture(shared)
                    .iter()
                    .map(|&(wgt, z)| wgt * individual.cdf(y - z).powi(below as i32))
                    .sum())
            }
        }
    }

    /// Pr(exactly s components exceed y), for s = 0..=n, summed from the
    /// pattern distribution.
    pub fn level_count_pmf(&self, y: f64) -> Result<Vec<f64>> {
        Ok(self.indicator_distribution(y)?.level_pmf())
    }

    /// Same quantity via the alternating sum over joint-cdf values at the
    /// characteristic points; an independent arithmetic route used to
    /// cross-check [`JointModel::level_count_pmf`].
    pub fn level_count_pmf_via_joint_cdf(&self, y: f64) -> Result<Vec<f64>> {
        let n = self.arity();
        // A[t] = sum of F(e_T) over |T| = t.
        let mut by_size = vec![0.0; n + 1];
        for mask in 0..bits::table_len(n) as u64 {
            by_size[bits::cardinality(mask)] += self.joint_cdf_at_characteristic(mask, y)?;
        }
        let mut pmf = vec![0.0; n + 1];
        for (s, slot) in pmf.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (t, a) in by_size.iter().enumerate().take(s + 1) {
                let sign = if (s - t) % 2 == 0 { 1.0 } else { -1.0 };
                acc += sign * bits::binomial(n - t, s - t) as f64 * a;
            }
            *slot = acc;
        }
        Ok(pmf)
    }

    /// Per-cardinality weights g_y for models whose exceedance pattern is
    /// exchangeable at y. The exchangeable kind returns its own g; other
    /// kinds derive class means from the pattern distribution and fail when
    /// symmetry is broken beyond `tol`.
    pub fn level_weights(&self, y: f64, tol: f64) -> Result<Vec<f64>> {
        match self {
            JointModel::ExchangeableIndicator { arity, weights } => {
                validate_level_weights(&(weights.0)(y), *arity)
            }
            _ => self.indicator_distribution(y)?.level_weights(tol),
        }
    }

    pub fn supports_sampling(&self) -> bool {
        matches!(
            self,
            JointModel::Independent { .. }
                | JointModel::EmpiricalSample { .. }
                | JointModel::RandomShift { .. }
        )
    }

    /// Reproducible joint draws. Independent and random-shift kinds use
    /// inverse-transform sampling; the empirical kind bootstraps rows with
    /// replacement. Indicator-only kinds cannot be sampled.
    pub fn sample_lifetimes(&self, count: usize, seed: u64) -> Result<SampleMatrix> {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        self.sample_lifetimes_with_rng(count, &mut rng)
    }

    /// Sampling from an explicit generator state; used by the Monte Carlo
    /// oracle to split one master seed across deterministic chunks.
    pub fn sample_lifetimes_with_rng<R: Rng + ?Sized>(
        &self,
        count: usize,
        rng: &mut R,
    ) -> Result<SampleMatrix> {
        let n = self.arity();
        let mut data = Vec::with_capacity(count * n);
        match self {
            JointModel::Independent { marginals } => {
                for _ in 0..count {
                    for m in marginals {
                        data.push(m.sample(rng));
                    }
                }
            }
            JointModel::EmpiricalSample { sample } => {
                for _ in 0..count {
                    let r = rng.gen_range(0..sample.rows());
                    data.extend_from_slice(sample.row(r));
                }
            }
            JointModel::RandomShift {
                shared, individual, ..
            } => {
                for _ in 0..count {
                    let z = shared.sample(rng);
                    for _ in 0..n {
                        data.push(z + individual.sample(rng));
                    }
                }
            }
            JointModel::ExchangeableIndicator { .. } => {
                return Err(Error::Unsupported(
                    "sampling (exchangeable indicators specify patterns only, not a joint law)",
                ))
            }
            JointModel::JointCdfTable { .. } => {
                return Err(Error::Unsupported(
                    "sampling (a joint cdf table specifies patterns only, not a joint law)",
                ))
            }
        }
        Ok(SampleMatrix::from_flat(n, data))
    }
}

fn check_model_arity(arity: usize) -> Result<()> {
    if arity > crate::lattice::MAX_ARITY {
        Err(Error::ArityTooLarge {
            arity,
            max: crate::lattice::MAX_ARITY,
        })
    } else {
        Ok(())
    }
}

#[inline]
fn exceedance_mask(row: &[f64], y: f64) -> u64 {
    let mut mask = 0u64;
    for (i, &v) in row.iter().enumerate() {
        if v > y {
            mask |= 1 << i;
        }
    }
    mask
}

fn table_from_level_weights(n: usize, g: &[f64]) -> Result<RealSetFunction> {
    let table = (0..bits::table_len(n) as u64)
        .map(|mask| g[bits::cardinality(mask)])
        .collect();
    RealSetFunction::new(n, table)
}

/// Validate caller-supplied g: length n+1, entries nonnegative (tiny
/// negatives clamped), total pattern mass sum_s C(n,s) g(s) equal to 1.
pub(crate) fn validate_level_weights(g: &[f64], n: usize) -> Result<Vec<f64>> {
    if g.len() != n + 1 {
        return Err(Error::InvalidLevelWeights(format!(
            "expected {} level weights, got {}",
            n + 1,
            g.len()
        )));
    }
    let mut cleaned = Vec::with_capacity(g.len());
    for &v in g {
        if !v.is_finite() || v < -1e-12 {
            return Err(Error::InvalidLevelWeights(format!(
                "level weight {v} is negative or non-finite"
            )));
        }
        cleaned.push(v.max(0.0));
    }
    let total: f64 = cleaned
        .iter()
        .enumerate()
        .map(|(s, &v)| bits::binomial(n, s) as f64 * v)
        .sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidLevelWeights(format!(
            "pattern mass sums to {total}, expected 1"
        )));
    }
    Ok(cleaned)
}

/// Discretize the shared component of a random shift as weighted support
/// points. Point masses and empirical steps are exact finite mixtures;
/// continuous kinds use composite Gauss-Legendre quadrature in probability
/// space, which keeps the resulting pattern distribution exactly
/// exchangeable whatever the quadrature error.
fn shared_mixture(shared: &MarginalCdf) -> Vec<(f64, f64)> {
    match shared {
        MarginalCdf::PointMass { value } => vec![(1.0, *value)],
        MarginalCdf::EmpiricalStep { values } => {
            let w = 1.0 / values.len() as f64;
            values.iter().map(|&v| (w, v)).collect()
        }
        _ => {
            const PANELS: usize = 32;
            // 8-point Gauss-Legendre abscissae and weights on [-1, 1].
            const GL_X: [f64; 8] = [
                -0.960_289_856_497_536_2,
                -0.796_666_477_413_626_7,
                -0.525_532_409_916_329_0,
                -0.183_434_642_495_649_8,
                0.183_434_642_495_649_8,
                0.525_532_409_916_329_0,
                0.796_666_477_413_626_7,
                0.960_289_856_497_536_2,
            ];
            const GL_W: [f64; 8] = [
                0.101_228_536_290_376_3,
                0.222_381_034_453_374_5,
                0.313_706_645_877_887_3,
                0.362_683_783_378_362_0,
                0.362_683_783_378_362_0,
                0.313_706_645_877_887_3,
                0.222_381_034_453_374_5,
                0.101_228_536_290_376_3,
            ];
            let mut nodes = Vec::with_capacity(PANELS * GL_X.len());
            let mut total = 0.0;
            for panel in 0..PANELS {
                for (x, w) in GL_X.iter().zip(GL_W.iter()) {
                    let u = (panel as f64 + (x + 1.0) / 2.0) / PANELS as f64;
                    let weight = w / (2.0 * PANELS as f64);
                    nodes.push((weight, shared.quantile(u)));
                    total += weight;
                }
            }
            for node in &mut nodes {
                node.0 /= total;
            }
            nodes
        }
    }
}

/// g_y(s) = E_Z[(1-F(y-Z))^s F(y-Z)^(n-s)] over the shared mixture.
fn shift_level_weights(n: usize, shared: &MarginalCdf, individual: &MarginalCdf, y: f64) -> Vec<f64> {
    let nodes = shared_mixture(shared);
    let mut g = vec![0.0; n + 1];
    for &(w, z) in &nodes {
        let q = individual.cdf(y - z);
        let p = 1.0 - q;
        for (s, slot) in g.iter_mut().enumerate() {
            *slot += w * p.powi(s as i32) * q.powi((n - s) as i32);
        }
    }
    g
}
