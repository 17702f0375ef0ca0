//! Seeded Monte Carlo estimation of the lifetime cdf, used to validate every
//! analytic route against an independent path (sampling plus direct
//! expression evaluation, never the subset tables).

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::Serialize;

use crate::engine::SurvivalPoint;
use crate::error::{Error, Result};
use crate::lattice::WlpExpression;
use crate::model::JointModel;

/// Fewer draws than this is a configuration mistake, not an estimate.
pub const MIN_SAMPLES: usize = 1000;

/// Draws are generated in fixed-size chunks, each from its own counter-mode
/// stream of the master seed. Workers may split chunks among themselves and
/// the aggregate counts cannot depend on the split.
const CHUNK: usize = 8192;

/// Empirical cdf estimate on a grid, with per-point binomial standard errors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub grid: Vec<f64>,
    pub empirical_cdf: Vec<f64>,
    pub stderr: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
}

/// Outcome of checking an analytic curve against an oracle report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleComparison {
    pub sigma_multiplier: f64,
    pub deltas: Vec<f64>,
    pub allowances: Vec<f64>,
    pub max_abs_delta: f64,
    pub failing_points: Vec<usize>,
    pub pass: bool,
}

/// Estimate the cdf of the system lifetime on `grid` from `samples` joint
/// draws. Evaluation goes through the expression tree, so the estimate is
/// independent of the set-function tables the analytic routes use.
pub fn estimate_cdf(
    expr: &WlpExpression,
    model: &JointModel,
    grid: &[f64],
    samples: usize,
    seed: u64,
) -> Result<OracleReport> {
    if grid.is_empty() || grid.iter().any(|v| v.is_nan()) || grid.windows(2).any(|w| w[0] > w[1])
    {
        return Err(Error::BadGrid);
    }
    if samples < MIN_SAMPLES {
        return Err(Error::TooFewSamples {
            requested: samples as u64,
            minimum: MIN_SAMPLES as u64,
        });
    }
    if expr.arity() > model.arity() {
        return Err(Error::ArityMismatch {
            expected: model.arity(),
            found: expr.arity(),
        });
    }
    // diff[i] draws with first grid index i such that grid[i] >= Y; suffix
    // sums then give the counts of Y <= grid[i].
    let mut diff = vec![0u64; grid.len() + 1];
    let mut remaining = samples;
    let mut chunk_index = 0u64;
    while remaining > 0 {
        let count = remaining.min(CHUNK);
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        rng.set_stream(chunk_index);
        let draws = model.sample_lifetimes_with_rng(count, &mut rng)?;
        for r in 0..draws.rows() {
            let lifetime = expr.eval(draws.row(r))?;
            let first = grid.partition_point(|&g| g < lifetime);
            diff[first] += 1;
        }
        remaining -= count;
        chunk_index += 1;
    }
    let mut cumulative = 0u64;
    let mut empirical = Vec::with_capacity(grid.len());
    let mut stderr = Vec::with_capacity(grid.len());
    for &d in diff.iter().take(grid.len()) {
        cumulative += d;
        let p = cumulative as f64 / samples as f64;
        empirical.push(p);
        stderr.push((p * (1.0 - p) / samples as f64).sqrt());
    }
    Ok(OracleReport {
        grid: grid.to_vec(),
        empirical_cdf: empirical,
        stderr,
        samples,
        seed,
    })
}

/// Check an analytic curve against the report: pass when every point is
/// within `sigma_multiplier` standard errors (plus a 1e-9 cushion for exact
/// points where the stderr vanishes).
pub fn compare(
    analytic: &[SurvivalPoint],
    report: &OracleReport,
    sigma_multiplier: f64,
) -> Result<OracleComparison> {
    if analytic.len() != report.grid.len()
        || analytic
            .iter()
            .zip(report.grid.iter())
            .any(|(a, &g)| a.y != g)
    {
        return Err(Error::GridMismatch);
    }
    let mut deltas = Vec::with_capacity(analytic.len());
    let mut allowances = Vec::with_capacity(analytic.len());
    let mut failing = Vec::new();
    let mut max_abs = 0.0f64;
    for (i, (a, &e)) in analytic
        .iter()
        .zip(report.empirical_cdf.iter())
        .enumerate()
    {
        let delta = (a.cdf - e).abs();
        let allowed = sigma_multiplier * report.stderr[i] + 1e-9;
        if delta > allowed {
            failing.push(i);
        }
        max_abs = max_abs.max(delta);
        deltas.push(delta);
        allowances.push(allowed);
    }
    Ok(OracleComparison {
        sigma_multiplier,
        deltas,
        allowances,
        max_abs_delta: max_abs,
        pass: failing.is_empty(),
        failing_points: failing,
    })
}
