//! Survival and cdf computation for Y = p_w(X_1,..,X_n), by every route the
//! library supports, plus the order-statistic specializations.
//!
//! All routes are algebraic rearrangements of the same dot product between
//! the thresholded set function and the exceedance pattern distribution, so
//! on any model where several routes apply they must agree to rounding; the
//! cli surfaces the cross-route deviation as its core trust check.

use serde::Serialize;

use crate::bits;
use crate::error::{Error, Result};
use crate::lattice::SetFunction;
use crate::model::{IndicatorDistribution, JointModel, SYMMETRY_TOLERANCE};

/// One evaluated point of the lifetime distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurvivalPoint {
    pub y: f64,
    pub cdf: f64,
    pub survival: f64,
}

impl SurvivalPoint {
    fn from_survival(y: f64, survival: f64) -> Self {
        let survival = survival.clamp(0.0, 1.0);
        Self {
            y,
            cdf: 1.0 - survival,
            survival,
        }
    }
}

/// Validity tag for routes that are exact only under extra assumptions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RouteGuarantee {
    /// Exact for every model.
    Unconditional,
    /// Exact exactly when the exceedance pattern is cardinality symmetric at
    /// the evaluated threshold; informative otherwise (the mismatch itself
    /// witnesses broken symmetry).
    UnderCardinalitySymmetry,
}

/// A survival value together with the guarantee its route carries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LabeledSurvival {
    pub point: SurvivalPoint,
    pub guarantee: RouteGuarantee,
}

/// The set function thresholded at y: 1 on subsets whose value exceeds y.
/// Nondecreasing whenever the source table is.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdIndicatorSetFunction {
    pub threshold: f64,
    pub omega: crate::setfn::RealSetFunction,
}

impl ThresholdIndicatorSetFunction {
    pub fn new(w: &SetFunction, threshold: f64) -> Self {
        let table = w.table().iter().map(|&v| f64::from(v > threshold)).collect();
        Self {
            threshold,
            omega: crate::setfn::RealSetFunction::new(w.arity(), table)
                .expect("indicator table is finite by construction"),
        }
    }
}

/// The dot product of the thresholded set function with the pattern
/// distribution: survival = sum over subsets with w(S) > y of Pr(pattern S).
pub fn survival_general(w: &SetFunction, dist: &IndicatorDistribution) -> Result<SurvivalPoint> {
    if w.arity() != dist.arity() {
        return Err(Error::ArityMismatch {
            expected: w.arity(),
            found: dist.arity(),
        });
    }
    let y = dist.threshold();
    let mut survival = 0.0;
    for mask in 0..w.table().len() as u64 {
        if w.value(mask) > y {
            survival += dist.prob(mask);
        }
    }
    Ok(SurvivalPoint::from_survival(y, survival))
}

/// The complementary sum: cdf = sum over subsets with w(S) <= y. Used by the
/// tests to pin the dot-product rearrangement; agrees with
/// [`survival_general`] up to the normalization of the pattern masses.
pub fn cdf_complement(w: &SetFunction, dist: &IndicatorDistribution) -> Result<f64> {
    if w.arity() != dist.arity() {
        return Err(Error::ArityMismatch {
            expected: w.arity(),
            found: dist.arity(),
        });
    }
    let y = dist.threshold();
    let mut cdf = 0.0;
    for mask in 0..w.table().len() as u64 {
        if w.value(mask) <= y {
            cdf += dist.prob(mask);
        }
    }
    Ok(cdf)
}

/// Product-form route for independent components: each pattern probability is
/// the product of per-component cdf or survival factors.
pub fn survival_independent(
    w: &SetFunction,
    marginals: &[crate::model::MarginalCdf],
    y: f64,
) -> Result<SurvivalPoint> {
    if w.arity() != marginals.len() {
        return Err(Error::ArityMismatch {
            expected: w.arity(),
            found: marginals.len(),
        });
    }
    let f: Vec<f64> = marginals.iter().map(|m| m.cdf(y)).collect();
    let mut survival = 0.0;
    for mask in 0..w.table().len() as u64 {
        if w.value(mask) > y {
            let mut p = 1.0;
            for (i, fi) in f.iter().enumerate() {
                p *= if mask >> i & 1 == 1 { 1.0 - fi } else { *fi };
            }
            survival += p;
        }
    }
    Ok(SurvivalPoint::from_survival(y, survival))
}

/// Specialized route for lattice polynomials (no constants): the threshold
/// indicator no longer depends on y below the top, so survival is the mass of
/// the top-valued subsets.
pub fn survival_lattice_polynomial(
    w: &SetFunction,
    dist: &IndicatorDistribution,
) -> Result<SurvivalPoint> {
    if !w.is_lattice_polynomial() {
        return Err(Error::NotLatticePolynomial);
    }
    if w.arity() != dist.arity() {
        return Err(Error::ArityMismatch {
            expected: w.arity(),
            found: dist.arity(),
        });
    }
    let y = dist.threshold();
    if y >= w.domain().top() {
        return Ok(SurvivalPoint::from_survival(y, 0.0));
    }
    let top = w.domain().top();
    let mut survival = 0.0;
    for mask in 0..w.table().len() as u64 {
        if w.value(mask) == top {
            survival += dist.prob(mask);
        }
    }
    Ok(SurvivalPoint::from_survival(y, survival))
}

/// Smallest s in 0..=n with m(s) > y, or n+1 when no level exceeds y.
pub fn threshold_index(levels: &[f64], y: f64) -> usize {
    levels
        .iter()
        .position(|&m| m > y)
        .unwrap_or(levels.len())
}

/// Cardinality-based route: survival is the tail mass of the level-count
/// distribution from the threshold index on.
pub fn survival_symmetric(levels: &[f64], level_pmf: &[f64], y: f64) -> Result<SurvivalPoint> {
    if levels.len() != level_pmf.len() {
        return Err(Error::ArityMismatch {
            expected: levels.len(),
            found: level_pmf.len(),
        });
    }
    if !levels.windows(2).all(|w| w[0] <= w[1]) {
        return Err(Error::NonMonotoneLevels);
    }
    check_pmf(level_pmf)?;
    let start = threshold_index(levels, y);
    let survival = level_pmf[start.min(level_pmf.len())..].iter().sum();
    Ok(SurvivalPoint::from_survival(y, survival))
}

/// F of the k-th order statistic at y: the probability that at most n-k
/// components survive past y. k = 0 and k = n+1 are the formal constants 1
/// and 0.
pub fn order_statistic_cdf(model: &JointModel, k: usize, y: f64) -> Result<f64> {
    let n = model.arity();
    if k > n + 1 {
        return Err(Error::BadOrderIndex { k, max: n + 1 });
    }
    if k == 0 {
        return Ok(1.0);
    }
    if k == n + 1 {
        return Ok(0.0);
    }
    let pmf = model.level_count_pmf(y)?;
    Ok(pmf[..=n - k].iter().sum())
}

/// Closed-form alternating sum for the same quantity, driven directly by
/// joint cdf values at the characteristic points.
pub fn order_statistic_cdf_explicit(model: &JointModel, k: usize, y: f64) -> Result<f64> {
    let n = model.arity();
    if k == 0 || k > n {
        return Err(Error::BadOrderIndex { k, max: n });
    }
    // Group by |S|: the complement cdf values only depend on which components
    // are constrained, so sum them per cardinality first.
    let full = bits::table_len(n) as u64 - 1;
    let mut by_size = vec![0.0; n + 1];
    for mask in 0..=full {
        by_size[bits::cardinality(mask)] += model.joint_cdf_at_characteristic(full ^ mask, y)?;
    }
    let mut acc = 0.0;
    for (s, a) in by_size.iter().enumerate().skip(k) {
        let sign = if (s - k) % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * bits::binomial(s - 1, k - 1) as f64 * a;
    }
    Ok(acc)
}

/// Recover the level-count pmf from the ladder of order-statistic cdfs at a
/// fixed threshold: consecutive differences, p(s) = F(n-s) - F(n-s+1).
pub fn level_pmf_from_order_stats(cdf_by_order: &[f64]) -> Result<Vec<f64>> {
    if cdf_by_order.len() < 2 {
        return Err(Error::InvalidOrderCdfs(
            "need the boundary entries F(0) and F(n+1)".into(),
        ));
    }
    let n = cdf_by_order.len() - 2;
    if (cdf_by_order[0] - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidOrderCdfs(format!(
            "F(0) must be 1, got {}",
            cdf_by_order[0]
        )));
    }
    if cdf_by_order[n + 1].abs() > 1e-12 {
        return Err(Error::InvalidOrderCdfs(format!(
            "F(n+1) must be 0, got {}",
            cdf_by_order[n + 1]
        )));
    }
    if !cdf_by_order.windows(2).all(|w| w[1] <= w[0] + 1e-12) {
        return Err(Error::InvalidOrderCdfs(
            "values must be nonincreasing in k".into(),
        ));
    }
    Ok((0..=n)
        .map(|s| (cdf_by_order[n - s] - cdf_by_order[n - s + 1]).max(0.0))
        .collect())
}

/// Route for exchangeable exceedance patterns: survival as the double sum of
/// level weights against per-cardinality counts of surviving subsets.
pub fn survival_cardinality_symmetric(
    w: &SetFunction,
    level_weights: &[f64],
    y: f64,
) -> Result<SurvivalPoint> {
    let n = w.arity();
    let g = crate::model::validate_level_weights(level_weights, n)?;
    let counts = surviving_counts(w, y);
    let survival = g
        .iter()
        .zip(counts.iter())
        .map(|(gv, &c)| gv * c as f64)
        .sum();
    Ok(SurvivalPoint::from_survival(y, survival))
}

/// Express survival through the order-statistic cdf ladder. The linear
/// relation is exact precisely when the model has cardinality symmetry at y,
/// so the result is labeled rather than guarded: on asymmetric models the
/// mismatch against [`survival_general`] is itself the diagnostic.
pub fn survival_via_order_stats(
    w: &SetFunction,
    cdf_by_order: &[f64],
    y: f64,
) -> Result<LabeledSurvival> {
    let n = w.arity();
    if cdf_by_order.len() != n + 2 {
        return Err(Error::InvalidOrderCdfs(format!(
            "expected {} entries (k = 0..=n+1), got {}",
            n + 2,
            cdf_by_order.len()
        )));
    }
    let counts = surviving_counts(w, y);
    let mut survival = 0.0;
    for (s, &c) in counts.iter().enumerate() {
        let fraction = c as f64 / bits::binomial(n, s) as f64;
        survival += fraction * (cdf_by_order[n - s] - cdf_by_order[n - s + 1]);
    }
    Ok(LabeledSurvival {
        point: SurvivalPoint::from_survival(y, survival),
        guarantee: RouteGuarantee::UnderCardinalitySymmetry,
    })
}

/// Number of subsets per cardinality whose set-function value exceeds y.
fn surviving_counts(w: &SetFunction, y: f64) -> Vec<u64> {
    let mut counts = vec![0u64; w.arity() + 1];
    for mask in 0..w.table().len() as u64 {
        if w.value(mask) > y {
            counts[bits::cardinality(mask)] += 1;
        }
    }
    counts
}

fn check_pmf(pmf: &[f64]) -> Result<()> {
    let mut total = 0.0;
    for &p in pmf {
        if !(p >= -1e-12) {
            return Err(Error::InvalidPmf(format!("entry {p} is negative")));
        }
        total += p;
    }
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidPmf(format!(
            "entries sum to {total}, expected 1"
        )));
    }
    Ok(())
}

/// Computation route for a cdf curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Route {
    General,
    Independent,
    Lattice,
    Symmetric,
    CardinalitySymmetric,
    OrderStats,
}

impl Route {
    pub fn name(&self) -> &'static str {
        match self {
            Route::General => "general",
            Route::Independent => "independent",
            Route::Lattice => "lattice",
            Route::Symmetric => "symmetric",
            Route::CardinalitySymmetric => "cardinality-symmetric",
            Route::OrderStats => "order-stats",
        }
    }
}

impl std::str::FromStr for Route {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "general" => Ok(Route::General),
            "independent" => Ok(Route::Independent),
            "lattice" => Ok(Route::Lattice),
            "symmetric" => Ok(Route::Symmetric),
            "cardinality-symmetric" => Ok(Route::CardinalitySymmetric),
            "order-stats" => Ok(Route::OrderStats),
            other => Err(Error::InvalidInput(format!("unknown route {other:?}"))),
        }
    }
}

/// Pick the most specific route for this system/model pair: the product form
/// for independent models, the cardinality route for symmetric systems, the
/// dot product otherwise.
pub fn auto_route(w: &SetFunction, model: &JointModel) -> Route {
    if matches!(model, JointModel::Independent { .. }) {
        Route::Independent
    } else if w.cardinality_profile().is_some() {
        Route::Symmetric
    } else {
        Route::General
    }
}

/// Every route that can run on this pair. Symmetry-conditional routes are
/// included; whether the model actually satisfies cardinality symmetry is a
/// per-threshold question the caller checks.
pub fn applicable_routes(w: &SetFunction, model: &JointModel) -> Vec<Route> {
    let mut routes = vec![Route::General];
    if matches!(model, JointModel::Independent { .. }) {
        routes.push(Route::Independent);
    }
    if w.is_lattice_polynomial() {
        routes.push(Route::Lattice);
    }
    if w.cardinality_profile().is_some() {
        routes.push(Route::Symmetric);
    }
    routes.push(Route::CardinalitySymmetric);
    routes.push(Route::OrderStats);
    routes
}

/// Evaluate the lifetime cdf on a sorted grid via the automatically selected
/// route.
pub fn cdf_curve(
    w: &SetFunction,
    model: &JointModel,
    grid: &[f64],
) -> Result<Vec<SurvivalPoint>> {
    cdf_curve_with_route(w, model, grid, auto_route(w, model))
}

/// Evaluate the lifetime cdf on a sorted grid via an explicit route.
pub fn cdf_curve_with_route(
    w: &SetFunction,
    model: &JointModel,
    grid: &[f64],
    route: Route,
) -> Result<Vec<SurvivalPoint>> {
    check_grid(grid)?;
    if w.arity() != model.arity() {
        return Err(Error::ArityMismatch {
            expected: w.arity(),
            found: model.arity(),
        });
    }
    grid.iter()
        .map(|&y| survival_at(w, model, y, route))
        .collect()
}

/// One point of the curve on a given route.
pub fn survival_at(
    w: &SetFunction,
    model: &JointModel,
    y: f64,
    route: Route,
) -> Result<SurvivalPoint> {
    match route {
        Route::General => survival_general(w, &model.indicator_distribution(y)?),
        Route::Independent => match model {
            JointModel::Independent { marginals } => survival_independent(w, marginals, y),
            _ => Err(Error::RouteInapplicable {
                route: "independent",
                reason: "model components are not independent".into(),
            }),
        },
        Route::Lattice => {
            if !w.is_lattice_polynomial() {
                return Err(Error::RouteInapplicable {
                    route: "lattice",
                    reason: Error::NotLatticePolynomial.to_string(),
                });
            }
            survival_lattice_polynomial(w, &model.indicator_distribution(y)?)
        }
        Route::Symmetric => {
            let levels = w.cardinality_profile().ok_or(Error::RouteInapplicable {
                route: "symmetric",
                reason: Error::NotCardinalityBased.to_string(),
            })?;
            let pmf = model.level_count_pmf(y)?;
            survival_symmetric(&levels, &pmf, y)
        }
        Route::CardinalitySymmetric => {
            let g = model.level_weights(y, SYMMETRY_TOLERANCE).map_err(|e| {
                Error::RouteInapplicable {
                    route: "cardinality-symmetric",
                    reason: e.to_string(),
                }
            })?;
            survival_cardinality_symmetric(w, &g, y)
        }
        Route::OrderStats => {
            let ladder = order_stat_ladder(model, y)?;
            Ok(survival_via_order_stats(w, &ladder, y)?.point)
        }
    }
}

/// F of every order statistic at a fixed threshold: k = 0..=n+1.
pub fn order_stat_ladder(model: &JointModel, y: f64) -> Result<Vec<f64>> {
    let n = model.arity();
    let pmf = model.level_count_pmf(y)?;
    let mut ladder = Vec::with_capacity(n + 2);
    ladder.push(1.0);
    for k in 1..=n {
        ladder.push(pmf[..=n - k].iter().sum());
    }
    ladder.push(0.0);
    Ok(ladder)
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty()
        || grid.iter().any(|v| v.is_nan())
        || grid.windows(2).any(|w| w[0] > w[1])
    {
        return Err(Error::BadGrid);
    }
    Ok(())
}
