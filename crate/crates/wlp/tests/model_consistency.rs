//! Consistency of the dependence machinery across every model kind: pattern
//! masses, joint-cdf duality, level counts, and the route identities that tie
//! the engine together.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use wlp::engine::{
    self, cdf_complement, order_stat_ladder, survival_general, survival_via_order_stats,
};
use wlp::lattice::{LatticeDomain, SetFunction, WlpExpression as E};
use wlp::model::{JointCdfTable, JointModel, LevelWeightFn, MarginalCdf, SampleMatrix};
use wlp::setfn::RealSetFunction;

fn iid_uniform(n: usize) -> JointModel {
    JointModel::independent(vec![MarginalCdf::uniform(0.0, 1.0).unwrap(); n]).unwrap()
}

/// One representative of every model kind, all with three components, on a
/// lifetime scale of roughly [0, 3].
fn all_kinds(seed: u64) -> Vec<(&'static str, JointModel)> {
    let independent = JointModel::independent(vec![
        MarginalCdf::exponential(1.0).unwrap(),
        MarginalCdf::uniform(0.2, 2.2).unwrap(),
        MarginalCdf::weibull(1.5, 1.2).unwrap(),
    ])
    .unwrap();

    let exchangeable = JointModel::exchangeable(
        3,
        LevelWeightFn::new(|y: f64| {
            let f = MarginalCdf::Exponential { rate: 0.9 }.cdf(y);
            (0..=3).map(|s| f.powi(3 - s) * (1.0 - f).powi(s)).collect()
        }),
    )
    .unwrap();

    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let rows: Vec<Vec<f64>> = (0..400)
        .map(|_| {
            let z: f64 = rng.gen::<f64>() * 1.5;
            (0..3).map(|_| z + rng.gen::<f64>()).collect()
        })
        .collect();
    let empirical = JointModel::empirical(SampleMatrix::from_rows(rows).unwrap()).unwrap();

    // Joint cdf table of two independent uniforms on [0, 2], tabulated
    // densely enough that interpolation is exact on the test grid.
    let grid: Vec<f64> = (0..=40).map(|i| i as f64 * 0.1).collect();
    let u = MarginalCdf::uniform(0.0, 2.0).unwrap();
    let curve = |count_below: usize| -> Vec<(f64, f64)> {
        grid.iter()
            .map(|&y| (y, u.cdf(y).powi(count_below as i32)))
            .collect()
    };
    let table = JointCdfTable::new(
        2,
        vec![curve(2), curve(1), curve(1), vec![(0.0, 1.0)]],
    )
    .unwrap();
    let joint_cdf = JointModel::joint_cdf(table).unwrap();

    let shift_discrete = JointModel::random_shift(
        3,
        MarginalCdf::empirical_step(vec![0.0, 0.4, 1.1]).unwrap(),
        MarginalCdf::exponential(1.3).unwrap(),
    )
    .unwrap();
    let shift_continuous = JointModel::random_shift(
        3,
        MarginalCdf::uniform(0.0, 1.0).unwrap(),
        MarginalCdf::weibull(1.4, 0.8).unwrap(),
    )
    .unwrap();

    vec![
        ("independent", independent),
        ("exchangeable", exchangeable),
        ("empirical", empirical),
        ("joint-cdf", joint_cdf),
        ("shift-discrete", shift_discrete),
        ("shift-continuous", shift_continuous),
    ]
}

fn thresholds() -> Vec<f64> {
    (0..=12).map(|i| i as f64 * 0.25).collect()
}

#[test]
fn pattern_mass_sums_to_one_for_all_kinds() {
    for (name, model) in all_kinds(1) {
        for &y in &thresholds() {
            let d = model.indicator_distribution(y).unwrap();
            let total: f64 = d.probs().values().iter().sum();
            assert!((total - 1.0).abs() < 1e-9, "{name} at {y}: {total}");
        }
    }
}

#[test]
fn zeta_of_pattern_masses_is_joint_cdf_at_characteristics() {
    for (name, model) in all_kinds(2) {
        for &y in &thresholds() {
            let d = model.indicator_distribution(y).unwrap();
            let summed = d.probs().zeta_transform();
            for mask in 0..summed.values().len() as u64 {
                let direct = model.joint_cdf_at_characteristic(mask, y).unwrap();
                assert!(
                    (summed.value(mask) - direct).abs() < 1e-9,
                    "{name} at {y}, mask {mask}: {} vs {direct}",
                    summed.value(mask),
                );
            }
        }
    }
}

#[test]
fn mobius_of_joint_cdf_recovers_pattern_masses() {
    for (name, model) in all_kinds(3) {
        for &y in &thresholds() {
            let n = model.arity();
            let table: Vec<f64> = (0..1u64 << n)
                .map(|mask| model.joint_cdf_at_characteristic(mask, y).unwrap())
                .collect();
            let masses = RealSetFunction::new(n, table).unwrap().mobius_transform();
            let d = model.indicator_distribution(y).unwrap();
            for mask in 0..masses.values().len() as u64 {
                assert!(
                    (masses.value(mask) - d.prob(mask)).abs() < 1e-9,
                    "{name} at {y}, mask {mask}"
                );
            }
        }
    }
}

#[test]
fn level_count_routes_agree_for_all_kinds() {
    for (name, model) in all_kinds(4) {
        for &y in &thresholds() {
            let by_patterns = model.level_count_pmf(y).unwrap();
            let by_joint_cdf = model.level_count_pmf_via_joint_cdf(y).unwrap();
            for (a, b) in by_patterns.iter().zip(by_joint_cdf.iter()) {
                assert!((a - b).abs() < 1e-9, "{name} at {y}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn pgf_factorizes_for_independent_components() {
    let marginals = vec![
        MarginalCdf::exponential(1.0).unwrap(),
        MarginalCdf::uniform(0.0, 2.0).unwrap(),
        MarginalCdf::weibull(2.0, 1.0).unwrap(),
    ];
    let model = JointModel::independent(marginals.clone()).unwrap();
    let mut rng = ChaCha12Rng::seed_from_u64(11);
    for _ in 0..50 {
        let y = rng.gen::<f64>() * 2.0;
        let z: Vec<f64> = (0..3).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
        let d = model.indicator_distribution(y).unwrap();
        let direct = d.pgf(&z).unwrap();
        let product: f64 = marginals
            .iter()
            .zip(&z)
            .map(|(m, &zi)| m.cdf(y) + zi * (1.0 - m.cdf(y)))
            .product();
        assert!((direct - product).abs() < 1e-12, "y {y}: {direct} vs {product}");
    }
}

#[test]
fn order_statistic_routes_agree_for_all_kinds() {
    for (name, model) in all_kinds(5) {
        let n = model.arity();
        for &y in &thresholds() {
            for k in 1..=n {
                let via_levels = engine::order_statistic_cdf(&model, k, y).unwrap();
                let via_sum = engine::order_statistic_cdf_explicit(&model, k, y).unwrap();
                assert!(
                    (via_levels - via_sum).abs() < 1e-9,
                    "{name} k={k} y={y}: {via_levels} vs {via_sum}"
                );
            }
            let ladder = order_stat_ladder(&model, y).unwrap();
            let pmf = engine::level_pmf_from_order_stats(&ladder).unwrap();
            let direct = model.level_count_pmf(y).unwrap();
            for (a, b) in pmf.iter().zip(direct.iter()) {
                assert!((a - b).abs() < 1e-9, "{name} y={y}");
            }
        }
    }
}

#[test]
fn order_stats_route_exact_under_symmetry() {
    // i.i.d. and random-shift models are cardinality symmetric, so the
    // ladder route must reproduce the dot product on every system.
    let symmetric_models: Vec<(&str, JointModel)> = vec![
        (
            "iid",
            JointModel::independent(vec![MarginalCdf::exponential(0.8).unwrap(); 3]).unwrap(),
        ),
        (
            "shift",
            JointModel::random_shift(
                3,
                MarginalCdf::empirical_step(vec![0.1, 0.5, 0.9]).unwrap(),
                MarginalCdf::uniform(0.0, 1.0).unwrap(),
            )
            .unwrap(),
        ),
    ];
    let d = LatticeDomain::nonnegative();
    let systems = vec![
        E::meet_all((1..=3).map(E::projection)),
        E::join_all((1..=3).map(E::projection)),
        E::join(
            E::meet(E::projection(1), E::projection(2)),
            E::meet(E::projection(2), E::projection(3)),
        ),
        E::meet(E::join(E::constant(0.3), E::projection(1)), E::projection(3)),
    ];
    for (name, model) in &symmetric_models {
        for expr in &systems {
            let w = SetFunction::from_expression_with_arity(expr, 3, d).unwrap();
            for &y in &thresholds() {
                let general =
                    survival_general(&w, &model.indicator_distribution(y).unwrap()).unwrap();
                let ladder = order_stat_ladder(model, y).unwrap();
                let via = survival_via_order_stats(&w, &ladder, y).unwrap();
                assert!(
                    (general.survival - via.point.survival).abs() < 1e-9,
                    "{name} at {y}: {} vs {}",
                    general.survival,
                    via.point.survival
                );
            }
        }
    }
}

#[test]
fn order_stats_route_detects_broken_symmetry() {
    // Hand-built counterexample: independent but not identically distributed,
    // system p = x1, threshold where F1 = 0.3 and F2 = 0.6. The dot product
    // gives 0.7; the ladder route mixes the components and gives 0.55.
    let model = JointModel::independent(vec![
        MarginalCdf::uniform(0.0, 1.0).unwrap(),
        MarginalCdf::uniform(0.0, 0.5).unwrap(),
    ])
    .unwrap();
    let w = SetFunction::from_expression_with_arity(
        &E::projection(1),
        2,
        LatticeDomain::unit(),
    )
    .unwrap();
    let y = 0.3;
    let general = survival_general(&w, &model.indicator_distribution(y).unwrap()).unwrap();
    let ladder = order_stat_ladder(&model, y).unwrap();
    let via = survival_via_order_stats(&w, &ladder, y).unwrap();
    assert!((general.survival - 0.7).abs() < 1e-12);
    assert!((via.point.survival - 0.55).abs() < 1e-12);
    assert!((general.survival - via.point.survival).abs() >= 0.1);
}

#[test]
fn route_agreement_on_overlapping_preconditions() {
    // Exhaustive small sweep: for each model kind and a family of systems,
    // every route whose preconditions hold must match the dot product.
    let d = LatticeDomain::nonnegative();
    let systems = vec![
        E::meet_all((1..=3).map(E::projection)),
        E::join_all((1..=3).map(E::projection)),
        E::join(E::meet(E::projection(1), E::projection(2)), E::projection(3)),
        E::meet(E::join(E::constant(0.4), E::projection(2)), E::projection(1)),
        E::join(
            E::meet_all((1..=3).map(E::projection)),
            E::constant(0.2),
        ),
    ];
    for (name, model) in all_kinds(6) {
        if model.arity() != 3 {
            continue;
        }
        for expr in &systems {
            let w = SetFunction::from_expression_with_arity(expr, 3, d).unwrap();
            for &y in &thresholds() {
                let reference =
                    survival_general(&w, &model.indicator_distribution(y).unwrap()).unwrap();
                for route in engine::applicable_routes(&w, &model) {
                    let point = match engine::survival_at(&w, &model, y, route) {
                        Ok(p) => p,
                        // symmetry-conditional routes may refuse asymmetric
                        // models; that is their contract, not a failure.
                        Err(_) if route == engine::Route::CardinalitySymmetric => continue,
                        Err(e) => panic!("{name} route {route:?} failed: {e}"),
                    };
                    if route == engine::Route::OrderStats
                        && !model
                            .indicator_distribution(y)
                            .unwrap()
                            .has_cardinality_symmetry(1e-9)
                    {
                        continue;
                    }
                    assert!(
                        (point.survival - reference.survival).abs() < 1e-9,
                        "{name} route {route:?} at {y}: {} vs {}",
                        point.survival,
                        reference.survival
                    );
                }
            }
        }
    }
}

#[test]
fn lattice_polynomial_survival_sandwiched_between_min_and_max() {
    let d = LatticeDomain::unit();
    let n = 3;
    let series = SetFunction::from_expression_with_arity(
        &E::meet_all((1..=n).map(E::projection)),
        n,
        d,
    )
    .unwrap();
    let parallel = SetFunction::from_expression_with_arity(
        &E::join_all((1..=n).map(E::projection)),
        n,
        d,
    )
    .unwrap();
    let middle = SetFunction::from_expression_with_arity(
        &E::join(
            E::meet(E::projection(1), E::projection(2)),
            E::meet(E::projection(2), E::projection(3)),
        ),
        n,
        d,
    )
    .unwrap();
    let model = iid_uniform(n);
    for i in 0..10 {
        let y = i as f64 / 10.0;
        let dist = model.indicator_distribution(y).unwrap();
        let lo = survival_general(&series, &dist).unwrap().survival;
        let mid = survival_general(&middle, &dist).unwrap().survival;
        let hi = survival_general(&parallel, &dist).unwrap().survival;
        assert!(lo <= mid + 1e-12 && mid <= hi + 1e-12);
    }
}

#[test]
fn complement_identity_across_kinds() {
    let d = LatticeDomain::nonnegative();
    let expr = E::join(
        E::meet(E::projection(1), E::projection(2)),
        E::meet(E::projection(3), E::constant(0.8)),
    );
    let w = SetFunction::from_expression_with_arity(&expr, 3, d).unwrap();
    for (name, model) in all_kinds(7) {
        if model.arity() != 3 {
            continue;
        }
        for &y in &thresholds() {
            let dist = model.indicator_distribution(y).unwrap();
            let s = survival_general(&w, &dist).unwrap();
            let c = cdf_complement(&w, &dist).unwrap();
            assert!((s.cdf - c).abs() < 1e-12, "{name} at {y}");
        }
    }
}

#[test]
fn cdf_curves_nondecreasing_for_all_kinds() {
    let d = LatticeDomain::nonnegative();
    let expr = E::join(
        E::meet(E::projection(1), E::projection(2)),
        E::meet(E::projection(2), E::projection(3)),
    );
    let w = SetFunction::from_expression_with_arity(&expr, 3, d).unwrap();
    let grid = thresholds();
    for (name, model) in all_kinds(8) {
        if model.arity() != 3 {
            continue;
        }
        let curve = engine::cdf_curve(&w, &model, &grid).unwrap();
        for pair in curve.windows(2) {
            assert!(
                pair[0].cdf <= pair[1].cdf + 1e-12,
                "{name}: {} then {}",
                pair[0].cdf,
                pair[1].cdf
            );
        }
        for p in &curve {
            assert!((0.0..=1.0).contains(&p.cdf));
            assert!((0.0..=1.0).contains(&p.survival));
            assert!((p.cdf + p.survival - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn inconsistent_joint_cdf_table_rejected() {
    // F drops when a constraint is removed: impossible for a joint cdf.
    let table = JointCdfTable::new(
        2,
        vec![
            vec![(0.0, 0.5)],
            vec![(0.0, 0.2)],
            vec![(0.0, 0.6)],
            vec![(0.0, 1.0)],
        ],
    )
    .unwrap();
    let model = JointModel::joint_cdf(table).unwrap();
    assert!(model.indicator_distribution(0.0).is_err());
}

#[test]
fn nearly_consistent_joint_cdf_table_clamped() {
    // A -5e-10 mass from rounding is clamped to zero and renormalized.
    let eps = 5e-10;
    let table = JointCdfTable::new(
        2,
        vec![
            vec![(0.0, 0.25)],
            vec![(0.0, 0.5 - eps)],
            vec![(0.0, 0.5)],
            vec![(0.0, 1.0)],
        ],
    )
    .unwrap();
    let model = JointModel::joint_cdf(table).unwrap();
    let dist = model.indicator_distribution(0.0).unwrap();
    let total: f64 = dist.probs().values().iter().sum();
    assert!((total - 1.0).abs() < 1e-12);
    assert!(dist.probs().values().iter().all(|&v| v >= 0.0));
}
