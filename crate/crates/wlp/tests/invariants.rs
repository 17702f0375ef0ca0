//! Cross-cutting properties of the lattice layer and the system language.

use proptest::prelude::*;

use wlp::dsl::{format_expression, parse_system};
use wlp::lattice::{
    order_statistic, symmetric_decomposition_eval, LatticeDomain, SetFunction, WlpExpression,
};

fn domain10() -> LatticeDomain {
    LatticeDomain::new(0.0, 10.0).unwrap()
}

fn arb_expr(arity: usize, depth: u32) -> impl Strategy<Value = WlpExpression> {
    let leaf = prop_oneof![
        (1..=arity).prop_map(WlpExpression::projection),
        (0.0..=10.0f64).prop_map(WlpExpression::constant),
    ];
    leaf.prop_recursive(depth, 64, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| WlpExpression::meet(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| WlpExpression::join(a, b)),
        ]
    })
}

fn arb_point(arity: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(0.0..=10.0f64, arity)
}

proptest! {
    /// Tree evaluation and disjunctive-normal-form evaluation agree
    /// everywhere.
    #[test]
    fn ast_and_dnf_agree(expr in arb_expr(3, 5), x in arb_point(3)) {
        let w = SetFunction::from_expression_with_arity(&expr, 3, domain10()).unwrap();
        let via_ast = expr.eval(&x).unwrap();
        let via_dnf = w.eval_dnf(&x).unwrap();
        prop_assert_eq!(via_ast, via_dnf);
    }

    /// Canonical tables never decrease under subset inclusion.
    #[test]
    fn canonical_tables_are_nondecreasing(expr in arb_expr(4, 5)) {
        let w = SetFunction::from_expression_with_arity(&expr, 4, domain10()).unwrap();
        prop_assert!(w.is_nondecreasing());
    }

    /// DNF evaluation is nondecreasing in each argument.
    #[test]
    fn dnf_monotone_per_argument(
        expr in arb_expr(3, 5),
        x in arb_point(3),
        bump in 0.0..=5.0f64,
        idx in 0usize..3,
    ) {
        let w = SetFunction::from_expression_with_arity(&expr, 3, domain10()).unwrap();
        let base = w.eval_dnf(&x).unwrap();
        let mut shifted = x.clone();
        shifted[idx] = (shifted[idx] + bump).min(10.0);
        let moved = w.eval_dnf(&shifted).unwrap();
        prop_assert!(moved >= base);
    }

    /// The sorted-order definition of the k-th order statistic matches its
    /// canonical disjunctive normal form on all of 0..=n+1.
    #[test]
    fn order_statistic_matches_dnf(x in arb_point(4)) {
        let d = domain10();
        for k in 0..=5usize {
            let direct = order_statistic(&d, k, &x).unwrap();
            if (1..=4).contains(&k) {
                let w = SetFunction::order_statistic(k, 4, d).unwrap();
                prop_assert_eq!(direct, w.eval_dnf(&x).unwrap());
            } else {
                prop_assert_eq!(direct, if k == 0 { d.bottom() } else { d.top() });
            }
        }
    }

    /// Evaluating through the level decomposition equals evaluating the
    /// cardinality-based table it describes.
    #[test]
    fn symmetric_decomposition_matches_dnf(
        raw in proptest::collection::vec(0.0..=10.0f64, 4),
        x in arb_point(3),
    ) {
        let mut levels = raw;
        levels.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let d = domain10();
        let w = SetFunction::from_cardinality_profile(&levels, d).unwrap();
        prop_assert_eq!(
            symmetric_decomposition_eval(&d, &levels, &x).unwrap(),
            w.eval_dnf(&x).unwrap()
        );
    }

    /// Formatted text reparses to a structurally identical expression, and
    /// the reparse evaluates identically.
    #[test]
    fn format_parse_round_trip(expr in arb_expr(5, 6), x in arb_point(5)) {
        let text = format_expression(&expr);
        let out = parse_system(&text, &domain10()).unwrap();
        prop_assert_eq!(&out.expr, &expr, "source: {}", text);
        prop_assert_eq!(out.expr.eval(&x).unwrap(), expr.eval(&x).unwrap());
    }
}

/// Exhaustive agreement of tree and DNF evaluation for tiny systems on a
/// coarse value grid.
#[test]
fn ast_and_dnf_agree_exhaustively_for_small_systems() {
    let d = domain10();
    let exprs: Vec<WlpExpression> = {
        use WlpExpression as E;
        vec![
            E::projection(1),
            E::constant(4.0),
            E::meet(E::projection(1), E::projection(2)),
            E::join(E::projection(1), E::meet(E::projection(2), E::projection(3))),
            E::meet(
                E::join(E::constant(2.0), E::projection(1)),
                E::join(E::projection(2), E::meet(E::projection(3), E::constant(8.0))),
            ),
        ]
    };
    let grid = [0.0, 2.0, 5.0, 10.0];
    for expr in exprs {
        let w = SetFunction::from_expression_with_arity(&expr, 3, d).unwrap();
        for &a in &grid {
            for &b in &grid {
                for &c in &grid {
                    let x = [a, b, c];
                    assert_eq!(expr.eval(&x).unwrap(), w.eval_dnf(&x).unwrap());
                }
            }
        }
    }
}
