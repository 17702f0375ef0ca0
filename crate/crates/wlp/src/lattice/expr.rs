use crate::error::{Error, Result};
use crate::lattice::LatticeDomain;

/// Expression tree for a weighted lattice polynomial: projections, constants,
/// and binary meet (min) / join (max).
///
/// Projection indices are 1-based, matching the usual component numbering of
/// reliability block diagrams.
#[derive(Debug, Clone, PartialEq)]
pub enum WlpExpression {
    Projection(usize),
    Constant(f64),
    Meet(Box<WlpExpression>, Box<WlpExpression>),
    Join(Box<WlpExpression>, Box<WlpExpression>),
}

impl WlpExpression {
    pub fn projection(index: usize) -> Self {
        WlpExpression::Projection(index)
    }

    pub fn constant(value: f64) -> Self {
        WlpExpression::Constant(value)
    }

    pub fn meet(left: WlpExpression, right: WlpExpression) -> Self {
        WlpExpression::Meet(Box::new(left), Box::new(right))
    }

    pub fn join(left: WlpExpression, right: WlpExpression) -> Self {
        WlpExpression::Join(Box::new(left), Box::new(right))
    }

    /// n-ary meet, folded left. Panics on an empty argument list.
    pub fn meet_all<I: IntoIterator<Item = WlpExpression>>(items: I) -> Self {
        let mut it = items.into_iter();
        let first = it.next().expect("meet_all needs at least one operand");
        it.fold(first, WlpExpression::meet)
    }

    /// n-ary join, folded left. Panics on an empty argument list.
    pub fn join_all<I: IntoIterator<Item = WlpExpression>>(items: I) -> Self {
        let mut it = items.into_iter();
        let first = it.next().expect("join_all needs at least one operand");
        it.fold(first, WlpExpression::join)
    }

    /// The number of arguments the expression draws on: the largest
    /// projection index used, or 0 for constant-only expressions.
    pub fn arity(&self) -> usize {
        match self {
            WlpExpression::Projection(k) => *k,
            WlpExpression::Constant(_) => 0,
            WlpExpression::Meet(l, r) | WlpExpression::Join(l, r) => l.arity().max(r.arity()),
        }
    }

    /// Recursive min/max evaluation at the point `x`.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        match self {
            WlpExpression::Projection(k) => {
                if *k == 0 || *k > x.len() {
                    Err(Error::BadProjection {
                        index: *k,
                        arity: x.len(),
                    })
                } else {
                    Ok(x[*k - 1])
                }
            }
            WlpExpression::Constant(c) => Ok(*c),
            WlpExpression::Meet(l, r) => Ok(l.eval(x)?.min(r.eval(x)?)),
            WlpExpression::Join(l, r) => Ok(l.eval(x)?.max(r.eval(x)?)),
        }
    }

    /// Check every constant against the domain; the domain invariant for
    /// expressions used to build canonical set functions.
    pub fn check_constants(&self, domain: &LatticeDomain) -> Result<()> {
        match self {
            WlpExpression::Projection(_) => Ok(()),
            WlpExpression::Constant(c) => domain.check(*c).map(|_| ()),
            WlpExpression::Meet(l, r) | WlpExpression::Join(l, r) => {
                l.check_constants(domain)?;
                r.check_constants(domain)
            }
        }
    }

    /// Projection indices used anywhere in the expression.
    pub fn used_indices(&self) -> std::collections::BTreeSet<usize> {
        let mut set = std::collections::BTreeSet::new();
        self.collect_indices(&mut set);
        set
    }

    fn collect_indices(&self, into: &mut std::collections::BTreeSet<usize>) {
        match self {
            WlpExpression::Projection(k) => {
                into.insert(*k);
            }
            WlpExpression::Constant(_) => {}
            WlpExpression::Meet(l, r) | WlpExpression::Join(l, r) => {
                l.collect_indices(into);
                r.collect_indices(into);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_matches_hand_computation() {
        // max(min(x1,x2), min(x2,x3)) at (1,9,4) = max(1,4) = 4
        let e = WlpExpression::join(
            WlpExpression::meet(WlpExpression::projection(1), WlpExpression::projection(2)),
            WlpExpression::meet(WlpExpression::projection(2), WlpExpression::projection(3)),
        );
        assert_eq!(e.eval(&[1.0, 9.0, 4.0]).unwrap(), 4.0);
    }

    #[test]
    fn constant_and_projection() {
        let c = WlpExpression::constant(2.5);
        assert_eq!(c.eval(&[7.0]).unwrap(), 2.5);
        let p = WlpExpression::projection(2);
        assert_eq!(p.eval(&[3.0, 8.0]).unwrap(), 8.0);
    }

    #[test]
    fn projection_out_of_range_errors() {
        let p = WlpExpression::projection(3);
        assert!(matches!(
            p.eval(&[1.0, 2.0]),
            Err(Error::BadProjection { index: 3, arity: 2 })
        ));
        let z = WlpExpression::projection(0);
        assert!(z.eval(&[1.0]).is_err());
    }

    #[test]
    fn arity_is_max_index() {
        let e = WlpExpression::meet(WlpExpression::projection(1), WlpExpression::projection(4));
        assert_eq!(e.arity(), 4);
        assert_eq!(WlpExpression::constant(1.0).arity(), 0);
    }

    #[test]
    fn constants_checked_against_domain() {
        let domain = LatticeDomain::new(0.0, 10.0).unwrap();
        let ok = WlpExpression::join(WlpExpression::constant(2.0), WlpExpression::projection(1));
        assert!(ok.check_constants(&domain).is_ok());
        let bad = WlpExpression::meet(WlpExpression::constant(12.0), WlpExpression::projection(1));
        assert!(bad.check_constants(&domain).is_err());
    }
}
