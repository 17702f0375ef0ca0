use crate::lattice::WlpExpression;

/// Render an expression in the sugar-free grammar (`&`, `|`, parentheses).
/// Parenthesization preserves the tree shape exactly, so parsing the output
/// reproduces a structurally identical expression.
pub fn format_expression(expr: &WlpExpression) -> String {
    let mut out = String::new();
    write_expr(&mut out, expr, 1);
    out
}

fn precedence(expr: &WlpExpression) -> u8 {
    match expr {
        WlpExpression::Join(..) => 1,
        WlpExpression::Meet(..) => 2,
        _ => 3,
    }
}

fn write_expr(out: &mut String, expr: &WlpExpression, min_prec: u8) {
    let prec = precedence(expr);
    let parens = prec < min_prec;
    if parens {
        out.push('(');
    }
    match expr {
        WlpExpression::Projection(k) => {
            out.push('x');
            out.push_str(&k.to_string());
        }
        WlpExpression::Constant(c) => out.push_str(&format_constant(*c)),
        WlpExpression::Join(l, r) => {
            // right operand at prec+1 keeps right-nested joins parenthesized.
            write_expr(out, l, 1);
            out.push_str(" | ");
            write_expr(out, r, 2);
        }
        WlpExpression::Meet(l, r) => {
            write_expr(out, l, 2);
            out.push_str(" & ");
            write_expr(out, r, 3);
        }
    }
    if parens {
        out.push(')');
    }
}

fn format_constant(c: f64) -> String {
    if c == f64::INFINITY {
        "inf".into()
    } else if c == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        // shortest round-trip decimal form; "2" for 2.0, "2.5" for 2.5.
        format!("{c}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_system;
    use crate::lattice::{LatticeDomain, WlpExpression as E};

    #[test]
    fn plain_forms() {
        assert_eq!(
            format_expression(&E::meet(E::projection(1), E::projection(2))),
            "x1 & x2"
        );
        assert_eq!(
            format_expression(&E::join(E::constant(2.0), E::projection(1))),
            "2 | x1"
        );
    }

    #[test]
    fn structure_preserving_parens() {
        let left = E::meet(E::meet(E::projection(1), E::projection(2)), E::projection(3));
        assert_eq!(format_expression(&left), "x1 & x2 & x3");
        let right = E::meet(E::projection(1), E::meet(E::projection(2), E::projection(3)));
        assert_eq!(format_expression(&right), "x1 & (x2 & x3)");
        let mixed = E::meet(E::join(E::projection(1), E::projection(2)), E::projection(3));
        assert_eq!(format_expression(&mixed), "(x1 | x2) & x3");
    }

    #[test]
    fn round_trips_structurally() {
        let domain = LatticeDomain::new(0.0, 10.0).unwrap();
        let cases = vec![
            E::projection(3),
            E::constant(0.25),
            E::join(
                E::meet(E::projection(1), E::constant(2.5)),
                E::meet(E::projection(2), E::join(E::projection(3), E::projection(1))),
            ),
            E::meet(E::projection(1), E::meet(E::projection(2), E::projection(3))),
        ];
        for e in cases {
            let text = format_expression(&e);
            let parsed = parse_system(&text, &domain).unwrap();
            assert_eq!(parsed.expr, e, "source: {text}");
        }
    }
}
