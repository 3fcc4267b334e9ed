use super::{Expr, ExprError, Poly, SymbolTable};

/// Whether accelerations stay symbolic or are replaced by the geodesic
/// right-hand sides `xddot^a = rhs[a]`.
#[derive(Clone, Copy, Debug)]
pub enum Shell<'a> {
    Off,
    On(&'a [Expr]),
}

/// `d/ds` along a curve: `∂/∂s + xdot^a ∂/∂x^a + xddot^a ∂/∂xdot^a`.
pub fn total_s_derivative(e: &Expr, table: &SymbolTable, shell: Shell<'_>) -> Result<Expr, ExprError> {
    let accel: Vec<Poly> = match shell {
        Shell::Off => table.accels().iter().map(Poly::symbol).collect(),
        Shell::On(rhs) => {
            if rhs.len() != table.dim() {
                return Err(ExprError::GeodesicContextSize {
                    expected: table.dim(),
                    got: rhs.len(),
                });
            }
            rhs.iter().map(Expr::to_poly).collect()
        }
    };
    Ok(total_derivative_poly(&e.to_poly(), table, Some(&accel)).to_expr())
}

/// On-shell derivative that refuses to proceed without a geodesic context
/// when the expression depends on velocities.
pub fn on_shell_derivative(
    e: &Expr,
    table: &SymbolTable,
    rhs: Option<&[Expr]>,
) -> Result<Expr, ExprError> {
    match rhs {
        Some(rhs) => total_s_derivative(e, table, Shell::On(rhs)),
        None if e.depends_on_velocity() => Err(ExprError::MissingGeodesicContext(e.to_string())),
        None => total_s_derivative(e, table, Shell::Off),
    }
}

/// Total derivative on canonical form. With `accel = None` the velocity
/// terms are skipped, which is the operator used on velocity-free functions.
pub(crate) fn total_derivative_poly(p: &Poly, table: &SymbolTable, accel: Option<&[Poly]>) -> Poly {
    let mut out = p.diff(table.s());
    for (x, v) in table.coords().iter().zip(table.velocities()) {
        let d = p.diff(x);
        if !d.is_zero() {
            out += &(&d * &Poly::symbol(v));
        }
    }
    if let Some(acc) = accel {
        for (v, a) in table.velocities().iter().zip(acc) {
            let d = p.diff(v);
            if !d.is_zero() {
                out += &(&d * a);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expression;

    #[test]
    fn total_derivative_examples() {
        let t = SymbolTable::new(&["x", "y", "z"], &[] as &[&str]).unwrap();
        let p = |s: &str| parse_expression(s, &t).unwrap();
        let d = total_s_derivative(&p("2*x"), &t, Shell::Off).unwrap();
        assert_eq!(d, p("2*xdot").normalize());
        let d = total_s_derivative(&p("s"), &t, Shell::Off).unwrap();
        assert_eq!(d, Expr::one());
        let flat = vec![Expr::zero(), Expr::zero(), Expr::zero()];
        let d = total_s_derivative(&p("s*xdot - x"), &t, Shell::On(&flat)).unwrap();
        assert_eq!(d, Expr::zero());
        let d = total_s_derivative(&p("s*xdot - x"), &t, Shell::Off).unwrap();
        assert_eq!(d, p("s*xddot").normalize());
    }

    #[test]
    fn missing_context_is_an_error() {
        let t = SymbolTable::new(&["x"], &[] as &[&str]).unwrap();
        let e = parse_expression("xdot^2", &t).unwrap();
        assert!(matches!(
            on_shell_derivative(&e, &t, None),
            Err(ExprError::MissingGeodesicContext(_))
        ));
        assert!(matches!(
            total_s_derivative(&e, &t, Shell::On(&[])),
            Err(ExprError::GeodesicContextSize { .. })
        ));
    }
}
