use super::{ConservedQuantity, Generator, NoetherError, NoetherSymmetry};
use crate::expr::{total_derivative_poly, Expr, Poly, SymbolTable};

pub(crate) fn generator_polys(g: &Generator) -> (Poly, Vec<Poly>) {
    (g.xi.to_poly(), g.eta.iter().map(Expr::to_poly).collect())
}

fn d(p: &Poly, table: &SymbolTable) -> Poly {
    total_derivative_poly(p, table, None)
}

pub(crate) fn prolongation_polys(xi: &Poly, eta: &[Poly], table: &SymbolTable) -> Vec<Poly> {
    let dxi = d(xi, table);
    eta.iter()
        .zip(table.velocities())
        .map(|(e, v)| &d(e, table) - &(&Poly::symbol(v) * &dxi))
        .collect()
}

/// `η̇^a = Dη^a - ẋ^a Dξ`.
pub fn prolongation(g: &Generator, table: &SymbolTable) -> Vec<Expr> {
    let (xi, eta) = generator_polys(g);
    prolongation_polys(&xi, &eta, table).iter().map(Poly::to_expr).collect()
}

/// `XL + L Dξ`, the part of the Noether condition the gauge must match.
pub(crate) fn gauge_source(l: &Poly, xi: &Poly, eta: &[Poly], table: &SymbolTable) -> Poly {
    let mut r = Poly::zero();
    if !xi.is_zero() {
        r += &(xi * &l.diff(table.s()));
        r += &(l * &d(xi, table));
    }
    let etadot = prolongation_polys(xi, eta, table);
    for (a, (e, ed)) in eta.iter().zip(&etadot).enumerate() {
        if !e.is_zero() {
            r += &(e * &l.diff(table.coord(a)));
        }
        if !ed.is_zero() {
            r += &(ed * &l.diff(table.velocity(a)));
        }
    }
    r
}

pub(crate) fn residual_polys(l: &Poly, xi: &Poly, eta: &[Poly], gauge: &Poly, table: &SymbolTable) -> Poly {
    &gauge_source(l, xi, eta, table) - &d(gauge, table)
}

/// `XL + L Dξ - DA`, normalized.
pub fn noether_residual(l: &Expr, g: &Generator, gauge: &Expr, table: &SymbolTable) -> Expr {
    let (xi, eta) = generator_polys(g);
    residual_polys(&l.to_poly(), &xi, &eta, &gauge.to_poly(), table).to_expr()
}

pub(crate) fn conserved_poly(l: &Poly, xi: &Poly, eta: &[Poly], gauge: &Poly, table: &SymbolTable) -> Poly {
    let momenta: Vec<Poly> = table.velocities().iter().map(|v| l.diff(v)).collect();
    let mut t = gauge.clone();
    if !xi.is_zero() {
        let mut h = -l.clone();
        for (v, p) in table.velocities().iter().zip(&momenta) {
            h += &(&Poly::symbol(v) * p);
        }
        t += &(xi * &h);
    }
    for (e, p) in eta.iter().zip(&momenta) {
        if !e.is_zero() {
            t = &t - &(e * p);
        }
    }
    t
}

/// `T = ξ(ẋ^a ∂L/∂ẋ^a - L) - η^a ∂L/∂ẋ^a + A` for a verified symmetry.
pub fn conserved_quantity(
    l: &Expr,
    sym: &NoetherSymmetry,
    source: usize,
    table: &SymbolTable,
) -> Result<ConservedQuantity, NoetherError> {
    if !sym.residual.is_zero()? {
        return Err(NoetherError::Precondition(format!(
            "generator {} is not a verified symmetry",
            sym.gen
        )));
    }
    let (xi, eta) = generator_polys(&sym.gen);
    let t = conserved_poly(&l.to_poly(), &xi, &eta, &sym.gauge.to_poly(), table);
    Ok(ConservedQuantity {
        label: format!("T{source}"),
        expr: t.to_expr(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expression;
    use crate::geometry::{lagrangian_of, Metric};
    use crate::noether::SymmetryClass;

    fn euclid3() -> Metric {
        Metric::parse(&["x", "y", "z"], &[], &[("x", "x", "1"), ("y", "y", "1"), ("z", "z", "1")]).unwrap()
    }

    fn gen(m: &Metric, xi: &str, eta: &[&str]) -> Generator {
        let p = |s: &str| parse_expression(s, m.table()).unwrap();
        Generator::new(p(xi), eta.iter().map(|e| p(e)).collect())
    }

    #[test]
    fn prolongation_examples() {
        let m = Metric::parse(&["t", "x", "y", "z"], &["a"], &[("t", "t", "1"), ("x", "x", "-1"), ("y", "y", "-1"), ("z", "z", "-1")]).unwrap();
        let t = m.table();
        let g = gen(&m, "0", &["0", "0", "s", "0"]);
        assert_eq!(prolongation(&g, t)[2], Expr::one());
        let g = Generator::translation(4);
        assert!(prolongation(&g, t).iter().all(|e| *e == Expr::zero()));
        let g = gen(&m, "s", &["0", "0", "0", "0"]);
        for (a, e) in prolongation(&g, t).iter().enumerate() {
            assert_eq!(*e, (-Expr::sym(t.velocity(a))).normalize());
        }
    }

    #[test]
    fn residual_examples() {
        let m = euclid3();
        let t = m.table();
        let l = lagrangian_of(&m);
        let p = |s: &str| parse_expression(s, t).unwrap();
        let r = noether_residual(&l, &gen(&m, "0", &["1", "0", "0"]), &Expr::zero(), t);
        assert_eq!(r, Expr::zero());
        let r = noether_residual(&l, &gen(&m, "0", &["s", "0", "0"]), &p("2*x"), t);
        assert_eq!(r, Expr::zero());
        let r = noether_residual(&l, &gen(&m, "s", &["0", "0", "0"]), &p("x*y + s"), t);
        let grades = r.velocity_coefficients().unwrap();
        let quadratic: Vec<_> = grades.iter().filter(|(k, _)| k.degree() == 2).collect();
        assert_eq!(quadratic.len(), 3);
        assert!(quadratic.iter().all(|(_, v)| **v == Expr::int(-1)));
    }

    #[test]
    fn conserved_examples() {
        let m = euclid3();
        let t = m.table();
        let l = lagrangian_of(&m);
        let p = |s: &str| parse_expression(s, t).unwrap().normalize();
        let sym = |g: Generator, a: Expr| NoetherSymmetry {
            residual: noether_residual(&l, &g, &a, t),
            gen: g,
            gauge: a,
            class: SymmetryClass::New,
        };
        let q = conserved_quantity(&l, &sym(Generator::translation(3), Expr::zero()), 6, t).unwrap();
        assert_eq!(q.expr, l);
        assert_eq!(q.label, "T6");
        let q = conserved_quantity(&l, &sym(gen(&m, "0", &["s", "0", "0"]), p("2*x")), 9, t).unwrap();
        assert_eq!(q.expr, p("-2*(s*xdot - x)"));
        let x7 = gen(&m, "s^2", &["s*x", "s*y", "s*z"]);
        let q = conserved_quantity(&l, &sym(x7, p("x^2 + y^2 + z^2")), 7, t).unwrap();
        assert_eq!(
            q.expr,
            p("s^2*(xdot^2 + ydot^2 + zdot^2) - 2*s*(x*xdot + y*ydot + z*zdot) + x^2 + y^2 + z^2")
        );
        let bad = sym(gen(&m, "s", &["0", "0", "0"]), Expr::zero());
        assert!(conserved_quantity(&l, &bad, 0, t).is_err());
    }
}
