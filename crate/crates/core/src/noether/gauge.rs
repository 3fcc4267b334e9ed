use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use super::residual::{gauge_source, generator_polys, residual_polys};
use super::Generator;
use crate::expr::{
    grade_velocities, Atom, Coeff, Exponent, Expr, Func, Monomial, Poly, Symbol, SymbolTable, VelocityError,
    VelocityIndex, ZeroError,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GaugeError {
    /// Velocity-degree ≥ 2 part of `XL + L Dξ` that no gauge can absorb.
    #[error("no gauge exists: quadratic velocity terms remain")]
    QuadraticObstruction(BTreeMap<VelocityIndex, Expr>),
    #[error("no gauge exists: integrability fails ({0})")]
    CurlObstruction(String),
    #[error(transparent)]
    NonPolynomialVelocity(#[from] VelocityError),
    #[error("cannot integrate `{0}`")]
    Unintegrable(String),
    #[error("invalid generator: {0}")]
    Invalid(String),
    #[error(transparent)]
    Undetermined(#[from] ZeroError),
}

/// Finds `A(s, x)` with `DA = XL + L Dξ`, normalized to vanish at the
/// origin when it is defined there.
pub fn derive_gauge(l: &Expr, g: &Generator, table: &SymbolTable) -> Result<Expr, GaugeError> {
    let (xi, eta) = generator_polys(g);
    if eta.len() != table.dim() {
        return Err(GaugeError::Invalid(format!(
            "generator has {} components, expected {}",
            eta.len(),
            table.dim()
        )));
    }
    if std::iter::once(&xi).chain(&eta).any(|c| c.contains_any(&|s| s.is_velocity())) {
        return Err(GaugeError::Invalid("components must not depend on velocities".into()));
    }
    let l = l.to_poly();
    let source = gauge_source(&l, &xi, &eta, table);
    let graded = grade_velocities(&source)?;

    let mut obstruction = BTreeMap::new();
    for (k, c) in &graded {
        if k.degree() >= 2 && !c.is_identically_zero()? {
            obstruction.insert(k.clone(), c.to_expr());
        }
    }
    if !obstruction.is_empty() {
        return Err(GaugeError::QuadraticObstruction(obstruction));
    }

    let n = table.dim();
    let f0 = graded.get(&VelocityIndex::constant()).cloned().unwrap_or_default();
    let f: Vec<Poly> = (0..n)
        .map(|a| {
            let key = VelocityIndex::from_powers(vec![(table.velocity(a).clone(), 1)]);
            graded.get(&key).cloned().unwrap_or_default()
        })
        .collect();

    for a in 0..n {
        let xa = table.coord(a);
        for b in a + 1..n {
            let curl = &f[a].diff(table.coord(b)) - &f[b].diff(xa);
            if !curl.is_identically_zero()? {
                return Err(GaugeError::CurlObstruction(format!(
                    "d f_{xa}/d {} - d f_{}/d {xa} = {curl}",
                    table.coord(b),
                    table.coord(b)
                )));
            }
        }
        let curl = &f[a].diff(table.s()) - &f0.diff(xa);
        if !curl.is_identically_zero()? {
            return Err(GaugeError::CurlObstruction(format!("d f_{xa}/ds - d f_0/d {xa} = {curl}")));
        }
    }

    let mut gauge = Poly::zero();
    for (a, fa) in f.iter().enumerate() {
        let x = table.coord(a);
        let rest = fa - &gauge.diff(x);
        gauge += &integrate(&rest, x)?;
    }
    let rest = &f0 - &gauge.diff(table.s());
    gauge += &integrate(&rest, table.s())?;

    let vars: Vec<Symbol> = std::iter::once(table.s().clone()).chain(table.coords().iter().cloned()).collect();
    if let Some(c) = value_at(&gauge, &vars) {
        gauge = &gauge - &c;
    }

    if !residual_polys(&l, &xi, &eta, &gauge, table).is_identically_zero()? {
        return Err(GaugeError::Unintegrable(source.to_string()));
    }
    Ok(gauge.to_expr())
}

/// Antiderivative in `v` for sums of terms `v^k * f(αv + β)` with `f` one
/// of sin, cos, sinh, cosh, exp and `k` a natural number, or plain powers
/// of `v`.
pub(crate) fn integrate(p: &Poly, v: &Symbol) -> Result<Poly, GaugeError> {
    let mut out = Poly::zero();
    for (m, c) in p.terms() {
        out += &integrate_term(c, m, v)?;
    }
    Ok(out)
}

fn integrate_term(c: &Coeff, m: &Monomial, v: &Symbol) -> Result<Poly, GaugeError> {
    let fail = || GaugeError::Unintegrable(Poly::term(c.clone(), m.clone()).to_string());
    let (dep, indep) = m.split(|a| a.contains(v));
    let coeff = Poly::term(c.clone(), indep);
    let vp = Poly::symbol(v);
    let mut power = Exponent::zero();
    let mut func: Option<(Func, Poly)> = None;
    for (atom, e) in dep.factors() {
        match atom {
            Atom::Sym(_) => power = *e,
            Atom::Func(f, arg) if e.is_one() && func.is_none() => func = Some((*f, (**arg).clone())),
            _ => return Err(fail()),
        }
    }
    let Some((f, arg)) = func else {
        if power == -Exponent::one() {
            return Ok(&coeff * &Poly::func(Func::Log, vp));
        }
        let k = power + Exponent::one();
        let inv = Coeff::new((*k.denom()).into(), (*k.numer()).into());
        return Ok(&coeff.scale(&inv) * &vp.pow(k));
    };
    let alpha = arg.diff(v);
    if alpha.is_zero() || alpha.contains(v) || (&arg - &(&alpha * &vp)).contains(v) {
        return Err(fail());
    }
    if !power.is_integer() || *power.numer() < 0 {
        return Err(fail());
    }
    let inv_alpha = alpha.pow(-Exponent::one());
    let g = match f {
        Func::Sin => -Poly::func(Func::Cos, arg),
        Func::Cos => Poly::func(Func::Sin, arg),
        Func::Sinh => Poly::func(Func::Cosh, arg),
        Func::Cosh => Poly::func(Func::Sinh, arg),
        Func::Exp => Poly::func(Func::Exp, arg),
        _ => return Err(fail()),
    };
    let g = &g * &inv_alpha;
    let k = *power.numer() as u32;
    let head = &vp.pow_int(k) * &g;
    if k == 0 {
        return Ok(&coeff * &head);
    }
    // ∫ v^k G' = v^k G - k ∫ v^(k-1) G
    let lower = (&vp.pow_int(k - 1) * &g).scale(&Coeff::from_integer(k.into()));
    Ok(&coeff * &(&head - &integrate(&lower, v)?))
}

/// `p` with every symbol in `vars` set to zero, or `None` where that is
/// undefined.
pub(crate) fn value_at(p: &Poly, vars: &[Symbol]) -> Option<Poly> {
    let mut out = Poly::zero();
    for (m, c) in p.terms() {
        let mut term = Poly::constant(c.clone());
        for (atom, e) in m.factors() {
            let factor = match atom {
                Atom::Sym(s) if vars.contains(s) => {
                    if *e < Exponent::zero() {
                        return None;
                    }
                    Poly::zero()
                }
                Atom::Sym(_) => Poly::from_monomial(Monomial::single(atom.clone(), *e)),
                Atom::Func(f, arg) => {
                    let a0 = value_at(arg, vars)?;
                    if *f == Func::Log && a0.is_zero() {
                        return None;
                    }
                    let base = Poly::func(*f, a0);
                    if base.is_zero() && *e < Exponent::zero() {
                        return None;
                    }
                    base.pow(*e)
                }
                Atom::Pow(base) => {
                    let b0 = value_at(base, vars)?;
                    if b0.is_zero() && *e < Exponent::zero() {
                        return None;
                    }
                    b0.pow(*e)
                }
            };
            term = &term * &factor;
        }
        out += &term;
    }
    Some(out)
}
