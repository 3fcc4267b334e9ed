//! Exact symbolic expressions.
//!
//! [`Expr`] is the immutable tree produced by the parser and returned by every
//! operation. Normalization maps a tree through the canonical [`Poly`] form and
//! back, so two normalized trees are structurally equal exactly when their
//! canonical forms agree.

mod calculus;
mod display;
mod eval;
mod grading;
mod linear;
mod parse;
mod poly;
mod symbol;
mod zero;

use std::collections::BTreeMap;
use std::ops;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

pub use calculus::{on_shell_derivative, total_s_derivative, Shell};
pub(crate) use calculus::total_derivative_poly;
pub use eval::EvalError;
pub(crate) use eval::powr;
pub use grading::{grade_velocities, VelocityError, VelocityIndex};
pub use linear::{linear_system_extract, ExtractError, LinearSystem};
pub use parse::{parse_expression, ParseError};
pub use poly::{Atom, Coeff, Exponent, Func, Monomial, Poly};
pub use symbol::{Symbol, SymbolError, SymbolKind, SymbolTable};
pub use zero::{ZeroError, ZeroTest};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Rational(Coeff),
    Symbol(Symbol),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Power(Box<Expr>, Exponent),
    Func(Func, Box<Expr>),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExprError {
    #[error("geodesic context required: {0} depends on velocities")]
    MissingGeodesicContext(String),
    #[error("geodesic context has {got} accelerations, expected {expected}")]
    GeodesicContextSize { expected: usize, got: usize },
}

impl Expr {
    pub fn zero() -> Expr {
        Expr::int(0)
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn int(n: i64) -> Expr {
        Expr::Rational(Coeff::from_integer(BigInt::from(n)))
    }

    pub fn rational(n: i64, d: i64) -> Expr {
        Expr::Rational(Coeff::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn sym(s: &Symbol) -> Expr {
        Expr::Symbol(s.clone())
    }

    pub fn func(f: Func, arg: Expr) -> Expr {
        Expr::Func(f, Box::new(arg))
    }

    pub fn pow(self, e: i64) -> Expr {
        Expr::Power(Box::new(self), Exponent::from_integer(e))
    }

    pub fn pow_rational(self, e: Exponent) -> Expr {
        Expr::Power(Box::new(self), e)
    }

    /// Canonical polynomial form of this tree.
    pub fn to_poly(&self) -> Poly {
        match self {
            Expr::Rational(c) => Poly::constant(c.clone()),
            Expr::Symbol(s) => Poly::symbol(s),
            Expr::Sum(items) => {
                let mut acc = Poly::zero();
                for item in items {
                    acc += &item.to_poly();
                }
                acc
            }
            Expr::Product(items) => {
                let mut acc = Poly::one();
                for item in items {
                    acc = &acc * &item.to_poly();
                    if acc.is_zero() {
                        break;
                    }
                }
                acc
            }
            Expr::Power(base, e) => base.to_poly().pow(*e),
            Expr::Func(f, arg) => Poly::func(*f, arg.to_poly()),
        }
    }

    pub fn normalize(&self) -> Expr {
        self.to_poly().to_expr()
    }

    pub fn as_rational(&self) -> Option<Coeff> {
        self.to_poly().as_constant()
    }

    /// Normalized partial derivative.
    pub fn differentiate(&self, v: &Symbol) -> Expr {
        self.to_poly().diff(v).to_expr()
    }

    /// Simultaneous substitution followed by normalization.
    pub fn substitute(&self, bindings: &BTreeMap<Symbol, Expr>) -> Expr {
        let map: BTreeMap<Symbol, Poly> =
            bindings.iter().map(|(k, v)| (k.clone(), v.to_poly())).collect();
        self.to_poly().substitute(&map).to_expr()
    }

    pub fn contains(&self, v: &Symbol) -> bool {
        match self {
            Expr::Rational(_) => false,
            Expr::Symbol(s) => s == v,
            Expr::Sum(xs) | Expr::Product(xs) => xs.iter().any(|x| x.contains(v)),
            Expr::Power(b, _) | Expr::Func(_, b) => b.contains(v),
        }
    }

    /// Symbols occurring anywhere in the tree, before any cancellation.
    pub fn free_symbols(&self) -> std::collections::BTreeSet<Symbol> {
        let mut out = std::collections::BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut std::collections::BTreeSet<Symbol>) {
        match self {
            Expr::Rational(_) => {}
            Expr::Symbol(s) => {
                out.insert(s.clone());
            }
            Expr::Sum(xs) | Expr::Product(xs) => xs.iter().for_each(|x| x.collect_symbols(out)),
            Expr::Power(b, _) | Expr::Func(_, b) => b.collect_symbols(out),
        }
    }

    pub fn depends_on_velocity(&self) -> bool {
        self.to_poly().symbols().iter().any(Symbol::is_velocity)
    }
}

impl From<&Symbol> for Expr {
    fn from(s: &Symbol) -> Self {
        Expr::sym(s)
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::int(n)
    }
}

impl Poly {
    /// Canonical tree for this polynomial; `to_expr().to_poly()` returns `self`.
    pub fn to_expr(&self) -> Expr {
        let mut terms: Vec<Expr> = self.terms().map(|(m, c)| term_expr(c, m)).collect();
        match terms.len() {
            0 => Expr::zero(),
            1 => terms.pop().unwrap(),
            _ => Expr::Sum(terms),
        }
    }
}

fn atom_expr(atom: &Atom) -> Expr {
    match atom {
        Atom::Sym(s) => Expr::Symbol(s.clone()),
        Atom::Func(f, arg) => Expr::Func(*f, Box::new(arg.to_expr())),
        Atom::Pow(base) => base.to_expr(),
    }
}

fn term_expr(c: &Coeff, m: &Monomial) -> Expr {
    let mut factors = Vec::with_capacity(m.factors().len() + 1);
    if !c.is_one() || m.is_one() {
        factors.push(Expr::Rational(c.clone()));
    }
    for (atom, e) in m.factors() {
        let base = atom_expr(atom);
        if e.is_one() && !matches!(atom, Atom::Pow(_)) {
            factors.push(base);
        } else {
            factors.push(Expr::Power(Box::new(base), *e));
        }
    }
    if factors.len() == 1 {
        factors.pop().unwrap()
    } else {
        Expr::Product(factors)
    }
}

impl ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::Sum(vec![self, rhs])
    }
}

impl ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::Sum(vec![self, -rhs])
    }
}

impl ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::Product(vec![self, rhs])
    }
}

impl ops::Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        Expr::Product(vec![self, rhs.pow(-1)])
    }
}

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        match self {
            Expr::Rational(c) => Expr::Rational(-c),
            other => Expr::Product(vec![Expr::int(-1), other]),
        }
    }
}
