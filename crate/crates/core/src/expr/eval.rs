use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use thiserror::Error;

use super::{Expr, Func, Symbol};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("symbol `{0}` has no value")]
    Unassigned(String),
    #[error("domain error: {0}")]
    Domain(String),
}

impl Expr {
    /// Floating-point value under `assignment`.
    pub fn eval_at(&self, assignment: &BTreeMap<Symbol, f64>) -> Result<f64, EvalError> {
        self.eval_with(&|s| assignment.get(s).copied())
    }

    pub fn eval_with(&self, lookup: &dyn Fn(&Symbol) -> Option<f64>) -> Result<f64, EvalError> {
        let v = match self {
            Expr::Rational(c) => c.to_f64().unwrap_or(f64::NAN),
            Expr::Symbol(s) => lookup(s).ok_or_else(|| EvalError::Unassigned(s.name().to_string()))?,
            Expr::Sum(xs) => {
                let mut acc = 0.0;
                for x in xs {
                    acc += x.eval_with(lookup)?;
                }
                acc
            }
            Expr::Product(xs) => {
                let mut acc = 1.0;
                for x in xs {
                    acc *= x.eval_with(lookup)?;
                }
                acc
            }
            Expr::Power(b, e) => {
                let base = b.eval_with(lookup)?;
                powr(base, *e.numer(), *e.denom())?
            }
            Expr::Func(f, arg) => {
                let x = arg.eval_with(lookup)?;
                if *f == Func::Log && x <= 0.0 {
                    return Err(EvalError::Domain(format!("log of non-positive value {x}")));
                }
                f.apply(x)
            }
        };
        if v.is_nan() {
            return Err(EvalError::Domain(format!("undefined value in {self}")));
        }
        Ok(v)
    }
}

pub(crate) fn powr(base: f64, num: i64, den: i64) -> Result<f64, EvalError> {
    if den == 1 {
        if base == 0.0 && num < 0 {
            return Err(EvalError::Domain("division by zero".into()));
        }
        return Ok(base.powi(num as i32));
    }
    if base < 0.0 {
        if den % 2 == 1 {
            let r = (-base).powf(num as f64 / den as f64);
            return Ok(if num % 2 == 0 { r } else { -r });
        }
        return Err(EvalError::Domain(format!("even root of negative value {base}")));
    }
    if base == 0.0 && num < 0 {
        return Err(EvalError::Domain("division by zero".into()));
    }
    Ok(base.powf(num as f64 / den as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_expression, SymbolTable};

    #[test]
    fn evaluates_examples() {
        let t = SymbolTable::new(&["t", "x", "y", "z"], &["a"]).unwrap();
        let mut m = BTreeMap::new();
        m.insert(t.coord(1).clone(), 0.0);
        m.insert(t.params()[0].clone(), 1.0);
        let e = parse_expression("cosh(x/a)^2", &t).unwrap();
        assert_eq!(e.eval_at(&m).unwrap(), 1.0);

        let mut m = BTreeMap::new();
        m.insert(t.s().clone(), 2.0);
        m.insert(t.velocity(1).clone(), 3.0);
        m.insert(t.coord(1).clone(), 1.0);
        let e = parse_expression("s*xdot - x", &t).unwrap();
        assert_eq!(e.eval_at(&m).unwrap(), 5.0);

        let l = parse_expression("cosh(x/a)^2*tdot^2 - xdot^2 - ydot^2 - zdot^2", &t).unwrap();
        let mut m = BTreeMap::new();
        for v in t.velocities() {
            m.insert(v.clone(), 0.0);
        }
        m.insert(t.velocity(0).clone(), 1.0);
        m.insert(t.coord(1).clone(), 0.0);
        m.insert(t.params()[0].clone(), 1.0);
        assert_eq!(l.eval_at(&m).unwrap(), 1.0);
    }

    #[test]
    fn evaluation_errors() {
        let t = SymbolTable::new(&["x"], &[] as &[&str]).unwrap();
        let e = parse_expression("log(x)", &t).unwrap();
        assert!(matches!(e.eval_at(&BTreeMap::new()), Err(EvalError::Unassigned(_))));
        let mut m = BTreeMap::new();
        m.insert(t.coord(0).clone(), -1.0);
        assert!(matches!(e.eval_at(&m), Err(EvalError::Domain(_))));
    }
}
