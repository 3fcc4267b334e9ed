use num_traits::ToPrimitive;

use crate::expr::{EvalError, Expr, Func, Symbol};

#[derive(Clone, Debug)]
enum Node {
    Const(f64),
    Slot(usize),
    Sum(Vec<Node>),
    Product(Vec<Node>),
    Powi(Box<Node>, i32),
    Powr(Box<Node>, i64, i64),
    Func(Func, Box<Node>),
}

/// An expression with its symbols resolved to slots of a state vector.
///
/// Evaluation never fails; domain violations come back as NaN.
#[derive(Clone, Debug)]
pub(crate) struct Compiled(Node);

impl Compiled {
    /// `resolve` maps a symbol to a slot index or a bound constant.
    pub(crate) fn new(e: &Expr, resolve: &dyn Fn(&Symbol) -> Option<Binding>) -> Result<Compiled, EvalError> {
        Ok(Compiled(build(e, resolve)?))
    }

    pub(crate) fn eval(&self, state: &[f64]) -> f64 {
        run(&self.0, state)
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) enum Binding {
    Slot(usize),
    Value(f64),
}

fn build(e: &Expr, resolve: &dyn Fn(&Symbol) -> Option<Binding>) -> Result<Node, EvalError> {
    Ok(match e {
        Expr::Rational(c) => Node::Const(c.to_f64().unwrap_or(f64::NAN)),
        Expr::Symbol(s) => match resolve(s) {
            Some(Binding::Slot(i)) => Node::Slot(i),
            Some(Binding::Value(v)) => Node::Const(v),
            None => return Err(EvalError::Unassigned(s.name().to_string())),
        },
        Expr::Sum(xs) => Node::Sum(xs.iter().map(|x| build(x, resolve)).collect::<Result<_, _>>()?),
        Expr::Product(xs) => Node::Product(xs.iter().map(|x| build(x, resolve)).collect::<Result<_, _>>()?),
        Expr::Power(b, p) => {
            let base = Box::new(build(b, resolve)?);
            if *p.denom() == 1 {
                Node::Powi(base, *p.numer() as i32)
            } else {
                Node::Powr(base, *p.numer(), *p.denom())
            }
        }
        Expr::Func(f, arg) => Node::Func(*f, Box::new(build(arg, resolve)?)),
    })
}

fn run(n: &Node, state: &[f64]) -> f64 {
    match n {
        Node::Const(c) => *c,
        Node::Slot(i) => state[*i],
        Node::Sum(xs) => xs.iter().map(|x| run(x, state)).sum(),
        Node::Product(xs) => xs.iter().map(|x| run(x, state)).product(),
        Node::Powi(b, k) => run(b, state).powi(*k),
        Node::Powr(b, p, q) => crate::expr::powr(run(b, state), *p, *q).unwrap_or(f64::NAN),
        Node::Func(Func::Log, a) => {
            let x = run(a, state);
            if x > 0.0 {
                x.ln()
            } else {
                f64::NAN
            }
        }
        Node::Func(f, a) => f.apply(run(a, state)),
    }
}
