use std::fmt::{self, Write};

use num_traits::{One, Signed};

use super::{Coeff, Expr};

#[derive(Clone, Copy, PartialEq)]
enum Ctx {
    Top,
    Factor,
    Base,
}

fn write_rational(out: &mut String, c: &Coeff, ctx: Ctx) {
    let needs_parens = match ctx {
        Ctx::Top => false,
        Ctx::Factor => c.is_negative() || !c.is_integer(),
        Ctx::Base => c.is_negative() || !c.is_integer(),
    };
    if needs_parens {
        out.push('(');
    }
    if c.is_integer() {
        write!(out, "{}", c.numer()).unwrap();
    } else {
        write!(out, "{}/{}", c.numer(), c.denom()).unwrap();
    }
    if needs_parens {
        out.push(')');
    }
}

fn is_negative_term(e: &Expr) -> bool {
    match e {
        Expr::Rational(c) => c.is_negative(),
        Expr::Product(xs) => matches!(xs.first(), Some(Expr::Rational(c)) if c.is_negative()),
        _ => false,
    }
}

fn negate_term(e: &Expr) -> Expr {
    match e {
        Expr::Rational(c) => Expr::Rational(-c),
        Expr::Product(xs) => {
            let Some(Expr::Rational(c)) = xs.first() else {
                unreachable!()
            };
            let c = -c;
            let mut rest: Vec<Expr> = xs[1..].to_vec();
            if !c.is_one() {
                rest.insert(0, Expr::Rational(c));
            }
            match rest.len() {
                0 => Expr::one(),
                1 => rest.pop().unwrap(),
                _ => Expr::Product(rest),
            }
        }
        other => other.clone(),
    }
}

fn write_expr(out: &mut String, e: &Expr, ctx: Ctx) {
    match e {
        Expr::Rational(c) => write_rational(out, c, ctx),
        Expr::Symbol(s) => out.push_str(s.name()),
        Expr::Func(f, arg) => {
            out.push_str(f.name());
            out.push('(');
            write_expr(out, arg, Ctx::Top);
            out.push(')');
        }
        Expr::Power(_, exp) if exp.is_negative() => {
            let wrap = ctx != Ctx::Top;
            if wrap {
                out.push('(');
            }
            write_product(out, std::slice::from_ref(e));
            if wrap {
                out.push(')');
            }
        }
        Expr::Power(base, exp) => {
            write_expr(out, base, Ctx::Base);
            out.push('^');
            if exp.is_integer() && !exp.is_negative() {
                write!(out, "{}", exp.numer()).unwrap();
            } else if exp.is_integer() {
                write!(out, "({})", exp.numer()).unwrap();
            } else {
                write!(out, "({}/{})", exp.numer(), exp.denom()).unwrap();
            }
        }
        Expr::Sum(items) => {
            if items.is_empty() {
                out.push('0');
                return;
            }
            let wrap = ctx != Ctx::Top;
            if wrap {
                out.push('(');
            }
            for (i, item) in items.iter().enumerate() {
                if i == 0 {
                    write_expr(out, item, Ctx::Top);
                } else if is_negative_term(item) {
                    out.push_str(" - ");
                    write_expr(out, &negate_term(item), Ctx::Top);
                } else {
                    out.push_str(" + ");
                    write_expr(out, item, Ctx::Top);
                }
            }
            if wrap {
                out.push(')');
            }
        }
        Expr::Product(items) => {
            if items.is_empty() {
                out.push('1');
                return;
            }
            let wrap = ctx != Ctx::Top;
            if wrap {
                out.push('(');
            }
            write_product(out, items);
            if wrap {
                out.push(')');
            }
        }
    }
}

fn write_product(out: &mut String, items: &[Expr]) {
    let (coef, rest) = match items.first() {
        Some(Expr::Rational(c)) => (Some(c.clone()), &items[1..]),
        _ => (None, items),
    };
    let mut num: Vec<Expr> = Vec::new();
    let mut den: Vec<Expr> = Vec::new();
    for f in rest {
        match f {
            Expr::Power(b, e) if e.is_negative() => {
                let pe = -*e;
                if pe.is_one() {
                    den.push((**b).clone());
                } else {
                    den.push(Expr::Power(b.clone(), pe));
                }
            }
            other => num.push(other.clone()),
        }
    }
    let mut parts: Vec<String> = Vec::new();
    if let Some(c) = coef {
        let mut c = c;
        if c.is_negative() {
            out.push('-');
            c = -c;
        }
        if !c.is_one() || num.is_empty() {
            let mut s = String::new();
            write_rational(&mut s, &c, Ctx::Top);
            parts.push(s);
        }
    } else if num.is_empty() {
        parts.push("1".into());
    }
    for f in &num {
        let mut s = String::new();
        write_expr(&mut s, f, Ctx::Factor);
        parts.push(s);
    }
    out.push_str(&parts.join("*"));
    if !den.is_empty() {
        out.push('/');
        if den.len() == 1 {
            write_expr(out, &den[0], Ctx::Factor);
        } else {
            out.push('(');
            let ds: Vec<String> = den
                .iter()
                .map(|d| {
                    let mut s = String::new();
                    write_expr(&mut s, d, Ctx::Factor);
                    s
                })
                .collect();
            out.push_str(&ds.join("*"));
            out.push(')');
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_expr(&mut s, self, Ctx::Top);
        f.write_str(&s)
    }
}

impl fmt::Display for super::Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_expr(), f)
    }
}

#[cfg(test)]
mod tests {
    use crate::expr::{parse_expression, SymbolTable};

    #[test]
    fn prints_readably() {
        let t = SymbolTable::new(&["t", "x"], &["a"]).unwrap();
        let e = parse_expression("s*xdot - x", &t).unwrap().normalize();
        assert_eq!(e.to_string(), "s*xdot - x");
        let e = parse_expression("tanh(x/a)", &t).unwrap().normalize();
        assert_eq!(e.to_string(), "sinh(x/a)/cosh(x/a)");
        let e = parse_expression("-3/2*x^2/a", &t).unwrap().normalize();
        assert_eq!(e.to_string(), "-3/2*x^2/a");
    }
}
