//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?          (right associative)
//! primary := number | ident | ident '(' expr ')' | '(' expr ')'
//! ```
//! Exponents must reduce to an exact rational constant.

use num_bigint::BigInt;
use num_traits::{Pow, Zero};
use thiserror::Error;

use super::poly::{Coeff, Func};
use super::symbol::SymbolTable;
use super::Expr;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at column {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier `{name}` at column {pos}")]
    UnknownIdentifier { pos: usize, name: String },
    #[error("malformed rational `{text}` at column {pos}")]
    MalformedRational { pos: usize, text: String },
}

impl ParseError {
    /// 1-based column of the error.
    pub fn column(&self) -> usize {
        match self {
            ParseError::Syntax { pos, .. }
            | ParseError::UnknownIdentifier { pos, .. }
            | ParseError::MalformedRational { pos, .. } => *pos,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Coeff, bool),
    Ident(String),
    Op(char),
    End,
}

struct Lexer<'a> {
    src: &'a str,
    toks: Vec<(Tok, usize)>,
}

impl<'a> Lexer<'a> {
    fn run(src: &'a str) -> Result<Vec<(Tok, usize)>, ParseError> {
        let mut lx = Lexer { src, toks: Vec::new() };
        let bytes = src.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i] as char;
            if c.is_ascii_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() || c == '.' {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'.') {
                    // allow a sign right after an exponent marker
                    i += 1;
                    if i < bytes.len()
                        && (bytes[i - 1] == b'e' || bytes[i - 1] == b'E')
                        && (bytes[i] == b'-' || bytes[i] == b'+')
                    {
                        i += 1;
                    }
                }
                let text = &lx.src[start..i];
                let (value, integer) = parse_number(text).ok_or(ParseError::MalformedRational {
                    pos: start + 1,
                    text: text.to_string(),
                })?;
                lx.toks.push((Tok::Num(value, integer), start));
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                lx.toks.push((Tok::Ident(lx.src[start..i].to_string()), start));
            } else if "+-*/^()".contains(c) {
                lx.toks.push((Tok::Op(c), i));
                i += 1;
            } else {
                return Err(ParseError::Syntax {
                    pos: i + 1,
                    msg: format!("unexpected character `{c}`"),
                });
            }
        }
        lx.toks.push((Tok::End, src.len()));
        Ok(lx.toks)
    }
}

/// Integers, decimals and decimal scientific notation, all exact.
fn parse_number(text: &str) -> Option<(Coeff, bool)> {
    let (mantissa, exp) = match text.find(['e', 'E']) {
        Some(k) => (&text[..k], Some(&text[k + 1..])),
        None => (text, None),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(k) => (&mantissa[..k], &mantissa[k + 1..]),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let num: BigInt = digits.parse().ok()?;
    let mut value = Coeff::new(num, BigInt::from(10u32).pow(frac_part.len() as u32));
    let mut integer = frac_part.is_empty() && !mantissa.contains('.');
    if let Some(exp) = exp {
        let k: i32 = exp.parse().ok()?;
        let scale = Coeff::from_integer(BigInt::from(10u32).pow(k.unsigned_abs()));
        value = if k >= 0 { value * scale } else { value / scale };
        integer = false;
    }
    Some((value, integer))
}

struct Parser<'t> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    table: &'t SymbolTable,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn column(&self) -> usize {
        self.toks[self.pos].1 + 1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if *self.peek() == Tok::Op(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&format!("expected `{c}`")))
        }
    }

    fn unexpected(&self, msg: &str) -> ParseError {
        let found = match self.peek() {
            Tok::End => "end of input".to_string(),
            Tok::Num(..) => "number".to_string(),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Op(c) => format!("`{c}`"),
        };
        ParseError::Syntax {
            pos: self.column(),
            msg: format!("{msg}, found {found}"),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut terms = vec![self.term()?];
        loop {
            match self.peek() {
                Tok::Op('+') => {
                    self.bump();
                    terms.push(self.term()?);
                }
                Tok::Op('-') => {
                    self.bump();
                    terms.push(-self.term()?);
                }
                _ => break,
            }
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { Expr::Sum(terms) })
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut factors = vec![self.unary()?];
        loop {
            match self.peek() {
                Tok::Op('*') => {
                    self.bump();
                    factors.push(self.unary()?);
                }
                Tok::Op('/') => {
                    self.bump();
                    let col = self.column();
                    let rhs = self.unary()?;
                    // p/q between integer literals is a single rational
                    if let (Some(Expr::Rational(p)), Expr::Rational(q)) = (factors.last(), &rhs) {
                        if q.is_zero() {
                            return Err(ParseError::MalformedRational {
                                pos: col,
                                text: format!("{p}/0"),
                            });
                        }
                        let merged = p / q;
                        *factors.last_mut().unwrap() = Expr::Rational(merged);
                        continue;
                    }
                    factors.push(rhs.pow(-1));
                }
                _ => break,
            }
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            Expr::Product(factors)
        })
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Op('-') {
            self.bump();
            return Ok(-self.unary()?);
        }
        if *self.peek() == Tok::Op('+') {
            self.bump();
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if *self.peek() != Tok::Op('^') {
            return Ok(base);
        }
        self.bump();
        let col = self.column();
        let exponent = self.unary()?;
        let Some(e) = exponent.as_rational() else {
            return Err(ParseError::Syntax {
                pos: col,
                msg: "exponent must be a rational constant".into(),
            });
        };
        let (n, d) = (i64::try_from(e.numer()), i64::try_from(e.denom()));
        match (n, d) {
            (Ok(n), Ok(d)) if n.unsigned_abs() < 1 << 20 && d < 1 << 20 => {
                Ok(base.pow_rational(super::Exponent::new(n, d)))
            }
            _ => Err(ParseError::Syntax {
                pos: col,
                msg: "exponent too large".into(),
            }),
        }
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let col = self.column();
        match self.bump() {
            Tok::Num(v, _) => Ok(Expr::Rational(v)),
            Tok::Op('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                if let Some(f) = Func::from_name(&name) {
                    if *self.peek() != Tok::Op('(') {
                        return Err(self.unexpected(&format!("expected `(` after `{name}`")));
                    }
                    self.bump();
                    let arg = self.expr()?;
                    self.expect(')')?;
                    return Ok(Expr::func(f, arg));
                }
                match self.table.lookup(&name) {
                    Some(sym) => Ok(Expr::sym(sym)),
                    None => Err(ParseError::UnknownIdentifier { pos: col, name }),
                }
            }
            Tok::End => {
                self.pos = self.toks.len() - 1;
                Err(ParseError::Syntax {
                    pos: col,
                    msg: "unexpected end of input".into(),
                })
            }
            Tok::Op(c) => Err(ParseError::Syntax {
                pos: col,
                msg: format!("unexpected `{c}`"),
            }),
        }
    }
}

/// Parses `text` against the symbols of `table`. The result is not normalized.
pub fn parse_expression(text: &str, table: &SymbolTable) -> Result<Expr, ParseError> {
    let toks = Lexer::run(text)?;
    let mut p = Parser { toks, pos: 0, table };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("expected operator or end of input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Exponent;

    fn table() -> SymbolTable {
        SymbolTable::new(&["t", "x", "y", "z"], &["a"]).unwrap()
    }

    #[test]
    fn parses_power_of_function() {
        let t = table();
        let e = parse_expression("cosh(x/a)^2", &t).unwrap();
        let x = Expr::sym(t.coord(1));
        let a = Expr::sym(&t.params()[0]);
        let want = Expr::Power(
            Box::new(Expr::func(Func::Cosh, Expr::Product(vec![x, a.pow(-1)]))),
            Exponent::from_integer(2),
        );
        assert_eq!(e, want);
    }

    #[test]
    fn parses_constants_and_velocities() {
        let t = table();
        assert_eq!(parse_expression("0", &t).unwrap(), Expr::zero());
        let e = parse_expression("s*xdot - x", &t).unwrap();
        let want = Expr::Sum(vec![
            Expr::Product(vec![Expr::sym(t.s()), Expr::sym(t.velocity(1))]),
            -Expr::sym(t.coord(1)),
        ]);
        assert_eq!(e, want);
        assert_eq!(parse_expression("0.25", &t).unwrap(), Expr::rational(1, 4));
        assert_eq!(parse_expression("3/4", &t).unwrap(), Expr::rational(3, 4));
        assert_eq!(parse_expression("1e-3", &t).unwrap(), Expr::rational(1, 1000));
    }

    #[test]
    fn power_is_right_associative_and_binds_tighter_than_minus() {
        let t = table();
        let e = parse_expression("2^3^2", &t).unwrap();
        assert_eq!(e.as_rational().unwrap(), Coeff::from_integer(512.into()));
        let e = parse_expression("-x^2", &t).unwrap().normalize();
        let f = parse_expression("-(x^2)", &t).unwrap().normalize();
        assert_eq!(e, f);
        let e = parse_expression("x^-1", &t).unwrap().normalize();
        assert_eq!(e, parse_expression("1/x", &t).unwrap().normalize());
    }

    #[test]
    fn reports_errors() {
        let t = table();
        assert!(matches!(
            parse_expression("x + ", &t),
            Err(ParseError::Syntax { pos: 5, .. })
        ));
        assert!(matches!(
            parse_expression("q*2", &t),
            Err(ParseError::UnknownIdentifier { pos: 1, .. })
        ));
        assert!(matches!(
            parse_expression("1.2.3", &t),
            Err(ParseError::MalformedRational { .. })
        ));
        assert!(matches!(
            parse_expression("3/0", &t),
            Err(ParseError::MalformedRational { .. })
        ));
        assert!(matches!(parse_expression("x^y", &t), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_expression("sin x", &t), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_expression("(x", &t), Err(ParseError::Syntax { .. })));
    }
}
