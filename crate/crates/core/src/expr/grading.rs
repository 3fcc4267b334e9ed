use std::collections::BTreeMap;
use std::fmt;

use num_traits::Signed;
use thiserror::Error;

use super::{Atom, Expr, Monomial, Poly, Symbol};

/// A monomial in velocity symbols, e.g. `xdot^2*ydot`; empty for degree zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VelocityIndex(Vec<(Symbol, u32)>);

impl VelocityIndex {
    pub fn constant() -> Self {
        VelocityIndex(Vec::new())
    }

    /// Builds an index from `(velocity, power)` pairs; zero powers are dropped.
    pub fn from_powers(mut powers: Vec<(Symbol, u32)>) -> Self {
        powers.retain(|(_, k)| *k > 0);
        powers.sort();
        VelocityIndex(powers)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, k)| k).sum()
    }

    pub fn powers(&self) -> &[(Symbol, u32)] {
        &self.0
    }

    pub fn power_of(&self, v: &Symbol) -> u32 {
        self.0.iter().find(|(s, _)| s == v).map(|(_, k)| *k).unwrap_or(0)
    }

    pub fn to_poly(&self) -> Poly {
        let mut p = Poly::one();
        for (v, k) in &self.0 {
            p = &p * &Poly::symbol(v).pow_int(*k);
        }
        p
    }

    pub fn to_expr(&self) -> Expr {
        self.to_poly().to_expr()
    }
}

impl fmt::Display for VelocityIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(v, k)| if *k == 1 { v.name().to_string() } else { format!("{}^{k}", v.name()) })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VelocityError {
    #[error("non-polynomial velocity dependence in `{0}`")]
    NonPolynomial(String),
}

/// Splits a canonical polynomial by velocity monomial. Every coefficient
/// is velocity-free.
pub fn grade_velocities(p: &Poly) -> Result<BTreeMap<VelocityIndex, Poly>, VelocityError> {
    let mut out: BTreeMap<VelocityIndex, Poly> = BTreeMap::new();
    for (m, c) in p.terms() {
        let mut powers = Vec::new();
        let mut rest = Vec::new();
        for (atom, e) in m.factors() {
            match atom {
                Atom::Sym(s) if s.is_velocity() => {
                    if !e.is_integer() || e.is_negative() {
                        return Err(VelocityError::NonPolynomial(p.to_string()));
                    }
                    powers.push((s.clone(), *e.numer() as u32));
                }
                Atom::Sym(_) => rest.push((atom.clone(), *e)),
                _ => {
                    if atom.to_poly().symbols().iter().any(Symbol::is_velocity) {
                        return Err(VelocityError::NonPolynomial(p.to_string()));
                    }
                    rest.push((atom.clone(), *e));
                }
            }
        }
        let key = VelocityIndex::from_powers(powers);
        let coeff = Poly::term(c.clone(), Monomial::from_sorted(rest));
        *out.entry(key).or_default() += &coeff;
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

impl Expr {
    /// Coefficients of each velocity monomial.
    pub fn velocity_coefficients(&self) -> Result<BTreeMap<VelocityIndex, Expr>, VelocityError> {
        Ok(grade_velocities(&self.to_poly())?
            .into_iter()
            .map(|(k, v)| (k, v.to_expr()))
            .collect())
    }
}
