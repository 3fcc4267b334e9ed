use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use super::{Atom, Coeff, Expr, Monomial, Poly, Symbol};

/// `M · c = 0` with one row per independent basis monomial.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    pub unknowns: Vec<Symbol>,
    pub basis: Vec<Monomial>,
    /// Sparse rows, each sorted by column.
    pub rows: Vec<Vec<(usize, Coeff)>>,
}

impl LinearSystem {
    pub fn ncols(&self) -> usize {
        self.unknowns.len()
    }

    pub fn dense(&self) -> Vec<Vec<Coeff>> {
        self.rows
            .iter()
            .map(|r| {
                let mut d = vec![Coeff::default(); self.ncols()];
                for (j, c) in r {
                    d[*j] = c.clone();
                }
                d
            })
            .collect()
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExtractError {
    #[error("equation is not linear in the unknowns: term `{0}`")]
    Nonlinear(String),
    #[error("equation is not homogeneous: term `{0}` has no unknown")]
    Inhomogeneous(String),
    #[error("coefficient of an unknown is not rational: term `{0}`")]
    NonRational(String),
}

/// Collects each equation on its basis monomials. Every term must carry
/// exactly one unknown to the first power.
pub fn extract_polys(equations: &[Poly], unknowns: &[Symbol]) -> Result<LinearSystem, ExtractError> {
    let column: HashMap<&Symbol, usize> = unknowns.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut rows: Vec<Vec<(usize, Coeff)>> = Vec::new();
    let mut basis = Vec::new();
    for eq in equations {
        let mut by_monomial: BTreeMap<Monomial, BTreeMap<usize, Coeff>> = BTreeMap::new();
        for (m, c) in eq.terms() {
            let describe = || Poly::term(c.clone(), m.clone()).to_string();
            let mut hit: Option<usize> = None;
            let mut rest = Vec::new();
            for (atom, e) in m.factors() {
                if let Atom::Sym(s) = atom {
                    if let Some(&j) = column.get(s) {
                        if hit.is_some() || !e.is_integer() || *e.numer() != 1 {
                            return Err(ExtractError::Nonlinear(describe()));
                        }
                        hit = Some(j);
                        continue;
                    }
                } else if unknowns.iter().any(|u| atom.contains(u)) {
                    return Err(ExtractError::Nonlinear(describe()));
                }
                rest.push((atom.clone(), *e));
            }
            let Some(j) = hit else {
                return Err(ExtractError::Inhomogeneous(describe()));
            };
            let rest = Monomial::from_sorted(rest);
            if !rest.is_one() && Poly::from_monomial(rest.clone()).symbols().is_empty() {
                return Err(ExtractError::NonRational(describe()));
            }
            let row = by_monomial.entry(rest).or_default();
            let slot = row.entry(j).or_default();
            *slot += c;
        }
        for (m, row) in by_monomial {
            let row: Vec<(usize, Coeff)> = row.into_iter().filter(|(_, c)| *c != Coeff::default()).collect();
            if !row.is_empty() {
                rows.push(row);
                basis.push(m);
            }
        }
    }
    Ok(LinearSystem {
        unknowns: unknowns.to_vec(),
        basis,
        rows,
    })
}

pub fn linear_system_extract(equations: &[Expr], unknowns: &[Symbol]) -> Result<LinearSystem, ExtractError> {
    let polys: Vec<Poly> = equations.iter().map(Expr::to_poly).collect();
    extract_polys(&polys, unknowns)
}
