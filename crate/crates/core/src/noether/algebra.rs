use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use super::linalg::solve;
use super::residual::generator_polys;
use super::{Generator, NoetherError, NoetherSymmetry};
use crate::expr::{Atom, Coeff, Expr, Monomial, Poly, SymbolTable};

fn apply(xi: &Poly, eta: &[Poly], f: &Poly, table: &SymbolTable) -> Poly {
    let mut out = Poly::zero();
    if !xi.is_zero() {
        out += &(xi * &f.diff(table.s()));
    }
    for (e, x) in eta.iter().zip(table.coords()) {
        if !e.is_zero() {
            out += &(e * &f.diff(x));
        }
    }
    out
}

/// `[X, Y]^μ = X(Y^μ) - Y(X^μ)` over the components `(s, x^a)`.
pub fn lie_bracket(x: &Generator, y: &Generator, table: &SymbolTable) -> Generator {
    let (xxi, xeta) = generator_polys(x);
    let (yxi, yeta) = generator_polys(y);
    let comp = |xc: &Poly, yc: &Poly| (&apply(&xxi, &xeta, yc, table) - &apply(&yxi, &yeta, xc, table)).to_expr();
    Generator {
        xi: comp(&xxi, &yxi),
        eta: xeta.iter().zip(&yeta).map(|(a, b)| comp(a, b)).collect(),
    }
}

fn components(g: &Generator) -> Vec<Poly> {
    let (xi, eta) = generator_polys(g);
    std::iter::once(xi).chain(eta).collect()
}

/// Splits off the top-level parameter factors of a monomial.
fn param_part(m: &Monomial) -> Monomial {
    m.split(|a| matches!(a, Atom::Sym(s) if s.is_param())).0
}

/// Coefficients `c_k` with `target = Σ c_k basis_k`, where each `c_k` is a
/// rational combination of parameter monomials. `None` if the target lies
/// outside the span.
pub fn span_coefficients(
    target: &Generator,
    basis: &[Generator],
    _table: &SymbolTable,
) -> Result<Option<Vec<Expr>>, NoetherError> {
    let t = components(target);
    let b: Vec<Vec<Poly>> = basis.iter().map(components).collect();
    if b.iter().any(|c| c.len() != t.len()) {
        return Err(NoetherError::Invalid("generators of different dimension".into()));
    }
    let target_params: BTreeSet<Monomial> = t.iter().flat_map(|c| c.terms().map(|(m, _)| param_part(m))).collect();
    let basis_params: BTreeSet<Monomial> =
        b.iter().flatten().flat_map(|c| c.terms().map(|(m, _)| param_part(m))).collect();
    let mut multipliers: BTreeSet<Monomial> = BTreeSet::new();
    multipliers.insert(Monomial::one());
    for pt in &target_params {
        for pb in &basis_params {
            multipliers.insert(pt.div(pb));
        }
    }
    let multipliers: Vec<Monomial> = multipliers.into_iter().collect();

    let mut keys: BTreeMap<(usize, Monomial), usize> = BTreeMap::new();
    let mut rows: Vec<Vec<(usize, Coeff)>> = Vec::new();
    let mut row_of = |key: (usize, Monomial), rows: &mut Vec<Vec<(usize, Coeff)>>| -> usize {
        let next = keys.len();
        let idx = *keys.entry(key).or_insert(next);
        if idx == rows.len() {
            rows.push(Vec::new());
        }
        idx
    };
    let ncols = basis.len() * multipliers.len();
    for (k, comps) in b.iter().enumerate() {
        for (pi, p) in multipliers.iter().enumerate() {
            let col = k * multipliers.len() + pi;
            for (ci, c) in comps.iter().enumerate() {
                for (m, coeff) in c.terms() {
                    let r = row_of((ci, m.mul(p)), &mut rows);
                    rows[r].push((col, coeff.clone()));
                }
            }
        }
    }
    let mut rhs_entries = Vec::new();
    for (ci, c) in t.iter().enumerate() {
        for (m, coeff) in c.terms() {
            rhs_entries.push((row_of((ci, m.clone()), &mut rows), coeff.clone()));
        }
    }
    let mut rhs = vec![Coeff::zero(); rows.len()];
    for (r, c) in rhs_entries {
        rhs[r] += c;
    }
    for row in rows.iter_mut() {
        row.sort_by_key(|(c, _)| *c);
    }
    let Some(x) = solve(&rows, &rhs, ncols) else {
        return Ok(None);
    };
    Ok(Some(
        (0..basis.len())
            .map(|k| {
                let mut c = Poly::zero();
                for (pi, p) in multipliers.iter().enumerate() {
                    c.push_term(x[k * multipliers.len() + pi].clone(), p.clone());
                }
                c.to_expr()
            })
            .collect(),
    ))
}

pub fn in_span(target: &Generator, basis: &[Generator], table: &SymbolTable) -> Result<bool, NoetherError> {
    Ok(span_coefficients(target, basis, table)?.is_some())
}

/// `c^k_ij` with `[X_i, X_j] = c^k_ij X_k`, computed for every ordered pair.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants {
    /// `c[i][j]` is `None` when the bracket leaves the span.
    c: Vec<Vec<Option<Vec<Expr>>>>,
    pub closed: bool,
    /// First pair whose bracket is outside the span.
    pub offending: Option<(usize, usize)>,
}

impl StructureConstants {
    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> Option<&Expr> {
        self.c[i][j].as_ref().map(|v| &v[k])
    }

    pub fn row(&self, i: usize, j: usize) -> Option<&[Expr]> {
        self.c[i][j].as_deref()
    }

    /// Nonzero entries as `(i, j, k, c^k_ij)` with `i < j`.
    pub fn nonzero(&self) -> Vec<(usize, usize, usize, Expr)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                if let Some(v) = &self.c[i][j] {
                    for (k, e) in v.iter().enumerate() {
                        if *e != Expr::zero() {
                            out.push((i, j, k, e.clone()));
                        }
                    }
                }
            }
        }
        out
    }

    /// `c^k_ij + c^k_ji = 0` for every computed pair.
    pub fn is_antisymmetric(&self) -> Result<bool, NoetherError> {
        let n = self.len();
        for i in 0..n {
            for j in 0..n {
                match (&self.c[i][j], &self.c[j][i]) {
                    (Some(a), Some(b)) => {
                        for (x, y) in a.iter().zip(b) {
                            if !(x.to_poly() + y.to_poly()).is_identically_zero()? {
                                return Ok(false);
                            }
                        }
                    }
                    (None, None) => {}
                    _ => return Ok(false),
                }
            }
        }
        Ok(true)
    }

    /// `c^l_ij c^m_lk + c^l_jk c^m_li + c^l_ki c^m_lj = 0` for all triples.
    pub fn jacobi_holds(&self) -> Result<bool, NoetherError> {
        if !self.closed {
            return Ok(false);
        }
        let n = self.len();
        let polys: Vec<Vec<Vec<Poly>>> = self
            .c
            .iter()
            .map(|r| {
                r.iter()
                    .map(|v| v.as_ref().map_or_else(Vec::new, |v| v.iter().map(Expr::to_poly).collect()))
                    .collect()
            })
            .collect();
        let get = |i: usize, j: usize, k: usize| -> Option<&Poly> {
            if i == j {
                None
            } else {
                polys[i][j].get(k).filter(|p| !p.is_zero())
            }
        };
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    for m in 0..n {
                        let mut acc = Poly::zero();
                        for l in 0..n {
                            for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                                if let (Some(x), Some(y)) = (get(a, b, l), get(l, c, m)) {
                                    acc += &(x * y);
                                }
                            }
                        }
                        if !acc.is_identically_zero()? {
                            return Ok(false);
                        }
                    }
                }
            }
        }
        Ok(true)
    }
}

pub fn structure_constants(syms: &[NoetherSymmetry], table: &SymbolTable) -> Result<StructureConstants, NoetherError> {
    let gens: Vec<Generator> = syms.iter().map(|s| s.gen.clone()).collect();
    let n = gens.len();
    for i in 0..n {
        let others: Vec<Generator> = gens.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()).collect();
        if gens[i].is_zero() || in_span(&gens[i], &others, table)? {
            return Err(NoetherError::Dependent);
        }
    }
    let mut c = vec![vec![None; n]; n];
    let mut closed = true;
    let mut offending = None;
    for i in 0..n {
        c[i][i] = Some(vec![Expr::zero(); n]);
        for j in 0..n {
            if i == j {
                continue;
            }
            let b = lie_bracket(&gens[i], &gens[j], table);
            let coeffs = span_coefficients(&b, &gens, table)?;
            if coeffs.is_none() && closed {
                closed = false;
                offending = Some((i, j));
            }
            c[i][j] = coeffs;
        }
    }
    Ok(StructureConstants { c, closed, offending })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expression;
    use crate::noether::SymmetryClass;

    fn table() -> SymbolTable {
        SymbolTable::new(&["x", "y", "z"], &[] as &[&str]).unwrap()
    }

    fn gen(t: &SymbolTable, xi: &str, eta: &[&str]) -> Generator {
        let p = |s: &str| parse_expression(s, t).unwrap();
        Generator::new(p(xi), eta.iter().map(|e| p(e)).collect())
    }

    fn sym(g: Generator) -> NoetherSymmetry {
        NoetherSymmetry {
            gen: g,
            gauge: Expr::zero(),
            residual: Expr::zero(),
            class: SymmetryClass::New,
        }
    }

    #[test]
    fn brackets() {
        let t = table();
        let dy = gen(&t, "0", &["0", "1", "0"]);
        let rot = gen(&t, "0", &["0", "z", "-y"]);
        assert_eq!(lie_bracket(&dy, &rot, &t), gen(&t, "0", &["0", "0", "-1"]));
        assert!(lie_bracket(&rot, &rot, &t).is_zero());
        let boost = gen(&t, "0", &["s", "0", "0"]);
        assert_eq!(lie_bracket(&Generator::translation(3), &boost, &t), gen(&t, "0", &["1", "0", "0"]));
    }

    #[test]
    fn span_with_parameters() {
        let t = SymbolTable::new(&["t", "x"], &["a"]).unwrap();
        let x4 = gen(&t, "0", &["-tanh(x/a)*sin(t/a)", "cos(t/a)"]);
        let x5 = gen(&t, "0", &["tanh(x/a)*cos(t/a)", "sin(t/a)"]);
        let dt = gen(&t, "0", &["1", "0"]);
        let b = lie_bracket(&dt, &x4, &t);
        let c = span_coefficients(&b, &[dt.clone(), x4.clone(), x5.clone()], &t).unwrap().unwrap();
        assert_eq!(c[2], parse_expression("-1/a", &t).unwrap().normalize());
        assert!(!in_span(&gen(&t, "s", &["0", "0"]), &[dt, x4, x5], &t).unwrap());
    }

    #[test]
    fn closure_flags() {
        let t = table();
        let single = structure_constants(&[sym(Generator::translation(3))], &t).unwrap();
        assert!(single.closed);
        assert!(single.nonzero().is_empty());
        let pair = [sym(Generator::translation(3)), sym(gen(&t, "0", &["s", "0", "0"]))];
        let sc = structure_constants(&pair, &t).unwrap();
        assert!(!sc.closed);
        assert_eq!(sc.offending, Some((0, 1)));
        let dependent = [sym(Generator::translation(3)), sym(gen(&t, "2", &["0", "0", "0"]))];
        assert!(matches!(structure_constants(&dependent, &t), Err(NoetherError::Dependent)));
    }
}
