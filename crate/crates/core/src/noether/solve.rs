use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;

use super::gauge::value_at;
use super::linalg::{integer_row, primitive_integer, reduced_basis, Echelon};
use super::residual::{gauge_source, noether_residual};
use super::{Generator, NoetherError, NoetherSymmetry, SymmetryClass};
use crate::expr::{
    grade_velocities, total_derivative_poly, Coeff, Expr, Monomial, Poly, Symbol, SymbolTable, VelocityIndex,
    ZeroTest,
};
use crate::geometry::{killing_check, Metric};

pub const DEFAULT_CLOSURE_LIMIT: usize = 64;

/// The finite function space searched by [`solve_noether`].
///
/// `ξ` and `η^a` range over `s^j x^α φ` with `j ≤ s_degree`,
/// `|α| ≤ coord_degree` and `φ` a square-free product of the extra
/// functions; the gauge uses degrees one higher in both `s` and `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct AnsatzBasis {
    pub s_degree: u32,
    pub coord_degree: u32,
    pub extra_functions: Vec<Expr>,
    pub closure_limit: usize,
}

impl Default for AnsatzBasis {
    fn default() -> Self {
        AnsatzBasis::new(2, 2, Vec::new())
    }
}

impl AnsatzBasis {
    pub fn new(s_degree: u32, coord_degree: u32, extra_functions: Vec<Expr>) -> Self {
        AnsatzBasis {
            s_degree,
            coord_degree,
            extra_functions,
            closure_limit: DEFAULT_CLOSURE_LIMIT,
        }
    }

    /// The function factors `φ`, starting with 1, with dependent products
    /// removed.
    pub fn closure(&self) -> Result<Vec<Expr>, NoetherError> {
        Ok(self.closure_polys()?.iter().map(Poly::to_expr).collect())
    }

    fn closure_polys(&self) -> Result<Vec<Poly>, NoetherError> {
        let k = self.extra_functions.len();
        let size = 1usize.checked_shl(k as u32).unwrap_or(usize::MAX);
        if size > self.closure_limit {
            return Err(NoetherError::Closure {
                size,
                limit: self.closure_limit,
            });
        }
        for f in &self.extra_functions {
            if f.depends_on_velocity() || f.free_symbols().iter().any(|s| s.is_ansatz()) {
                return Err(NoetherError::Invalid(format!("basis function `{f}` must depend on s, x and parameters only")));
            }
        }
        let funcs: Vec<Poly> = self.extra_functions.iter().map(Expr::to_poly).collect();
        let mut products = Vec::with_capacity(size);
        for mask in 0..size {
            let mut p = Poly::one();
            for (i, f) in funcs.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    p = &p * f;
                }
            }
            products.push(p);
        }
        // order by number of factors so simpler products come first
        let mut order: Vec<usize> = (0..size).collect();
        order.sort_by_key(|m| (m.count_ones(), *m));
        Ok(independent(order.into_iter().map(|m| products[m].clone()).collect(), &[]))
    }

    pub fn describe(&self) -> String {
        let funcs: Vec<String> = self.extra_functions.iter().map(|f| f.to_string()).collect();
        format!(
            "s-degree {}, coordinate degree {}, gauge degrees +1, functions {{{}}}",
            self.s_degree,
            self.coord_degree,
            funcs.join(", ")
        )
    }
}

impl fmt::Display for AnsatzBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

/// Keeps the candidates that are linearly independent over the rationals
/// from `seed` and from the ones kept before them.
fn independent(candidates: Vec<Poly>, seed: &[Poly]) -> Vec<Poly> {
    let mut index: BTreeMap<Monomial, usize> = BTreeMap::new();
    let mut vector = |p: &Poly| -> Vec<(usize, Coeff)> {
        p.terms()
            .map(|(m, c)| {
                let next = index.len();
                (*index.entry(m.clone()).or_insert(next), c.clone())
            })
            .collect()
    };
    let mut ech = Echelon::default();
    for p in seed {
        ech.insert(integer_row(&vector(p)));
    }
    candidates
        .into_iter()
        .filter(|p| !p.is_zero() && ech.insert(integer_row(&vector(p))))
        .collect()
}

/// Exponent vectors over `n` variables with total degree at most `d`,
/// graded then lexicographic.
fn exponent_vectors(n: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for k in (0..=left).rev() {
            cur.push(k);
            rec(n, left - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, d, &mut Vec::new(), &mut out);
    out.sort_by_key(|v| v.iter().sum::<u32>());
    out
}

fn candidates(table: &SymbolTable, funcs: &[Poly], s_degree: u32, coord_degree: u32) -> Vec<Poly> {
    let s = Poly::symbol(table.s());
    let xs: Vec<Poly> = table.coords().iter().map(Poly::symbol).collect();
    let monomials: Vec<Poly> = exponent_vectors(table.dim(), coord_degree)
        .iter()
        .map(|alpha| {
            alpha
                .iter()
                .zip(&xs)
                .fold(Poly::one(), |acc, (k, x)| &acc * &x.pow_int(*k))
        })
        .collect();
    let mut out = Vec::new();
    for phi in funcs {
        for j in 0..=s_degree {
            let sj = &s.pow_int(j) * phi;
            for m in &monomials {
                out.push(&sj * m);
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Slot {
    Xi,
    Eta(usize),
    Gauge,
}

type RowKey = (VelocityIndex, Monomial);

/// All Noether symmetries of the metric's geodesic Lagrangian inside the
/// ansatz, as a reduced basis of the solution space, sorted by class.
pub fn solve_noether(m: &Metric, basis: &AnsatzBasis) -> Result<Vec<NoetherSymmetry>, NoetherError> {
    solve_noether_with(m, basis, &ZeroTest::default())
}

pub fn solve_noether_with(m: &Metric, basis: &AnsatzBasis, zero: &ZeroTest) -> Result<Vec<NoetherSymmetry>, NoetherError> {
    let table = m.table();
    let n = m.dim();
    let funcs = basis.closure_polys()?;
    let field = candidates(table, &funcs, basis.s_degree, basis.coord_degree);
    let field = independent(field, &[]);
    let gauge = independent(
        candidates(table, &funcs, basis.s_degree + 1, basis.coord_degree + 1),
        &[Poly::one()],
    );

    let mut columns: Vec<(Slot, &Poly)> = Vec::new();
    columns.extend(field.iter().map(|p| (Slot::Xi, p)));
    for a in 0..n {
        columns.extend(field.iter().map(|p| (Slot::Eta(a), p)));
    }
    columns.extend(gauge.iter().map(|p| (Slot::Gauge, p)));

    let l = m.lagrangian_poly();
    let zero_eta = vec![Poly::zero(); n];
    // the residual is linear in (ξ, η, A): one contribution per column
    let contributions: Vec<BTreeMap<VelocityIndex, Poly>> = columns
        .par_iter()
        .map(|(slot, phi)| {
            let r = match slot {
                Slot::Xi => gauge_source(&l, phi, &zero_eta, table),
                Slot::Eta(a) => {
                    let mut eta = zero_eta.clone();
                    eta[*a] = (*phi).clone();
                    gauge_source(&l, &Poly::zero(), &eta, table)
                }
                Slot::Gauge => -total_derivative_poly(phi, table, None),
            };
            grade_velocities(&r)
        })
        .collect::<Result<_, _>>()?;

    let mut rows: BTreeMap<RowKey, Vec<(usize, Coeff)>> = BTreeMap::new();
    for (col, graded) in contributions.into_iter().enumerate() {
        for (k, coeff) in graded {
            for (mono, c) in coeff.terms() {
                rows.entry((k.clone(), mono.clone())).or_default().push((col, c.clone()));
            }
        }
    }
    let mut ech = Echelon::default();
    for row in rows.values() {
        ech.insert(integer_row(row));
    }
    let null = reduced_basis(&ech.nullspace(columns.len()));

    let lagrangian = l.to_expr();
    let origin: Vec<Symbol> = std::iter::once(table.s().clone()).chain(table.coords().iter().cloned()).collect();
    let mut out = Vec::with_capacity(null.len());
    for v in null {
        let ints = primitive_integer(&v);
        let mut xi = Poly::zero();
        let mut eta = vec![Poly::zero(); n];
        let mut a = Poly::zero();
        for ((slot, phi), c) in columns.iter().zip(&ints) {
            if c.is_zero() {
                continue;
            }
            let term = phi.scale(&Coeff::from_integer(c.clone()));
            match slot {
                Slot::Xi => xi += &term,
                Slot::Eta(i) => eta[*i] += &term,
                Slot::Gauge => a += &term,
            }
        }
        if let Some(c) = value_at(&a, &origin) {
            a = &a - &c;
        }
        let gen = Generator {
            xi: xi.to_expr(),
            eta: eta.iter().map(Poly::to_expr).collect(),
        };
        let gauge = a.to_expr();
        let residual = noether_residual(&lagrangian, &gen, &gauge, table);
        if !residual.is_zero_with(zero)? {
            return Err(NoetherError::Inconsistent(format!("{gen}, gauge {gauge}")));
        }
        let class = classify(&gen, &gauge, m)?;
        out.push(NoetherSymmetry {
            gen,
            gauge,
            residual,
            class,
        });
    }
    out.sort_by_key(|s| s.class);
    Ok(out)
}

fn gauge_is_constant(gauge: &Expr, table: &SymbolTable) -> Result<bool, NoetherError> {
    let p = gauge.to_poly();
    for v in std::iter::once(table.s()).chain(table.coords()) {
        if !p.diff(v).is_identically_zero()? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Isometry, translation in `s`, or new.
pub fn classify(gen: &Generator, gauge: &Expr, m: &Metric) -> Result<SymmetryClass, NoetherError> {
    let table = m.table();
    let s = table.s();
    if !gauge_is_constant(gauge, table)? {
        return Ok(SymmetryClass::New);
    }
    let xi = gen.xi.to_poly();
    let eta: Vec<Poly> = gen.eta.iter().map(Expr::to_poly).collect();
    if xi.is_identically_zero()? {
        for e in &eta {
            if !e.diff(s).is_identically_zero()? {
                return Ok(SymmetryClass::New);
            }
        }
        // drop s from the representation before the Killing test
        let eta: Vec<Expr> = eta
            .iter()
            .map(|e| {
                let mut at = BTreeMap::new();
                at.insert(s.clone(), Poly::zero());
                e.substitute(&at).to_expr()
            })
            .collect();
        if killing_check(m, &eta)? {
            return Ok(SymmetryClass::Isometry);
        }
        return Ok(SymmetryClass::New);
    }
    if (&xi - &Poly::one()).is_identically_zero()? {
        let mut all_zero = true;
        for e in &eta {
            all_zero &= e.is_identically_zero()?;
        }
        if all_zero {
            return Ok(SymmetryClass::LagrangianTranslation);
        }
    }
    Ok(SymmetryClass::New)
}
