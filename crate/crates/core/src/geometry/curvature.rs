use std::collections::BTreeMap;

use num_rational::BigRational;
use rayon::prelude::*;

use super::metric::inverse_polys;
use super::{GeometryError, Metric};
use crate::expr::{Expr, Poly, Symbol};

/// `Γ^a_bc`, stored densely.
#[derive(Clone, Debug)]
pub struct Christoffel {
    n: usize,
    data: Vec<Poly>,
}

impl Christoffel {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn poly(&self, a: usize, b: usize, c: usize) -> &Poly {
        &self.data[(a * self.n + b) * self.n + c]
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> Expr {
        self.poly(a, b, c).to_expr()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Poly::is_zero)
    }
}

/// `R^a_bcd`, stored densely; `nonzero` lists the components with `c < d`
/// that fail the zero test.
#[derive(Clone, Debug)]
pub struct Riemann {
    n: usize,
    data: Vec<Poly>,
    nonzero: BTreeMap<(usize, usize, usize, usize), Expr>,
}

impl Riemann {
    fn idx(&self, a: usize, b: usize, c: usize, d: usize) -> usize {
        ((a * self.n + b) * self.n + c) * self.n + d
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn poly(&self, a: usize, b: usize, c: usize, d: usize) -> &Poly {
        &self.data[self.idx(a, b, c, d)]
    }

    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> Expr {
        self.poly(a, b, c, d).to_expr()
    }

    pub fn nonzero(&self) -> &BTreeMap<(usize, usize, usize, usize), Expr> {
        &self.nonzero
    }

    pub fn is_flat(&self) -> bool {
        self.nonzero.is_empty()
    }

    /// `R_abcd = g_ae R^e_bcd`.
    pub fn lowered(&self, m: &Metric) -> Vec<Poly> {
        let n = self.n;
        let mut out = vec![Poly::zero(); n * n * n * n];
        for a in 0..n {
            for e in 0..n {
                let g = m.poly(a, e);
                if g.is_zero() {
                    continue;
                }
                for b in 0..n {
                    for c in 0..n {
                        for d in 0..n {
                            let r = self.poly(e, b, c, d);
                            if !r.is_zero() {
                                out[self.idx(a, b, c, d)] += &(g * r);
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

pub(crate) fn christoffel_polys(coords: &[Symbol], g: &[Vec<Poly>]) -> Result<Christoffel, GeometryError> {
    let n = coords.len();
    let inv = inverse_polys(g)?;
    // dg[d][b][c] = ∂_d g_bc
    let dg: Vec<Vec<Vec<Poly>>> = (0..n)
        .map(|d| (0..n).map(|b| (0..n).map(|c| g[b][c].diff(&coords[d])).collect()).collect())
        .collect();
    let half = Poly::constant(BigRational::new(1.into(), 2.into()));
    let mut data = vec![Poly::zero(); n * n * n];
    let entries: Vec<(usize, usize, usize, Poly)> = (0..n)
        .flat_map(|a| (0..n).flat_map(move |b| (b..n).map(move |c| (a, b, c))))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(a, b, c)| {
            let mut acc = Poly::zero();
            for d in 0..n {
                if inv[a][d].is_zero() {
                    continue;
                }
                let mut bracket = &dg[b][d][c] + &dg[c][b][d];
                bracket = &bracket - &dg[d][b][c];
                if !bracket.is_zero() {
                    acc += &(&inv[a][d] * &bracket);
                }
            }
            (a, b, c, &acc * &half)
        })
        .collect();
    for (a, b, c, v) in entries {
        data[(a * n + c) * n + b] = v.clone();
        data[(a * n + b) * n + c] = v;
    }
    Ok(Christoffel { n, data })
}

pub(crate) fn riemann_polys(coords: &[Symbol], g: &[Vec<Poly>]) -> Result<Riemann, GeometryError> {
    let n = coords.len();
    let gamma = christoffel_polys(coords, g)?;
    let idx = |a: usize, b: usize, c: usize, d: usize| ((a * n + b) * n + c) * n + d;
    let tuples: Vec<(usize, usize, usize, usize)> = (0..n)
        .flat_map(|a| (0..n).flat_map(move |b| (0..n).flat_map(move |c| (c + 1..n).map(move |d| (a, b, c, d)))))
        .collect();
    let computed: Vec<((usize, usize, usize, usize), Poly, Result<bool, GeometryError>)> = tuples
        .into_par_iter()
        .map(|(a, b, c, d)| {
            let mut r = &gamma.poly(a, b, d).diff(&coords[c]) - &gamma.poly(a, b, c).diff(&coords[d]);
            for e in 0..n {
                let p1 = gamma.poly(a, c, e);
                let p2 = gamma.poly(e, b, d);
                if !p1.is_zero() && !p2.is_zero() {
                    r += &(p1 * p2);
                }
                let q1 = gamma.poly(a, d, e);
                let q2 = gamma.poly(e, b, c);
                if !q1.is_zero() && !q2.is_zero() {
                    r = &r - &(q1 * q2);
                }
            }
            let zero = r.is_identically_zero().map_err(GeometryError::from);
            ((a, b, c, d), r, zero)
        })
        .collect();
    let mut data = vec![Poly::zero(); n * n * n * n];
    let mut nonzero = BTreeMap::new();
    for ((a, b, c, d), r, zero) in computed {
        if !zero? {
            nonzero.insert((a, b, c, d), r.to_expr());
            data[idx(a, b, d, c)] = -&r;
            data[idx(a, b, c, d)] = r;
        }
    }
    Ok(Riemann { n, data, nonzero })
}

pub fn christoffel(m: &Metric) -> Result<Christoffel, GeometryError> {
    christoffel_polys(m.coords(), m.polys())
}

pub fn riemann(m: &Metric) -> Result<Riemann, GeometryError> {
    riemann_polys(m.coords(), m.polys())
}

/// True iff every curvature component vanishes identically.
pub fn is_flat(m: &Metric) -> Result<bool, GeometryError> {
    Ok(riemann(m)?.is_flat())
}

/// A coordinate block decoupled from its complement with flat induced metric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatSection {
    pub coords: Vec<usize>,
}

impl FlatSection {
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn names(&self, m: &Metric) -> Vec<String> {
        self.coords.iter().map(|&i| m.coords()[i].name().to_string()).collect()
    }
}

fn depends_on_any(p: &Poly, coords: &[&Symbol]) -> bool {
    coords.iter().any(|c| p.contains(c))
}

/// Every maximal coordinate subset `S` such that the metric splits as a
/// product with `S` as a flat factor: no cross terms with the complement,
/// block entries on each side depending only on that side's coordinates,
/// and vanishing curvature of the `S` block. Largest first.
pub fn flat_orthogonal_sections(m: &Metric) -> Result<Vec<FlatSection>, GeometryError> {
    let n = m.dim();
    assert!(n < 20, "coordinate subsets are enumerated exhaustively");
    let coords = m.coords();
    let mut qualifying: Vec<u32> = Vec::new();
    for mask in 1u32..(1 << n) {
        let inside: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let outside: Vec<usize> = (0..n).filter(|i| mask & (1 << i) == 0).collect();
        let out_syms: Vec<&Symbol> = outside.iter().map(|&i| &coords[i]).collect();
        let in_syms: Vec<&Symbol> = inside.iter().map(|&i| &coords[i]).collect();
        let mut ok = true;
        'cross: for &a in &inside {
            for &b in &outside {
                if !m.poly(a, b).is_identically_zero()? {
                    ok = false;
                    break 'cross;
                }
            }
        }
        if !ok {
            continue;
        }
        if inside
            .iter()
            .any(|&a| inside.iter().any(|&b| depends_on_any(m.poly(a, b), &out_syms)))
        {
            continue;
        }
        if outside
            .iter()
            .any(|&a| outside.iter().any(|&b| depends_on_any(m.poly(a, b), &in_syms)))
        {
            continue;
        }
        let block: Vec<Vec<Poly>> = inside
            .iter()
            .map(|&a| inside.iter().map(|&b| m.poly(a, b).clone()).collect())
            .collect();
        let block_coords: Vec<Symbol> = in_syms.iter().map(|s| (*s).clone()).collect();
        if riemann_polys(&block_coords, &block)?.is_flat() {
            qualifying.push(mask);
        }
    }
    let mut maximal: Vec<u32> = qualifying
        .iter()
        .copied()
        .filter(|&s| !qualifying.iter().any(|&t| t != s && t & s == s))
        .collect();
    maximal.sort_by_key(|s| (std::cmp::Reverse(s.count_ones()), *s));
    Ok(maximal
        .into_iter()
        .map(|mask| FlatSection {
            coords: (0..n).filter(|i| mask & (1 << i) != 0).collect(),
        })
        .collect())
}

#[derive(Clone, Debug)]
pub struct CurvatureReport {
    pub christoffel: Christoffel,
    pub riemann: Riemann,
    pub is_flat: bool,
    pub flat_sections: Vec<FlatSection>,
}

pub fn curvature_report(m: &Metric) -> Result<CurvatureReport, GeometryError> {
    let christoffel = christoffel(m)?;
    let riemann = riemann(m)?;
    let is_flat = riemann.is_flat();
    let flat_sections = flat_orthogonal_sections(m)?;
    Ok(CurvatureReport {
        christoffel,
        riemann,
        is_flat,
        flat_sections,
    })
}

/// `xddot^a = -Γ^a_bc xdot^b xdot^c`.
pub fn geodesic_rhs(m: &Metric) -> Result<Vec<Expr>, GeometryError> {
    Ok(geodesic_rhs_polys(m)?.iter().map(Poly::to_expr).collect())
}

pub(crate) fn geodesic_rhs_polys(m: &Metric) -> Result<Vec<Poly>, GeometryError> {
    let n = m.dim();
    let gamma = christoffel(m)?;
    let t = m.table();
    Ok((0..n)
        .map(|a| {
            let mut acc = Poly::zero();
            for b in 0..n {
                for c in 0..n {
                    let g = gamma.poly(a, b, c);
                    if g.is_zero() {
                        continue;
                    }
                    let vv = &Poly::symbol(t.velocity(b)) * &Poly::symbol(t.velocity(c));
                    acc = &acc - &(g * &vv);
                }
            }
            acc
        })
        .collect())
}

/// Tests `η^c ∂_c g_ab + g_cb ∂_a η^c + g_ac ∂_b η^c = 0` for all `a ≤ b`.
pub fn killing_check(m: &Metric, eta: &[Expr]) -> Result<bool, GeometryError> {
    let polys: Vec<Poly> = eta.iter().map(Expr::to_poly).collect();
    killing_check_polys(m, &polys)
}

fn killing_check_polys(m: &Metric, eta: &[Poly]) -> Result<bool, GeometryError> {
    let n = m.dim();
    if eta.len() != n {
        return Err(GeometryError::Precondition(format!(
            "vector field has {} components, metric dimension is {n}",
            eta.len()
        )));
    }
    for (i, e) in eta.iter().enumerate() {
        if let Some(s) = e.symbols().into_iter().find(|s| !matches!(s.kind(), crate::expr::SymbolKind::Coord(_) | crate::expr::SymbolKind::Param)) {
            return Err(GeometryError::Precondition(format!(
                "component {i} depends on `{s}`; Killing fields depend on coordinates only"
            )));
        }
    }
    let coords = m.coords();
    for a in 0..n {
        for b in a..n {
            let mut acc = Poly::zero();
            for c in 0..n {
                if !eta[c].is_zero() {
                    let dg = m.poly(a, b).diff(&coords[c]);
                    if !dg.is_zero() {
                        acc += &(&eta[c] * &dg);
                    }
                }
                let gcb = m.poly(c, b);
                if !gcb.is_zero() {
                    acc += &(gcb * &eta[c].diff(&coords[a]));
                }
                let gac = m.poly(a, c);
                if !gac.is_zero() {
                    acc += &(gac * &eta[c].diff(&coords[b]));
                }
            }
            if !acc.is_identically_zero()? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
