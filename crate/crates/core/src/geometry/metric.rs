use std::collections::BTreeMap;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::GeometryError;
use crate::expr::{parse_expression, Expr, Poly, Symbol, SymbolKind, SymbolTable};
use crate::numeric::random_assignment;

/// Counts of positive, negative and zero eigenvalues at a sample point.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

/// A line element `ds^2 = g_ab dx^a dx^b` over the coordinates of a symbol
/// table.
#[derive(Clone, Debug)]
pub struct Metric {
    table: SymbolTable,
    g: Vec<Vec<Poly>>,
    signature: Signature,
}

const NONDEGENERACY_SAMPLES: usize = 8;

impl Metric {
    pub fn new(table: SymbolTable, g: Vec<Vec<Expr>>) -> Result<Metric, GeometryError> {
        let polys = g.iter().map(|row| row.iter().map(Expr::to_poly).collect()).collect();
        Metric::from_polys(table, polys)
    }

    pub fn from_polys(table: SymbolTable, g: Vec<Vec<Poly>>) -> Result<Metric, GeometryError> {
        let n = table.dim();
        if n == 0 {
            return Err(GeometryError::Invalid("metric needs at least one coordinate".into()));
        }
        if g.len() != n || g.iter().any(|r| r.len() != n) {
            return Err(GeometryError::Invalid(format!("metric must be {n}x{n}")));
        }
        for a in 0..n {
            for b in 0..n {
                let bad = g[a][b]
                    .symbols()
                    .into_iter()
                    .find(|s| !matches!(s.kind(), SymbolKind::Coord(_) | SymbolKind::Param));
                if let Some(s) = bad {
                    return Err(GeometryError::Invalid(format!(
                        "g[{a},{b}] depends on `{s}`; entries may only use coordinates and parameters"
                    )));
                }
                if b > a && !(&g[a][b] - &g[b][a]).is_identically_zero()? {
                    return Err(GeometryError::Asymmetric(a, b));
                }
            }
        }
        let mut metric = Metric {
            table,
            g,
            signature: Signature::default(),
        };
        metric.signature = metric.check_nondegenerate()?;
        Ok(metric)
    }

    /// Convenience constructor from `(row, column, expression)` entries keyed
    /// by coordinate name; the transposed entry is filled in.
    pub fn parse<S: AsRef<str>>(
        coords: &[S],
        params: &[S],
        entries: &[(&str, &str, &str)],
    ) -> Result<Metric, GeometryError> {
        let table = SymbolTable::new(coords, params)
            .map_err(|e| GeometryError::Invalid(e.to_string()))?;
        let n = table.dim();
        let mut g = vec![vec![Poly::zero(); n]; n];
        for (r, c, text) in entries {
            let i = table
                .coord_position(r)
                .ok_or_else(|| GeometryError::Invalid(format!("unknown coordinate `{r}`")))?;
            let j = table
                .coord_position(c)
                .ok_or_else(|| GeometryError::Invalid(format!("unknown coordinate `{c}`")))?;
            let e = parse_expression(text, &table).map_err(|e| GeometryError::Invalid(e.to_string()))?;
            g[i][j] = e.to_poly();
            g[j][i] = g[i][j].clone();
        }
        Metric::from_polys(table, g)
    }

    fn check_nondegenerate(&self) -> Result<Signature, GeometryError> {
        let n = self.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(0x6d65_7472);
        let symbols: Vec<Symbol> = self.table.coords().iter().chain(self.table.params()).cloned().collect();
        let exprs: Vec<Vec<Expr>> = self.g.iter().map(|r| r.iter().map(Poly::to_expr).collect()).collect();
        let mut signature = None;
        let mut accepted = 0;
        for _ in 0..10 * NONDEGENERACY_SAMPLES {
            if accepted == NONDEGENERACY_SAMPLES {
                break;
            }
            let at = random_assignment(symbols.iter().cloned(), &mut rng);
            let mut m = DMatrix::<f64>::zeros(n, n);
            let mut ok = true;
            for a in 0..n {
                for b in 0..n {
                    match exprs[a][b].eval_at(&at) {
                        Ok(v) if v.is_finite() => m[(a, b)] = v,
                        _ => ok = false,
                    }
                }
            }
            if !ok {
                continue;
            }
            accepted += 1;
            let scale = m.iter().fold(0.0f64, |acc, v| acc.max(v.abs())).max(1.0);
            // relative to the Hadamard bound
            let bound: f64 = m.row_iter().map(|r| r.norm()).product();
            if m.determinant().abs() <= 1e-12 * bound {
                return Err(GeometryError::Degenerate);
            }
            if signature.is_none() {
                let eig = m.symmetric_eigen();
                let mut sig = Signature::default();
                for v in eig.eigenvalues.iter() {
                    if v.abs() <= 1e-12 * scale {
                        sig.zero += 1;
                    } else if *v > 0.0 {
                        sig.positive += 1;
                    } else {
                        sig.negative += 1;
                    }
                }
                signature = Some(sig);
            }
        }
        signature.ok_or_else(|| GeometryError::Invalid("metric could not be evaluated at any sample point".into()))
    }

    pub fn dim(&self) -> usize {
        self.table.dim()
    }

    pub fn table(&self) -> &SymbolTable {
        &self.table
    }

    pub fn coords(&self) -> &[Symbol] {
        self.table.coords()
    }

    pub fn params(&self) -> &[Symbol] {
        self.table.params()
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn component(&self, a: usize, b: usize) -> Expr {
        self.g[a][b].to_expr()
    }

    pub fn poly(&self, a: usize, b: usize) -> &Poly {
        &self.g[a][b]
    }

    pub fn polys(&self) -> &[Vec<Poly>] {
        &self.g
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.dim()).all(|a| (0..self.dim()).all(|b| a == b || self.g[a][b].is_zero()))
    }

    /// The metric with every component multiplied by `factor`.
    pub fn scaled(&self, factor: &Poly) -> Result<Metric, GeometryError> {
        let g = self.g.iter().map(|r| r.iter().map(|e| e * factor).collect()).collect();
        Metric::from_polys(self.table.clone(), g)
    }

    pub fn lagrangian_poly(&self) -> Poly {
        let n = self.dim();
        let mut l = Poly::zero();
        for a in 0..n {
            for b in 0..n {
                if self.g[a][b].is_zero() {
                    continue;
                }
                let vv = &Poly::symbol(self.table.velocity(a)) * &Poly::symbol(self.table.velocity(b));
                l += &(&self.g[a][b] * &vv);
            }
        }
        l
    }

    /// Numeric bindings for every parameter, keyed by symbol.
    pub fn bind_params(&self, values: &BTreeMap<String, f64>) -> Result<BTreeMap<Symbol, f64>, GeometryError> {
        self.params()
            .iter()
            .map(|p| {
                values
                    .get(p.name())
                    .map(|v| (p.clone(), *v))
                    .ok_or_else(|| GeometryError::Invalid(format!("parameter `{p}` has no numeric value")))
            })
            .collect()
    }
}

/// `L = g_ab xdot^a xdot^b`.
pub fn lagrangian_of(m: &Metric) -> Expr {
    m.lagrangian_poly().to_expr()
}

pub(crate) fn determinant(g: &[Vec<Poly>]) -> Poly {
    match g.len() {
        0 => Poly::one(),
        1 => g[0][0].clone(),
        2 => &(&g[0][0] * &g[1][1]) - &(&g[0][1] * &g[1][0]),
        n => {
            let mut det = Poly::zero();
            for j in 0..n {
                if g[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Poly>> = g[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, e)| e.clone()).collect())
                    .collect();
                let term = &g[0][j] * &determinant(&minor);
                if j % 2 == 0 {
                    det += &term;
                } else {
                    det = &det - &term;
                }
            }
            det
        }
    }
}

pub(crate) fn inverse_polys(g: &[Vec<Poly>]) -> Result<Vec<Vec<Poly>>, GeometryError> {
    let n = g.len();
    let det = determinant(g);
    if det.is_identically_zero()? {
        return Err(GeometryError::Degenerate);
    }
    let inv_det = det.pow(crate::expr::Exponent::from_integer(-1));
    let mut inv = vec![vec![Poly::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            // cofactor C_ji
            let minor: Vec<Vec<Poly>> = g
                .iter()
                .enumerate()
                .filter(|(r, _)| *r != j)
                .map(|(_, row)| row.iter().enumerate().filter(|(c, _)| *c != i).map(|(_, e)| e.clone()).collect())
                .collect();
            let mut cof = determinant(&minor);
            if (i + j) % 2 == 1 {
                cof = -cof;
            }
            inv[i][j] = &cof * &inv_det;
        }
    }
    Ok(inv)
}

/// Inverse metric by adjugate over determinant.
pub fn inverse_metric(m: &Metric) -> Result<Vec<Vec<Expr>>, GeometryError> {
    Ok(inverse_polys(m.polys())?
        .into_iter()
        .map(|r| r.into_iter().map(|p| p.to_expr()).collect())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bertotti() -> Metric {
        Metric::parse(
            &["t", "x", "y", "z"],
            &["a"],
            &[("t", "t", "cosh(x/a)^2"), ("x", "x", "-1"), ("y", "y", "-1"), ("z", "z", "-1")],
        )
        .unwrap()
    }

    #[test]
    fn lagrangians() {
        let e = Metric::parse(&["x", "y", "z"], &[], &[("x", "x", "1"), ("y", "y", "1"), ("z", "z", "1")]).unwrap();
        let want = parse_expression("xdot^2 + ydot^2 + zdot^2", e.table()).unwrap().normalize();
        assert_eq!(lagrangian_of(&e), want);
        let b = bertotti();
        let want = parse_expression("cosh(x/a)^2*tdot^2 - xdot^2 - (ydot^2 + zdot^2)", b.table())
            .unwrap()
            .normalize();
        assert_eq!(lagrangian_of(&b), want);
        let one = Metric::parse(&["x"], &[], &[("x", "x", "1")]).unwrap();
        assert_eq!(lagrangian_of(&one).to_string(), "xdot^2");
    }

    #[test]
    fn signature_and_validation() {
        assert_eq!(
            bertotti().signature(),
            Signature {
                positive: 1,
                negative: 3,
                zero: 0
            }
        );
        assert!(matches!(
            Metric::parse(&["x", "y"], &[], &[("x", "x", "1"), ("y", "y", "0")]),
            Err(GeometryError::Degenerate)
        ));
        assert!(matches!(
            Metric::parse(&["x"], &[], &[("x", "x", "xdot")]),
            Err(GeometryError::Invalid(_))
        ));
        let t = SymbolTable::new(&["x", "y"], &[] as &[&str]).unwrap();
        let g = vec![vec![Expr::one(), Expr::sym(t.coord(0))], vec![Expr::zero(), Expr::one()]];
        assert!(matches!(Metric::new(t, g), Err(GeometryError::Asymmetric(0, 1))));
    }

    #[test]
    fn inverses() {
        let b = bertotti();
        let inv = inverse_metric(&b).unwrap();
        let want = parse_expression("cosh(x/a)^(-2)", b.table()).unwrap().normalize();
        assert_eq!(inv[0][0], want);
        assert_eq!(inv[1][1], Expr::int(-1));
        assert_eq!(inv[0][1], Expr::zero());

        let id = Metric::parse(&["x", "y"], &[], &[("x", "x", "1"), ("y", "y", "1")]).unwrap();
        let inv = inverse_metric(&id).unwrap();
        assert_eq!(inv, vec![vec![Expr::one(), Expr::zero()], vec![Expr::zero(), Expr::one()]]);

        let m = Metric::parse(&["x", "y"], &[], &[("x", "x", "1"), ("x", "y", "x"), ("y", "y", "1")]).unwrap();
        let inv = inverse_metric(&m).unwrap();
        let t = m.table();
        let expect = |s: &str| parse_expression(s, t).unwrap();
        assert!((inv[0][0].clone() - expect("1/(1 - x^2)")).is_zero().unwrap());
        assert!((inv[0][1].clone() - expect("-x/(1 - x^2)")).is_zero().unwrap());
        // g * g^-1 = 1
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = Poly::zero();
                for k in 0..2 {
                    acc += &(m.poly(i, k) * &inv[k][j].to_poly());
                }
                let delta = if i == j { Poly::one() } else { Poly::zero() };
                assert!((&acc - &delta).is_identically_zero().unwrap());
            }
        }
    }
}
