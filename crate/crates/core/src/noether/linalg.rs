use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::expr::Coeff;

/// A sparse integer row, sorted by column, with content one and a positive
/// leading entry.
type Row = Vec<(usize, BigInt)>;

fn content(row: &Row) -> BigInt {
    row.iter().fold(BigInt::zero(), |g, (_, v)| g.gcd(v))
}

fn normalize_row(row: &mut Row) {
    row.retain(|(_, v)| !v.is_zero());
    let g = content(row);
    if g.is_zero() {
        return;
    }
    let flip = row.first().is_some_and(|(_, v)| v.is_negative());
    for (_, v) in row.iter_mut() {
        *v /= &g;
        if flip {
            *v = -&*v;
        }
    }
}

fn lookup(row: &Row, col: usize) -> Option<&BigInt> {
    row.binary_search_by_key(&col, |(c, _)| *c).ok().map(|i| &row[i].1)
}

/// `a*row - b*pivot`, merged by column.
fn combine(row: &Row, a: &BigInt, pivot: &Row, b: &BigInt) -> Row {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let ci = row.get(i).map(|e| e.0).unwrap_or(usize::MAX);
        let cj = pivot.get(j).map(|e| e.0).unwrap_or(usize::MAX);
        if ci < cj {
            out.push((ci, a * &row[i].1));
            i += 1;
        } else if cj < ci {
            out.push((cj, -(b * &pivot[j].1)));
            j += 1;
        } else {
            let v = a * &row[i].1 - b * &pivot[j].1;
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Integer rows of a rational row, scaled by the common denominator.
pub(crate) fn integer_row(row: &[(usize, Coeff)]) -> Row {
    let lcm = row.iter().fold(BigInt::one(), |l, (_, c)| l.lcm(c.denom()));
    let mut out: Row = row
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(j, c)| (*j, c.numer() * (&lcm / c.denom())))
        .collect();
    out.sort_by_key(|(j, _)| *j);
    normalize_row(&mut out);
    out
}

/// Incremental fraction-free elimination. Pivot rows stay reduced against
/// every pivot inserted before them; [`Echelon::reduced`] finishes the job.
#[derive(Default)]
pub(crate) struct Echelon {
    pivots: BTreeMap<usize, Row>,
}

impl Echelon {
    fn reduce(&self, mut row: Row) -> Row {
        let mut k = 0;
        while k < row.len() {
            let (col, val) = (row[k].0, row[k].1.clone());
            if let Some(p) = self.pivots.get(&col) {
                let pv = &p[0].1;
                let g = pv.gcd(&val);
                row = combine(&row, &(pv / &g), p, &(&val / &g));
                normalize_row(&mut row);
                // entries before `col` are untouched, so resume at the same slot
                k = row.partition_point(|(c, _)| *c < col);
            } else {
                k += 1;
            }
        }
        row
    }

    /// Adds a row; returns false when it was already in the row space.
    pub(crate) fn insert(&mut self, row: Row) -> bool {
        let mut row = self.reduce(row);
        normalize_row(&mut row);
        match row.first() {
            None => false,
            Some((col, _)) => {
                self.pivots.insert(*col, row);
                true
            }
        }
    }

    /// Reduced row echelon form: each pivot column is zero outside its row.
    pub(crate) fn reduced(&self) -> BTreeMap<usize, Row> {
        let mut done: BTreeMap<usize, Row> = BTreeMap::new();
        for (&col, row) in self.pivots.iter().rev() {
            let mut row = row.clone();
            let mut k = 1;
            while k < row.len() {
                let (c, val) = (row[k].0, row[k].1.clone());
                if let Some(p) = done.get(&c) {
                    let pv = &p[0].1;
                    let g = pv.gcd(&val);
                    row = combine(&row, &(pv / &g), p, &(&val / &g));
                    normalize_row(&mut row);
                    k = row.partition_point(|(cc, _)| *cc <= c);
                } else {
                    k += 1;
                }
            }
            done.insert(col, row);
        }
        done
    }

    /// Basis of `{c : M c = 0}` over `ncols` unknowns.
    pub(crate) fn nullspace(&self, ncols: usize) -> Vec<Vec<Coeff>> {
        let rref = self.reduced();
        let mut out = Vec::new();
        for free in (0..ncols).filter(|c| !rref.contains_key(c)) {
            let mut v = vec![Coeff::zero(); ncols];
            v[free] = Coeff::one();
            for (&p, row) in &rref {
                if let Some(val) = lookup(row, free) {
                    v[p] = -Coeff::new(val.clone(), row[0].1.clone());
                }
            }
            out.push(v);
        }
        out
    }
}

/// Scales a rational vector to integers with content one and a positive
/// first nonzero entry.
pub(crate) fn primitive_integer(v: &[Coeff]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let mut ints: Vec<BigInt> = v.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return ints;
    }
    let flip = ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    for x in ints.iter_mut() {
        *x /= &g;
        if flip {
            *x = -&*x;
        }
    }
    ints
}

/// Exact nullspace of a dense rational matrix. Vectors are integral with
/// content one and positive first nonzero entry.
pub fn rational_nullspace(m: &[Vec<Coeff>]) -> Vec<Vec<BigInt>> {
    let ncols = m.first().map_or(0, Vec::len);
    let mut ech = Echelon::default();
    for row in m {
        let sparse: Vec<(usize, Coeff)> = row.iter().cloned().enumerate().collect();
        ech.insert(integer_row(&sparse));
    }
    ech.nullspace(ncols).iter().map(|v| primitive_integer(v)).collect()
}

/// Row-reduces a set of vectors and returns the reduced basis of their span:
/// each vector has a leading entry in a column where all others vanish.
pub(crate) fn reduced_basis(vectors: &[Vec<Coeff>]) -> Vec<Vec<Coeff>> {
    let ncols = vectors.first().map_or(0, Vec::len);
    let mut ech = Echelon::default();
    for v in vectors {
        let sparse: Vec<(usize, Coeff)> = v.iter().cloned().enumerate().collect();
        ech.insert(integer_row(&sparse));
    }
    ech.reduced()
        .into_values()
        .map(|row| {
            let mut d = vec![Coeff::zero(); ncols];
            for (j, x) in row {
                d[j] = Coeff::from_integer(x);
            }
            d
        })
        .collect()
}

/// Solves `A x = b` exactly. Free unknowns are set to zero; `None` when the
/// system is inconsistent.
pub(crate) fn solve(rows: &[Vec<(usize, Coeff)>], rhs: &[Coeff], ncols: usize) -> Option<Vec<Coeff>> {
    // The right-hand side rides along as column `ncols`.
    let mut ech = Echelon::default();
    for (row, b) in rows.iter().zip(rhs) {
        let mut r = row.clone();
        if !b.is_zero() {
            r.push((ncols, -b.clone()));
        }
        ech.insert(integer_row(&r));
    }
    let rref = ech.reduced();
    if rref.contains_key(&ncols) {
        return None;
    }
    let mut x = vec![Coeff::zero(); ncols];
    for (&p, row) in &rref {
        if let Some(val) = lookup(row, ncols) {
            x[p] = -Coeff::new(val.clone(), row[0].1.clone());
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Coeff {
        Coeff::from_integer(n.into())
    }

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Coeff>> {
        rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn nullspace_examples() {
        assert!(rational_nullspace(&mat(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).is_empty());
        assert_eq!(rational_nullspace(&mat(&[&[0, 0, 0], &[0, 0, 0]])).len(), 3);
        assert_eq!(rational_nullspace(&mat(&[&[1, 1, 0], &[0, 0, 1]])), vec![ints(&[1, -1, 0])]);
        assert_eq!(rational_nullspace(&mat(&[&[2, 1], &[1, -1]])), Vec::<Vec<BigInt>>::new());
    }

    #[test]
    fn nullspace_vectors_annihilate() {
        let m = mat(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, -1, 2]]);
        let ns = rational_nullspace(&m);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for row in &m {
                let dot: Coeff = row.iter().zip(v).map(|(a, b)| a * Coeff::from_integer(b.clone())).sum();
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn solves_systems() {
        // x + y = 3, x - y = 1
        let rows = vec![vec![(0, q(1)), (1, q(1))], vec![(0, q(1)), (1, q(-1))]];
        assert_eq!(solve(&rows, &[q(3), q(1)], 2), Some(vec![q(2), q(1)]));
        // x = 1, x = 2
        let rows = vec![vec![(0, q(1))], vec![(0, q(1))]];
        assert_eq!(solve(&rows, &[q(1), q(2)], 1), None);
    }
}
