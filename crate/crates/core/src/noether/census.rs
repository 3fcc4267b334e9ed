use std::collections::BTreeMap;

use super::algebra::{in_span, structure_constants, StructureConstants};
use super::gauge::{derive_gauge, GaugeError};
use super::residual::conserved_quantity;
use super::solve::solve_noether_with;
use super::{AnsatzBasis, ConservedQuantity, Generator, NoetherError, NoetherSymmetry, SymmetryClass};
use crate::expr::{on_shell_derivative, Expr, SymbolTable, VelocityIndex, ZeroTest};
use crate::geometry::{flat_orthogonal_sections, geodesic_rhs, is_flat, lagrangian_of, FlatSection, Metric};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counts {
    pub total: usize,
    pub isometries: usize,
    pub lagrangian: usize,
    pub new: usize,
}

impl Counts {
    pub fn of(syms: &[NoetherSymmetry]) -> Counts {
        let count = |c| syms.iter().filter(|s| s.class == c).count();
        Counts {
            total: syms.len(),
            isometries: count(SymmetryClass::Isometry),
            lagrangian: count(SymmetryClass::LagrangianTranslation),
            new: count(SymmetryClass::New),
        }
    }
}

/// Symmetry counts for flat space of dimension `n`: `n(n-1)/2 + n`
/// isometries, `∂_s`, and `n + 2` new ones.
pub fn predicted_flat_count(n: i64) -> Result<Counts, NoetherError> {
    if n < 1 {
        return Err(NoetherError::Invalid(format!("dimension must be at least 1, got {n}")));
    }
    let n = n as usize;
    let counts = Counts {
        total: (n * n + 3 * n + 6) / 2,
        isometries: n * (n - 1) / 2 + n,
        lagrangian: 1,
        new: n + 2,
    };
    debug_assert_eq!(counts.total, counts.isometries + counts.lagrangian + counts.new);
    Ok(counts)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjectureResult {
    /// Coordinate indices of the flat section used.
    pub section: Vec<usize>,
    pub m: usize,
    /// Every `s ∂_i`, `i` in the section, lies in the span of the new
    /// symmetries.
    pub form_pass: bool,
    /// Section coordinates whose `s ∂_i` is missing.
    pub missing: Vec<usize>,
    pub new_count: usize,
    pub count_pass: bool,
}

impl ConjectureResult {
    pub fn passed(&self) -> bool {
        self.form_pass && self.count_pass
    }
}

/// Checks, on a non-flat metric with a flat section of dimension `m`, that
/// the new symmetries contain `s ∂_i` for each section coordinate and that
/// there are exactly `m` of them. Uses the first (largest) section.
pub fn conjecture_check(
    syms: &[NoetherSymmetry],
    sections: &[FlatSection],
    table: &SymbolTable,
) -> Result<ConjectureResult, NoetherError> {
    let n = table.dim();
    if sections.iter().any(|s| s.dim() == n) {
        return Err(NoetherError::Precondition("metric is flat; the check needs a proper flat section".into()));
    }
    let Some(section) = sections.first() else {
        return Err(NoetherError::Precondition("metric has no flat orthogonal section".into()));
    };
    let news: Vec<Generator> = syms
        .iter()
        .filter(|s| s.class == SymmetryClass::New)
        .map(|s| s.gen.clone())
        .collect();
    let mut missing = Vec::new();
    for &i in &section.coords {
        let target = Generator::along(n, i, Expr::sym(table.s()));
        if !in_span(&target, &news, table)? {
            missing.push(i);
        }
    }
    let m = section.dim();
    Ok(ConjectureResult {
        section: section.coords.clone(),
        m,
        form_pass: missing.is_empty(),
        missing,
        new_count: news.len(),
        count_pass: news.len() == m,
    })
}

/// Runs the gauge derivation for `s ∂_s` and returns its velocity-quadratic
/// obstruction, which must equal that of `-L`.
pub fn scaling_exclusion_check(m: &Metric) -> Result<BTreeMap<VelocityIndex, Expr>, NoetherError> {
    let table = m.table();
    let l = lagrangian_of(m);
    let g = Generator::new(Expr::sym(table.s()), vec![Expr::zero(); m.dim()]);
    match derive_gauge(&l, &g, table) {
        Err(GaugeError::QuadraticObstruction(obstruction)) => {
            let want = (-l).velocity_coefficients()?;
            if obstruction != want {
                return Err(NoetherError::Inconsistent(format!(
                    "obstruction {obstruction:?} differs from the coefficients of -L"
                )));
            }
            Ok(obstruction)
        }
        Ok(_) => Err(NoetherError::ScalingNotExcluded(BTreeMap::new())),
        Err(e) => Err(e.into()),
    }
}

#[derive(Clone, Debug)]
pub struct SymmetryReport {
    pub ansatz: AnsatzBasis,
    pub symmetries: Vec<NoetherSymmetry>,
    pub conserved: Vec<ConservedQuantity>,
    pub structure_constants: StructureConstants,
    pub counts: Counts,
    pub flat: bool,
    pub sections: Vec<FlatSection>,
    /// Present for flat metrics.
    pub predicted: Option<Counts>,
    /// Present for non-flat metrics with a flat section.
    pub conjecture: Option<ConjectureResult>,
}

/// Solves, classifies and assembles the full census for one metric.
pub fn symmetry_report(m: &Metric, basis: &AnsatzBasis, zero: &ZeroTest) -> Result<SymmetryReport, NoetherError> {
    let table = m.table();
    let symmetries = solve_noether_with(m, basis, zero)?;
    let l = lagrangian_of(m);
    let rhs = geodesic_rhs(m)?;
    let mut conserved = Vec::with_capacity(symmetries.len());
    for (i, s) in symmetries.iter().enumerate() {
        let q = conserved_quantity(&l, s, i, table)?;
        if !on_shell_derivative(&q.expr, table, Some(&rhs))?.is_zero_with(zero)? {
            return Err(NoetherError::Inconsistent(format!("{} is not conserved", q.expr)));
        }
        conserved.push(q);
    }
    let structure_constants = structure_constants(&symmetries, table)?;
    let counts = Counts::of(&symmetries);
    let flat = is_flat(m)?;
    let sections = flat_orthogonal_sections(m)?;
    let predicted = if flat { Some(predicted_flat_count(m.dim() as i64)?) } else { None };
    let conjecture = if !flat && !sections.is_empty() {
        Some(conjecture_check(&symmetries, &sections, table)?)
    } else {
        None
    };
    Ok(SymmetryReport {
        ansatz: basis.clone(),
        symmetries,
        conserved,
        structure_constants,
        counts,
        flat,
        sections,
        predicted,
        conjecture,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn predicted_counts() {
        let c = predicted_flat_count(3).unwrap();
        assert_eq!((c.total, c.isometries, c.new), (12, 6, 5));
        let c = predicted_flat_count(1).unwrap();
        assert_eq!((c.total, c.isometries, c.new), (5, 1, 3));
        let c = predicted_flat_count(4).unwrap();
        assert_eq!((c.total, c.isometries, c.new), (17, 10, 6));
        assert!(predicted_flat_count(0).is_err());
    }

    #[test]
    fn scaling_obstruction_on_line() {
        let m = Metric::parse(&["x"], &[], &[("x", "x", "1")]).unwrap();
        let table = scaling_exclusion_check(&m).unwrap();
        assert_eq!(table.len(), 1);
        assert_eq!(table.values().next(), Some(&Expr::int(-1)));
    }

    #[test]
    fn conjecture_record() {
        let m = Metric::parse(
            &["t", "x", "y", "z"],
            &["a"],
            &[("t", "t", "cosh(x/a)^2"), ("x", "x", "-1"), ("y", "y", "-1"), ("z", "z", "-1")],
        )
        .unwrap();
        let t = m.table();
        let s = Expr::sym(t.s());
        let new = |g: Generator| NoetherSymmetry {
            gen: g,
            gauge: Expr::zero(),
            residual: Expr::zero(),
            class: SymmetryClass::New,
        };
        let sections = flat_orthogonal_sections(&m).unwrap();
        let syms = vec![
            new(Generator::along(4, 2, s.clone())),
            new(Generator::along(4, 3, s.clone())),
            new(Generator::along(4, 1, s.clone())),
        ];
        let r = conjecture_check(&syms, &sections, t).unwrap();
        assert!(r.form_pass);
        assert!(!r.count_pass);
        assert_eq!((r.m, r.new_count), (2, 3));
        let r = conjecture_check(&syms[..1], &sections, t).unwrap();
        assert_eq!(r.missing, vec![3]);
        let flat = vec![FlatSection { coords: vec![0, 1, 2, 3] }];
        assert!(conjecture_check(&syms, &flat, t).is_err());
    }
}
