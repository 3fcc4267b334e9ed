use std::collections::BTreeMap;

use super::compiled::{Binding, Compiled};
use super::NumericError;
use crate::expr::{Expr, Symbol, SymbolKind, SymbolTable};
use crate::geometry::{geodesic_rhs_polys, Metric};
use crate::noether::ConservedQuantity;

/// A point on a geodesic: parameter, position and velocity.
#[derive(Clone, Debug, PartialEq)]
pub struct GeodesicState {
    pub s: f64,
    pub x: Vec<f64>,
    pub v: Vec<f64>,
}

impl GeodesicState {
    pub fn new(s: f64, x: Vec<f64>, v: Vec<f64>) -> Self {
        GeodesicState { s, x, v }
    }

    fn is_finite(&self) -> bool {
        self.s.is_finite() && self.x.iter().chain(&self.v).all(|c| c.is_finite())
    }

    /// `[s, x.., v..]`, the slot layout used by compiled expressions.
    fn packed(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(1 + 2 * self.x.len());
        out.push(self.s);
        out.extend_from_slice(&self.x);
        out.extend_from_slice(&self.v);
        out
    }
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    table: SymbolTable,
    params: BTreeMap<Symbol, f64>,
    pub states: Vec<GeodesicState>,
    /// `L(x, v)` at each state.
    pub energy: Vec<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn last(&self) -> Option<&GeodesicState> {
        self.states.last()
    }

    pub fn params(&self) -> &BTreeMap<Symbol, f64> {
        &self.params
    }

    fn compile(&self, e: &Expr, params: &BTreeMap<Symbol, f64>) -> Result<Compiled, NumericError> {
        compile_state(e, &self.table, params)
    }
}

fn compile_state(e: &Expr, table: &SymbolTable, params: &BTreeMap<Symbol, f64>) -> Result<Compiled, NumericError> {
    let n = table.dim();
    let resolve = |s: &Symbol| match s.kind() {
        SymbolKind::Curve => Some(Binding::Slot(0)),
        SymbolKind::Coord(i) => Some(Binding::Slot(1 + i as usize)),
        SymbolKind::Velocity(i) => Some(Binding::Slot(1 + n + i as usize)),
        SymbolKind::Param => params.get(s).copied().map(Binding::Value),
        _ => None,
    };
    Ok(Compiled::new(e, &resolve)?)
}

/// Classical fixed-step RK4 on `x' = v`, `v' = -Γ(x) v v` from `init.s` to
/// `s_end`. The final step is shortened to land on `s_end` exactly.
pub fn integrate_geodesic(
    m: &Metric,
    init: &GeodesicState,
    s_end: f64,
    step: f64,
    params: &BTreeMap<Symbol, f64>,
) -> Result<Trajectory, NumericError> {
    let n = m.dim();
    if !(step > 0.0 && step.is_finite()) {
        return Err(NumericError::InvalidInput(format!("step must be positive, got {step}")));
    }
    if init.x.len() != n || init.v.len() != n {
        return Err(NumericError::InvalidInput(format!(
            "initial state has {} positions and {} velocities, metric dimension is {n}",
            init.x.len(),
            init.v.len()
        )));
    }
    if !init.is_finite() || !s_end.is_finite() || s_end < init.s {
        return Err(NumericError::InvalidInput("initial state must be finite and s_end ≥ s".into()));
    }
    if let Some(p) = m.params().iter().find(|p| !params.contains_key(*p)) {
        return Err(NumericError::InvalidInput(format!("parameter `{p}` has no numeric value")));
    }
    let table = m.table().clone();
    let rhs: Vec<Compiled> = geodesic_rhs_polys(m)?
        .iter()
        .map(|p| compile_state(&p.to_expr(), &table, params))
        .collect::<Result<_, _>>()?;
    let lagrangian = compile_state(&m.lagrangian_poly().to_expr(), &table, params)?;

    let deriv = |st: &[f64], out: &mut [f64]| {
        // out = d/ds [x.., v..]
        out[..n].copy_from_slice(&st[1 + n..]);
        for (a, r) in rhs.iter().enumerate() {
            out[n + a] = r.eval(st);
        }
    };

    let span = s_end - init.s;
    let steps = ((span / step) - 1e-9).ceil().max(0.0) as usize;
    let mut states = Vec::with_capacity(steps + 1);
    let mut energy = Vec::with_capacity(steps + 1);
    let mut cur = init.packed();
    states.push(init.clone());
    energy.push(lagrangian.eval(&cur));

    let dim = 2 * n;
    let mut k = [vec![0.0; dim], vec![0.0; dim], vec![0.0; dim], vec![0.0; dim]];
    let mut tmp = vec![0.0; 1 + dim];
    // compensated summation keeps rounding from piling up over many steps
    let mut carry = vec![0.0; dim];
    for i in 0..steps {
        let s = cur[0];
        let next_s = if i + 1 == steps { s_end } else { init.s + (i + 1) as f64 * step };
        let h = next_s - s;
        for stage in 0..4 {
            let (frac, prev) = match stage {
                0 => (0.0, None),
                1 => (0.5, Some(0)),
                2 => (0.5, Some(1)),
                _ => (1.0, Some(2)),
            };
            tmp[0] = s + frac * h;
            for j in 0..dim {
                tmp[1 + j] = cur[1 + j] + prev.map_or(0.0, |p| frac * h * k[p][j]);
            }
            let mut out = std::mem::take(&mut k[stage]);
            deriv(&tmp, &mut out);
            k[stage] = out;
        }
        let mut next = vec![0.0; 1 + dim];
        next[0] = next_s;
        for j in 0..dim {
            let inc = h / 6.0 * (k[0][j] + 2.0 * k[1][j] + 2.0 * k[2][j] + k[3][j]) - carry[j];
            let sum = cur[1 + j] + inc;
            carry[j] = (sum - cur[1 + j]) - inc;
            next[1 + j] = sum;
        }
        let state = GeodesicState::new(next[0], next[1..=n].to_vec(), next[1 + n..].to_vec());
        if !state.is_finite() {
            return Err(NumericError::BlowUp { last_s: s });
        }
        let l = lagrangian.eval(&next);
        if !l.is_finite() {
            return Err(NumericError::BlowUp { last_s: s });
        }
        energy.push(l);
        states.push(state);
        cur = next;
    }
    Ok(Trajectory {
        table,
        params: params.clone(),
        states,
        energy,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DriftReport {
    pub id: String,
    pub t0: f64,
    pub max_abs_drift: f64,
    pub samples: usize,
    pub step: f64,
}

/// Evaluates `t` along the trajectory and reports `max |T(s) - T(s_0)|`.
pub fn expression_drift(id: &str, t: &Expr, traj: &Trajectory) -> Result<DriftReport, NumericError> {
    if traj.is_empty() {
        return Err(NumericError::InvalidInput("trajectory is empty".into()));
    }
    let f = traj.compile(t, &traj.params)?;
    let mut t0 = None;
    let mut drift: f64 = 0.0;
    for st in &traj.states {
        let v = f.eval(&st.packed());
        if !v.is_finite() {
            return Err(NumericError::Eval(crate::expr::EvalError::Domain(format!(
                "`{id}` is not finite at s = {}",
                st.s
            ))));
        }
        let base = *t0.get_or_insert(v);
        drift = drift.max((v - base).abs());
    }
    let step = if traj.len() > 1 { traj.states[1].s - traj.states[0].s } else { 0.0 };
    Ok(DriftReport {
        id: id.to_string(),
        t0: t0.unwrap_or_default(),
        max_abs_drift: drift,
        samples: traj.len(),
        step,
    })
}

pub fn conservation_drift(q: &ConservedQuantity, traj: &Trajectory) -> Result<DriftReport, NumericError> {
    expression_drift(&q.label, &q.expr, traj)
}
