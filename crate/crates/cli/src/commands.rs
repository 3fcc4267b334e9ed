use std::collections::BTreeMap;

use conslaw_core::expr::{parse_expression, Expr, ZeroTest};
use conslaw_core::geometry::{curvature_report, lagrangian_of, Metric};
use conslaw_core::noether::{
    classify, conserved_quantity, derive_gauge, noether_residual, symmetry_report, AnsatzBasis, GaugeError,
    NoetherError, NoetherSymmetry,
};
use conslaw_core::numeric::{expression_drift, integrate_geodesic, GeodesicState};
use serde::{Deserialize, Serialize};

use crate::files::{Candidate, MetricFile};
use crate::report::{
    ConservedJson, CurvatureJson, CurvatureOutput, DriftJson, GaugeNote, GeodesicOutput, MetricInfo, NoetherOutput,
    VerdictJson, VerifyOutput,
};
use crate::{exit, CliError};

/// A rendered command result and the exit code it implies.
#[derive(Debug)]
pub struct Outcome {
    pub human: String,
    pub json: serde_json::Value,
    pub code: i32,
}

impl Outcome {
    fn new<T: Serialize>(value: &T, human: String, code: i32) -> Outcome {
        Outcome {
            human,
            json: serde_json::to_value(value).expect("report serializes"),
            code,
        }
    }
}

fn info(f: &MetricFile) -> MetricInfo {
    let names = |s: &[conslaw_core::expr::Symbol]| s.iter().map(|c| c.name().to_string()).collect();
    MetricInfo {
        hash: f.hash(),
        coords: names(f.metric.coords()),
        params: names(f.metric.params()),
    }
}

pub fn curvature(f: &MetricFile) -> Result<Outcome, CliError> {
    let r = curvature_report(&f.metric).map_err(NoetherError::from)?;
    let out = CurvatureOutput {
        metric: info(f),
        curvature: CurvatureJson::with_components(&f.metric, &r),
    };
    Ok(Outcome::new(&out, out.human(), exit::OK))
}

/// Degrees default to the ansatz defaults; extra functions come from the
/// metric file's `basis` line.
pub fn ansatz(f: &MetricFile, s_degree: Option<u32>, coord_degree: Option<u32>) -> AnsatzBasis {
    let d = AnsatzBasis::default();
    AnsatzBasis::new(
        s_degree.unwrap_or(d.s_degree),
        coord_degree.unwrap_or(d.coord_degree),
        f.basis.clone(),
    )
}

pub fn noether(f: &MetricFile, basis: &AnsatzBasis, zero: &ZeroTest) -> Result<Outcome, CliError> {
    let r = symmetry_report(&f.metric, basis, zero)?;
    let antisymmetric = r.structure_constants.is_antisymmetric()?;
    let jacobi = r.structure_constants.jacobi_holds()?;
    let out = NoetherOutput::new(info(f), &f.metric, &r, antisymmetric, jacobi);
    Ok(Outcome::new(&out, out.human(), exit::OK))
}

fn verdict(m: &Metric, c: &Candidate, index: usize, zero: &ZeroTest) -> Result<VerdictJson, CliError> {
    let table = m.table();
    let l = lagrangian_of(m);
    let mut v = VerdictJson {
        label: c.label.clone(),
        xi: c.generator.xi.to_string(),
        eta: c.generator.eta.iter().map(|e| e.to_string()).collect(),
        pass: false,
        gauge_source: if c.gauge.is_some() { "supplied" } else { "derived" }.into(),
        gauge: None,
        residual: None,
        class: None,
        conserved: None,
        error: None,
        obstruction: Vec::new(),
        gauge_note: None,
    };
    let gauge = match &c.gauge {
        Some(a) => {
            let a = a.normalize();
            let r = noether_residual(&l, &c.generator, &a, table);
            let ok = r.is_zero_with(zero).map_err(NoetherError::from)?;
            v.residual = Some(r.to_string());
            v.gauge = Some(a.to_string());
            if !ok {
                v.error = Some("Noether condition fails with the supplied gauge".into());
                return Ok(v);
            }
            a
        }
        None => match derive_gauge(&l, &c.generator, table) {
            Ok(a) => {
                v.gauge = Some(a.to_string());
                v.residual = Some(Expr::zero().to_string());
                a
            }
            Err(GaugeError::Undetermined(e)) => return Err(NoetherError::from(e).into()),
            Err(e) => {
                if let GaugeError::QuadraticObstruction(t) = &e {
                    v.obstruction = t.iter().map(|(k, c)| (k.to_string(), c.to_string())).collect();
                }
                v.error = Some(e.to_string());
                return Ok(v);
            }
        },
    };
    let class = classify(&c.generator, &gauge, m)?;
    let sym = NoetherSymmetry {
        gen: c.generator.clone(),
        gauge: gauge.clone(),
        residual: Expr::zero(),
        class,
    };
    let t = conserved_quantity(&l, &sym, index, table)?;
    v.class = Some(class.name().to_string());
    v.conserved = Some(t.expr.to_string());
    v.pass = true;
    if let Some(expected) = &c.expected_gauge {
        let expected = expected.normalize();
        let satisfies = noether_residual(&l, &c.generator, &expected, table)
            .is_zero_with(zero)
            .map_err(NoetherError::from)?;
        let sign_flipped = expected != Expr::zero()
            && (expected.clone() + gauge.clone())
                .is_zero_with(zero)
                .map_err(NoetherError::from)?;
        let message = if satisfies {
            format!("expected gauge {expected} also satisfies the condition")
        } else if sign_flipped {
            format!("expected gauge {expected} has the opposite sign of {gauge}; with it the condition fails")
        } else {
            format!("expected gauge {expected} differs from {gauge} and fails the condition")
        };
        v.gauge_note = Some(GaugeNote {
            expected: expected.to_string(),
            expected_satisfies: satisfies,
            sign_flipped,
            message,
        });
    }
    Ok(v)
}

pub fn verify(f: &MetricFile, candidates: &[Candidate], zero: &ZeroTest) -> Result<Outcome, CliError> {
    let verdicts = candidates
        .iter()
        .enumerate()
        .map(|(i, c)| verdict(&f.metric, c, i, zero))
        .collect::<Result<Vec<_>, _>>()?;
    let all_pass = verdicts.iter().all(|v| v.pass);
    let out = VerifyOutput {
        metric: info(f),
        candidates: verdicts,
        all_pass,
    };
    let code = if all_pass { exit::OK } else { exit::CHECK_FAILED };
    Ok(Outcome::new(&out, out.human(), code))
}

/// The parts of a `noether` JSON report that `geodesic-check` reads back.
#[derive(Debug, Deserialize)]
pub struct QuantityFile {
    pub metric: Option<MetricInfo>,
    pub conserved: Vec<ConservedJson>,
}

/// Parses exported quantities against the metric, in canonical form.
pub fn load_quantities(f: &MetricFile, text: &str, path: &str) -> Result<Vec<(String, Expr)>, CliError> {
    let q: QuantityFile =
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("{path}: not a quantity report: {e}")))?;
    if let Some(m) = &q.metric {
        if m.hash != f.hash() {
            return Err(CliError::Input(format!("{path}: quantities were computed for a different metric")));
        }
    }
    q.conserved
        .iter()
        .map(|c| {
            parse_expression(&c.expr, f.metric.table())
                .map(|e| (c.label.clone(), e.normalize()))
                .map_err(|e| CliError::Input(format!("{path}: {}: {e}", c.label)))
        })
        .collect()
}

pub struct GeodesicArgs {
    pub init: Vec<f64>,
    pub s_end: f64,
    pub step: f64,
    pub params: BTreeMap<String, f64>,
    pub threshold: f64,
}

/// Integrates one geodesic and reports the drift of each quantity; with no
/// quantities the Lagrangian is checked.
pub fn geodesic_check(
    f: &MetricFile,
    quantities: Option<Vec<(String, Expr)>>,
    args: &GeodesicArgs,
) -> Result<Outcome, CliError> {
    let m = &f.metric;
    let n = m.dim();
    if args.init.len() != 2 * n {
        return Err(CliError::Input(format!(
            "--init needs {} values (positions then velocities), got {}",
            2 * n,
            args.init.len()
        )));
    }
    let mut values = f.bindings.clone();
    values.extend(args.params.iter().map(|(k, v)| (k.clone(), *v)));
    let params = m.bind_params(&values).map_err(|e| CliError::Input(e.to_string()))?;
    let init = GeodesicState::new(0.0, args.init[..n].to_vec(), args.init[n..].to_vec());
    let traj = integrate_geodesic(m, &init, args.s_end, args.step, &params)?;
    let quantities = quantities.unwrap_or_else(|| vec![("L".into(), lagrangian_of(m))]);
    let mut rows = Vec::with_capacity(quantities.len());
    for (id, e) in &quantities {
        let d = expression_drift(id, e, &traj)?;
        rows.push(DriftJson {
            id: id.clone(),
            expr: e.to_string(),
            t0: d.t0,
            max_abs_drift: d.max_abs_drift,
            pass: d.max_abs_drift <= args.threshold,
        });
    }
    let all_pass = rows.iter().all(|r| r.pass);
    let out = GeodesicOutput {
        metric: info(f),
        step: args.step,
        s_end: args.s_end,
        samples: traj.len(),
        threshold: args.threshold,
        quantities: rows,
        all_pass,
    };
    let code = if all_pass { exit::OK } else { exit::CHECK_FAILED };
    Ok(Outcome::new(&out, out.human(), code))
}
