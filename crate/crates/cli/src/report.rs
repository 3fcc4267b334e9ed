//! Serializable reports. The human rendering is built from the same
//! structures as the JSON, so both show the same expressions.

use std::fmt::Write as _;

use conslaw_core::geometry::{CurvatureReport, FlatSection, Metric};
use conslaw_core::noether::{AnsatzBasis, ConjectureResult, Counts, StructureConstants, SymmetryReport};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MetricInfo {
    pub hash: String,
    pub coords: Vec<String>,
    pub params: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CurvatureJson {
    pub flat: bool,
    pub sections: Vec<Vec<String>>,
    /// `R^a_bcd` entries with `c < d`, keyed `"a,b,c,d"` by coordinate name.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub riemann: Vec<(String, String)>,
}

impl CurvatureJson {
    pub fn new(m: &Metric, flat: bool, sections: &[FlatSection]) -> Self {
        CurvatureJson {
            flat,
            sections: sections.iter().map(|s| s.names(m)).collect(),
            riemann: Vec::new(),
        }
    }

    pub fn with_components(m: &Metric, r: &CurvatureReport) -> Self {
        let name = |i: usize| m.coords()[i].name().to_string();
        let mut out = CurvatureJson::new(m, r.is_flat, &r.flat_sections);
        out.riemann = r
            .riemann
            .nonzero()
            .iter()
            .filter(|((_, _, c, d), _)| c < d)
            .map(|((a, b, c, d), e)| (format!("{},{},{},{}", name(*a), name(*b), name(*c), name(*d)), e.to_string()))
            .collect();
        out
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CurvatureOutput {
    pub metric: MetricInfo,
    pub curvature: CurvatureJson,
}

impl CurvatureOutput {
    pub fn human(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "metric {}", self.metric.hash);
        if self.curvature.riemann.is_empty() {
            let _ = writeln!(s, "Riemann tensor vanishes");
        } else {
            let _ = writeln!(s, "nonzero Riemann components R^a_bcd (c < d):");
            for (k, v) in &self.curvature.riemann {
                let _ = writeln!(s, "  R[{k}] = {v}");
            }
        }
        let _ = writeln!(s, "flat: {}", self.curvature.flat);
        let _ = writeln!(s, "flat orthogonal sections: {}", sections_text(&self.curvature.sections));
        s
    }
}

fn sections_text(sections: &[Vec<String>]) -> String {
    if sections.is_empty() {
        return "none".into();
    }
    sections.iter().map(|s| format!("{{{}}}", s.join(", "))).collect::<Vec<_>>().join(" ")
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct AnsatzJson {
    pub s_degree: u32,
    pub coord_degree: u32,
    pub gauge_s_degree: u32,
    pub gauge_coord_degree: u32,
    pub extra_functions: Vec<String>,
}

impl From<&AnsatzBasis> for AnsatzJson {
    fn from(b: &AnsatzBasis) -> Self {
        AnsatzJson {
            s_degree: b.s_degree,
            coord_degree: b.coord_degree,
            gauge_s_degree: b.s_degree + 1,
            gauge_coord_degree: b.coord_degree + 1,
            extra_functions: b.extra_functions.iter().map(|e| e.to_string()).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SymmetryJson {
    pub label: String,
    pub xi: String,
    pub eta: Vec<String>,
    pub gauge: String,
    pub class: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ConservedJson {
    pub label: String,
    pub expr: String,
    pub source: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ConstantJson {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub value: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct StructureJson {
    pub closed: bool,
    pub offending: Option<(usize, usize)>,
    pub antisymmetric: bool,
    pub jacobi: bool,
    /// Nonzero `c^k_ij` with `i < j`.
    pub nonzero: Vec<ConstantJson>,
}

impl StructureJson {
    pub fn new(sc: &StructureConstants, antisymmetric: bool, jacobi: bool) -> Self {
        StructureJson {
            closed: sc.closed,
            offending: sc.offending,
            antisymmetric,
            jacobi,
            nonzero: sc
                .nonzero()
                .into_iter()
                .map(|(i, j, k, e)| ConstantJson { i, j, k, value: e.to_string() })
                .collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CountsJson {
    pub total: usize,
    pub isometries: usize,
    pub lagrangian: usize,
    pub new: usize,
}

impl From<Counts> for CountsJson {
    fn from(c: Counts) -> Self {
        CountsJson {
            total: c.total,
            isometries: c.isometries,
            lagrangian: c.lagrangian,
            new: c.new,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ConjectureJson {
    pub section: Vec<String>,
    pub m: usize,
    pub form_pass: bool,
    pub missing: Vec<String>,
    pub new_count: usize,
    pub count_pass: bool,
}

impl ConjectureJson {
    pub fn new(m: &Metric, c: &ConjectureResult) -> Self {
        let names = |v: &[usize]| v.iter().map(|i| m.coords()[*i].name().to_string()).collect();
        ConjectureJson {
            section: names(&c.section),
            m: c.m,
            form_pass: c.form_pass,
            missing: names(&c.missing),
            new_count: c.new_count,
            count_pass: c.count_pass,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct NoetherOutput {
    pub metric: MetricInfo,
    pub ansatz: AnsatzJson,
    pub symmetries: Vec<SymmetryJson>,
    pub conserved: Vec<ConservedJson>,
    pub structure_constants: StructureJson,
    pub counts: CountsJson,
    pub predicted: Option<CountsJson>,
    pub conjecture: Option<ConjectureJson>,
    pub curvature: CurvatureJson,
}

impl NoetherOutput {
    pub fn new(info: MetricInfo, m: &Metric, r: &SymmetryReport, antisymmetric: bool, jacobi: bool) -> Self {
        NoetherOutput {
            metric: info,
            ansatz: (&r.ansatz).into(),
            symmetries: r
                .symmetries
                .iter()
                .enumerate()
                .map(|(i, s)| SymmetryJson {
                    label: format!("X{i}"),
                    xi: s.gen.xi.to_string(),
                    eta: s.gen.eta.iter().map(|e| e.to_string()).collect(),
                    gauge: s.gauge.to_string(),
                    class: s.class.name().to_string(),
                })
                .collect(),
            conserved: r
                .conserved
                .iter()
                .map(|q| ConservedJson {
                    label: q.label.clone(),
                    expr: q.expr.to_string(),
                    source: q.source,
                })
                .collect(),
            structure_constants: StructureJson::new(&r.structure_constants, antisymmetric, jacobi),
            counts: r.counts.into(),
            predicted: r.predicted.map(Into::into),
            conjecture: r.conjecture.as_ref().map(|c| ConjectureJson::new(m, c)),
            curvature: CurvatureJson::new(m, r.flat, &r.sections),
        }
    }

    pub fn human(&self) -> String {
        let mut s = String::new();
        let a = &self.ansatz;
        let _ = writeln!(s, "metric {}", self.metric.hash);
        let _ = writeln!(
            s,
            "ansatz: s-degree {}, coordinate degree {}, gauge ({}, {}), functions [{}]",
            a.s_degree,
            a.coord_degree,
            a.gauge_s_degree,
            a.gauge_coord_degree,
            a.extra_functions.join(", ")
        );
        let _ = writeln!(s, "\n{} Noether symmetries:", self.symmetries.len());
        for sym in &self.symmetries {
            let mut parts = Vec::new();
            if sym.xi != "0" {
                parts.push(format!("({}) d/ds", sym.xi));
            }
            for (c, e) in self.metric.coords.iter().zip(&sym.eta) {
                if e != "0" {
                    parts.push(format!("({e}) d/d{c}"));
                }
            }
            let _ = writeln!(s, "  {:<4}[{}] {}   A = {}", sym.label, sym.class, parts.join(" + "), sym.gauge);
        }
        let _ = writeln!(s, "\nconserved quantities:");
        for q in &self.conserved {
            let _ = writeln!(s, "  {} = {}   (from X{})", q.label, q.expr, q.source);
        }
        let sc = &self.structure_constants;
        let _ = writeln!(
            s,
            "\nstructure constants: closed {}, antisymmetric {}, Jacobi {}",
            sc.closed, sc.antisymmetric, sc.jacobi
        );
        if let Some((i, j)) = sc.offending {
            let _ = writeln!(s, "  [X{i}, X{j}] leaves the span");
        }
        for c in &sc.nonzero {
            let _ = writeln!(s, "  c^{}_{},{} = {}", c.k, c.i, c.j, c.value);
        }
        let c = &self.counts;
        let _ = writeln!(
            s,
            "\ncounts: total {}, isometries {}, lagrangian {}, new {}",
            c.total, c.isometries, c.lagrangian, c.new
        );
        if let Some(p) = &self.predicted {
            let _ = writeln!(
                s,
                "predicted for flat space: total {}, isometries {}, lagrangian {}, new {} ({})",
                p.total,
                p.isometries,
                p.lagrangian,
                p.new,
                if p == c { "match" } else { "MISMATCH" }
            );
        }
        let _ = writeln!(s, "flat: {}", self.curvature.flat);
        let _ = writeln!(s, "flat orthogonal sections: {}", sections_text(&self.curvature.sections));
        if let Some(j) = &self.conjecture {
            let _ = writeln!(
                s,
                "section {{{}}}: s d/dx^i in span {}{}, new count {} vs m = {} {}",
                j.section.join(", "),
                if j.form_pass { "pass" } else { "FAIL" },
                if j.missing.is_empty() { String::new() } else { format!(" (missing {})", j.missing.join(", ")) },
                j.new_count,
                j.m,
                if j.count_pass { "pass" } else { "FAIL" }
            );
        }
        s
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GaugeNote {
    pub expected: String,
    pub expected_satisfies: bool,
    /// The expected gauge equals the negative of the one used.
    pub sign_flipped: bool,
    pub message: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct VerdictJson {
    pub label: String,
    pub xi: String,
    pub eta: Vec<String>,
    pub pass: bool,
    /// `supplied` or `derived`.
    pub gauge_source: String,
    pub gauge: Option<String>,
    pub residual: Option<String>,
    pub class: Option<String>,
    pub conserved: Option<String>,
    pub error: Option<String>,
    /// Velocity-quadratic terms no gauge can absorb, keyed by monomial.
    pub obstruction: Vec<(String, String)>,
    pub gauge_note: Option<GaugeNote>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct VerifyOutput {
    pub metric: MetricInfo,
    pub candidates: Vec<VerdictJson>,
    pub all_pass: bool,
}

impl VerifyOutput {
    pub fn human(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "metric {}", self.metric.hash);
        for v in &self.candidates {
            let _ = writeln!(s, "{}: {}", v.label, if v.pass { "PASS" } else { "FAIL" });
            let _ = writeln!(s, "  xi = {}; eta = [{}]", v.xi, v.eta.join(", "));
            if let Some(g) = &v.gauge {
                let _ = writeln!(s, "  A = {g} ({})", v.gauge_source);
            }
            if let Some(r) = &v.residual {
                let _ = writeln!(s, "  residual = {r}");
            }
            if let Some(c) = &v.class {
                let _ = writeln!(s, "  class: {c}");
            }
            if let Some(t) = &v.conserved {
                let _ = writeln!(s, "  T = {t}");
            }
            if let Some(e) = &v.error {
                let _ = writeln!(s, "  {e}");
            }
            for (k, c) in &v.obstruction {
                let _ = writeln!(s, "    coefficient of {k}: {c}");
            }
            if let Some(n) = &v.gauge_note {
                let _ = writeln!(s, "  note: {}", n.message);
            }
        }
        let _ = writeln!(s, "{}", if self.all_pass { "all candidates pass" } else { "some candidates fail" });
        s
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct DriftJson {
    pub id: String,
    pub expr: String,
    pub t0: f64,
    pub max_abs_drift: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GeodesicOutput {
    pub metric: MetricInfo,
    pub step: f64,
    pub s_end: f64,
    pub samples: usize,
    pub threshold: f64,
    pub quantities: Vec<DriftJson>,
    pub all_pass: bool,
}

impl GeodesicOutput {
    pub fn human(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "metric {}", self.metric.hash);
        let _ = writeln!(
            s,
            "RK4 step {} to s = {} ({} samples), threshold {:e}",
            self.step, self.s_end, self.samples, self.threshold
        );
        let _ = writeln!(s, "{:<8} {:>22} {:>12}  status", "quantity", "initial", "max drift");
        for q in &self.quantities {
            let _ = writeln!(
                s,
                "{:<8} {:>22.15e} {:>12.3e}  {}",
                q.id,
                q.t0,
                q.max_abs_drift,
                if q.pass { "ok" } else { "EXCEEDED" }
            );
        }
        s
    }
}
