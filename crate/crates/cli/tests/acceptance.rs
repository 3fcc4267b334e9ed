//! Acceptance criteria, one line each. Runs as a plain binary so the lines
//! show up in `cargo test` output.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use conslaw_cli::report::{CurvatureOutput, GeodesicOutput, NoetherOutput, VerifyOutput};
use conslaw_core::expr::{parse_expression, Expr, Poly, SymbolTable};
use conslaw_core::geometry::{christoffel, inverse_metric, riemann, Metric};
use conslaw_core::noether::{
    in_span, lie_bracket, predicted_flat_count, scaling_exclusion_check, solve_noether, span_coefficients,
    AnsatzBasis, Generator,
};
use conslaw_core::numeric::{integrate_geodesic, GeodesicState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EUCLID_RUNTIME: Duration = Duration::from_secs(10);
const BERTOTTI_RUNTIME: Duration = Duration::from_secs(30);
const COUNTING_RUNTIME: Duration = Duration::from_secs(60);
const DRIFT_RUNTIME: Duration = Duration::from_secs(30);
const DRIFT_TOL: f64 = 1e-6;
const CONTROL_MIN: f64 = 1e-3;
const DRIFT_STEP: f64 = 1e-3;
const DRIFT_S_END: f64 = 10.0;
const ORDER_RANGE: (f64, f64) = (12.0, 20.0);

type Outcome = Result<String, String>;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn scratch(name: &str) -> PathBuf {
    Path::new(env!("CARGO_TARGET_TMPDIR")).join(name)
}

/// Runs the binary and returns stdout with the exit code.
fn conslaw(args: &[&str]) -> (String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_conslaw")).args(args).output().expect("binary runs");
    (String::from_utf8(out.stdout).unwrap(), out.status.code().unwrap_or(-1))
}

fn json<T: serde::de::DeserializeOwned>(args: &[&str]) -> Result<(T, String), String> {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let (stdout, code) = conslaw(&full);
    if code != 0 {
        return Err(format!("`conslaw {}` exited with {code}", args.join(" ")));
    }
    let v = serde_json::from_str(&stdout).map_err(|e| format!("bad JSON: {e}"))?;
    Ok((v, stdout))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn metric(name: &str) -> Metric {
    let text = std::fs::read_to_string(fixture(name)).unwrap();
    conslaw_cli::MetricFile::parse(&text, name).unwrap().metric
}

fn expr(t: &SymbolTable, s: &str) -> Expr {
    parse_expression(s, t).unwrap_or_else(|e| panic!("`{s}`: {e}"))
}

fn generator(t: &SymbolTable, xi: &str, eta: &[&str]) -> Generator {
    Generator::new(expr(t, xi), eta.iter().map(|e| expr(t, e)).collect())
}

fn generators(t: &SymbolTable, r: &NoetherOutput) -> Vec<Generator> {
    r.symmetries
        .iter()
        .map(|s| Generator::new(expr(t, &s.xi), s.eta.iter().map(|e| expr(t, e)).collect()))
        .collect()
}

/// `Some(r)` with `a = r b` for a nonzero rational `r`.
fn rational_ratio(a: &Poly, b: &Poly) -> Option<Expr> {
    let (m, cb) = b.terms().next()?;
    let ca = a.terms().find(|(ma, _)| *ma == m).map(|(_, c)| c.clone())?;
    let r = ca / cb;
    (a - &b.scale(&r)).is_zero().then(|| Expr::Rational(r))
}

/// Looks up the conserved quantity of the solved symmetry proportional
/// to `target`.
fn quantity_for(t: &SymbolTable, r: &NoetherOutput, target: &Generator) -> Option<Poly> {
    let gens = generators(t, r);
    let k = gens.iter().position(|g| {
        matches!(span_coefficients(g, std::slice::from_ref(target), t), Ok(Some(c)) if c[0] != Expr::zero() && c[0].as_rational().is_some())
    })?;
    let q = r.conserved.iter().find(|q| q.source == k)?;
    Some(expr(t, &q.expr).to_poly())
}

fn euclid_paper(t: &SymbolTable) -> Vec<Generator> {
    vec![
        generator(t, "0", &["1", "0", "0"]),
        generator(t, "0", &["0", "1", "0"]),
        generator(t, "0", &["0", "0", "1"]),
        generator(t, "0", &["-z", "0", "x"]),
        generator(t, "0", &["y", "-x", "0"]),
        generator(t, "0", &["0", "z", "-y"]),
        generator(t, "1", &["0", "0", "0"]),
        generator(t, "s^2", &["s*x", "s*y", "s*z"]),
        generator(t, "2*s", &["x", "y", "z"]),
        generator(t, "0", &["s", "0", "0"]),
        generator(t, "0", &["0", "s", "0"]),
        generator(t, "0", &["0", "0", "s"]),
    ]
}

fn bertotti_paper(t: &SymbolTable) -> Vec<Generator> {
    vec![
        generator(t, "0", &["1", "0", "0", "0"]),
        generator(t, "0", &["0", "0", "z", "-y"]),
        generator(t, "0", &["0", "0", "0", "1"]),
        generator(t, "0", &["0", "0", "1", "0"]),
        generator(t, "0", &["-tanh(x/a)*sin(t/a)", "cos(t/a)", "0", "0"]),
        generator(t, "0", &["tanh(x/a)*cos(t/a)", "sin(t/a)", "0", "0"]),
        generator(t, "1", &["0", "0", "0", "0"]),
        generator(t, "0", &["0", "0", "s", "0"]),
        generator(t, "0", &["0", "0", "0", "s"]),
    ]
}

fn euclid_report() -> Result<(NoetherOutput, String, Duration), String> {
    let start = Instant::now();
    let path = fixture("euclid3.metric");
    let (r, raw) = json::<NoetherOutput>(&["noether", path.to_str().unwrap()])?;
    Ok((r, raw, start.elapsed()))
}

fn bertotti_report() -> Result<(NoetherOutput, String, Duration), String> {
    let start = Instant::now();
    let path = fixture("bertotti.metric");
    let (r, raw) = json::<NoetherOutput>(&["noether", path.to_str().unwrap()])?;
    Ok((r, raw, start.elapsed()))
}

fn criterion_1() -> Outcome {
    let m = metric("euclid3.metric");
    let t = m.table();
    let (r, _, elapsed) = euclid_report()?;
    ensure(r.symmetries.len() == 12, || format!("{} symmetries", r.symmetries.len()))?;
    let gens = generators(t, &r);
    for (i, x) in euclid_paper(t).iter().enumerate() {
        ensure(in_span(x, &gens, t).unwrap(), || format!("X{i} = {x} not in span"))?;
    }
    let c = r.counts;
    ensure((c.isometries, c.lagrangian, c.new) == (6, 1, 5), || format!("counts {c:?}"))?;
    let p = predicted_flat_count(3).unwrap();
    ensure(
        r.predicted.is_some_and(|q| (q.total, q.isometries, q.lagrangian, q.new) == (p.total, p.isometries, p.lagrangian, p.new))
            && (c.total, c.isometries, c.new) == (p.total, p.isometries, p.new),
        || format!("predicted {:?} vs {c:?}", r.predicted),
    )?;
    ensure(elapsed < EUCLID_RUNTIME, || format!("took {elapsed:?}"))?;
    Ok(format!("12 symmetries span X0..X11, counts 6/1/5 match prediction, {elapsed:.2?}"))
}

fn criterion_2() -> Outcome {
    let m = metric("euclid3.metric");
    let t = m.table();
    let (r, _, _) = euclid_report()?;
    let paper = euclid_paper(t);
    let l = "(xdot^2 + ydot^2 + zdot^2)";
    let expected = [
        (7, format!("s^2*{l} - 2*s*(x*xdot + y*ydot + z*zdot) + x^2 + y^2 + z^2")),
        (8, format!("s*{l} - (x*xdot + y*ydot + z*zdot)")),
        (9, "s*xdot - x".to_string()),
        (10, "s*ydot - y".to_string()),
        (11, "s*zdot - z".to_string()),
    ];
    let mut scales = Vec::new();
    for (i, want) in expected {
        let got = quantity_for(t, &r, &paper[i]).ok_or_else(|| format!("no solved symmetry proportional to X{i}"))?;
        let want = expr(t, &want).to_poly();
        let scale = rational_ratio(&got, &want).ok_or_else(|| format!("T for X{i} is {got}, not a multiple of {want}"))?;
        scales.push(format!("X{i}:{scale}"));
    }
    Ok(format!("T7..T11 match up to scale ({})", scales.join(" ")))
}

fn criterion_3() -> Outcome {
    let m = metric("bertotti.metric");
    let t = m.table();
    let (r, _, elapsed) = bertotti_report()?;
    ensure(r.symmetries.len() == 9, || format!("{} symmetries", r.symmetries.len()))?;
    let gens = generators(t, &r);
    for (i, x) in bertotti_paper(t).iter().enumerate() {
        ensure(in_span(x, &gens, t).unwrap(), || format!("X{i} = {x} not in span"))?;
    }
    let path = fixture("bertotti.metric");
    let (c, _) = json::<CurvatureOutput>(&["curvature", path.to_str().unwrap()])?;
    ensure(!c.curvature.flat, || "reported flat".into())?;
    ensure(c.curvature.sections == vec![vec!["y".to_string(), "z".to_string()]], || {
        format!("sections {:?}", c.curvature.sections)
    })?;
    let j = r.conjecture.as_ref().ok_or("no conjecture check in report")?;
    ensure(j.form_pass && j.count_pass && j.m == 2 && j.new_count == 2, || format!("{j:?}"))?;
    let news: Vec<Generator> = r
        .symmetries
        .iter()
        .zip(&gens)
        .filter(|(s, _)| s.class == "new")
        .map(|(_, g)| g.clone())
        .collect();
    let want = [generator(t, "0", &["0", "0", "s", "0"]), generator(t, "0", &["0", "0", "0", "s"])];
    for w in &want {
        ensure(in_span(w, &news, t).unwrap(), || format!("{w} missing from new symmetries"))?;
    }
    for g in &news {
        ensure(in_span(g, &want, t).unwrap(), || format!("unexpected new symmetry {g}"))?;
    }
    ensure(elapsed < BERTOTTI_RUNTIME, || format!("took {elapsed:?}"))?;
    Ok(format!("9 symmetries span X0..X8, section {{y, z}}, new = {{s d/dy, s d/dz}}, {elapsed:.2?}"))
}

fn random_diagonal_metric(rng: &mut ChaCha8Rng) -> Metric {
    let names = ["x", "y", "z"];
    let n = rng.gen_range(2..=3);
    let mut entries = Vec::new();
    for a in 0..n {
        let b = names[rng.gen_range(0..n)];
        let c = names[rng.gen_range(0..n)];
        let text = format!(
            "{} + {}*{}^2 + {}*{}*{}",
            rng.gen_range(1..=4),
            rng.gen_range(0..=3),
            b,
            rng.gen_range(-2..=2),
            b,
            c
        );
        entries.push((names[a].to_string(), names[a].to_string(), text));
    }
    let refs: Vec<(&str, &str, &str)> = entries.iter().map(|(a, b, c)| (a.as_str(), b.as_str(), c.as_str())).collect();
    Metric::parse(&names[..n], &[], &refs).unwrap()
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut metrics = vec![("euclid3".to_string(), metric("euclid3.metric")), ("bertotti".to_string(), metric("bertotti.metric"))];
    for i in 0..5 {
        metrics.push((format!("random{i}"), random_diagonal_metric(&mut rng)));
    }
    for (name, m) in &metrics {
        let table = scaling_exclusion_check(m).map_err(|e| format!("{name}: {e}"))?;
        let t = m.table();
        let mut want = BTreeMap::new();
        for a in 0..m.dim() {
            for b in a..m.dim() {
                let g = m.component(a, b);
                if g == Expr::zero() {
                    continue;
                }
                let key = if a == b {
                    format!("{}^2", t.velocity(a))
                } else {
                    format!("{}*{}", t.velocity(a), t.velocity(b))
                };
                let scale = if a == b { 1 } else { 2 };
                want.insert(key, (-(g * Expr::int(scale))).normalize());
            }
        }
        let got: BTreeMap<String, Expr> = table.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
        ensure(got == want, || format!("{name}: obstruction {got:?}, want {want:?}"))?;
        let basis = if name == "bertotti" {
            let path = fixture("bertotti.metric");
            let text = std::fs::read_to_string(path).unwrap();
            AnsatzBasis::new(2, 2, conslaw_cli::MetricFile::parse(&text, "b").unwrap().basis)
        } else {
            AnsatzBasis::default()
        };
        let gens: Vec<Generator> = solve_noether(m, &basis)
            .map_err(|e| format!("{name}: {e}"))?
            .into_iter()
            .map(|s| s.gen)
            .collect();
        let scaling = Generator::new(Expr::sym(t.s()), vec![Expr::zero(); m.dim()]);
        ensure(!in_span(&scaling, &gens, t).unwrap(), || format!("{name}: s d/ds in the solved span"))?;
    }
    Ok(format!("-g_ab obstruction on {} metrics, s d/ds never in span", metrics.len()))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let names = ["x", "y", "z"];
    let mut found = Vec::new();
    for (n, want) in [(1usize, (5, 1, 3)), (2, (8, 3, 4)), (3, (12, 6, 5))] {
        let entries: Vec<(&str, &str, &str)> = names[..n].iter().map(|c| (*c, *c, "1")).collect();
        let m = Metric::parse(&names[..n], &[], &entries).unwrap();
        let syms = solve_noether(&m, &AnsatzBasis::default()).map_err(|e| e.to_string())?;
        let count = |c| syms.iter().filter(|s| s.class == c).count();
        use conslaw_core::noether::SymmetryClass::*;
        let got = (syms.len(), count(Isometry), count(New));
        let formula = (n * n + 3 * n + 6) / 2;
        ensure(got == want && got.0 == formula && count(LagrangianTranslation) == 1, || {
            format!("n = {n}: got {got:?}, want {want:?}")
        })?;
        found.push(format!("{}", got.0));
    }
    let elapsed = start.elapsed();
    ensure(elapsed < COUNTING_RUNTIME, || format!("took {elapsed:?}"))?;
    Ok(format!("n = 1, 2, 3 give {} symmetries, {elapsed:.2?}", found.join(", ")))
}

fn criterion_6() -> Outcome {
    let m = metric("bertotti.metric");
    let t = m.table();
    let gens = scratch("criterion6.generators");
    std::fs::write(&gens, "symmetry: s d/dy\neta[y] = s\nexpected_gauge = 2*y\n").unwrap();
    let path = fixture("bertotti.metric");
    let (r, _) = json::<VerifyOutput>(&["verify", path.to_str().unwrap(), gens.to_str().unwrap()])?;
    let v = &r.candidates[0];
    ensure(v.pass && v.gauge_source == "derived", || format!("{v:?}"))?;
    let a = expr(t, v.gauge.as_deref().unwrap_or("0")).normalize();
    ensure(a == expr(t, "-2*y").normalize(), || format!("derived A = {a}"))?;
    let q = expr(t, v.conserved.as_deref().unwrap_or("0")).to_poly();
    let scale = rational_ratio(&q, &expr(t, "s*ydot - y").to_poly()).ok_or_else(|| format!("T = {q}"))?;
    let note = v.gauge_note.as_ref().ok_or("no gauge note")?;
    ensure(note.sign_flipped && !note.expected_satisfies, || format!("{note:?}"))?;
    Ok(format!("A = {a}, T = {scale}*(s*ydot - y), printed 2*y flagged as sign flip"))
}

fn random_init(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..2 * n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    let mut control: f64 = 0.0;
    let (e, e_raw, _) = euclid_report()?;
    let (b, b_raw, _) = bertotti_report()?;
    for (name, report, raw) in [("euclid3", &e, e_raw), ("bertotti", &b, b_raw)] {
        let qfile = scratch(&format!("{name}.quantities.json"));
        std::fs::write(&qfile, &raw).unwrap();
        let mut corrupted: NoetherOutput = report.clone();
        let target = corrupted.conserved.len() - 1;
        corrupted.conserved[target].expr = format!("{} + x^2", corrupted.conserved[target].expr);
        let bad = scratch(&format!("{name}.corrupted.json"));
        std::fs::write(&bad, serde_json::to_string(&corrupted).unwrap()).unwrap();
        let path = fixture(&format!("{name}.metric"));
        let n = report.metric.coords.len();
        for _ in 0..3 {
            let init: Vec<String> = random_init(&mut rng, n).iter().map(|v| v.to_string()).collect();
            let init = init.join(",");
            let step = DRIFT_STEP.to_string();
            let s_end = DRIFT_S_END.to_string();
            let base = ["geodesic-check", path.to_str().unwrap(), "--init", &init, "--step", &step, "--s-end", &s_end];
            let mut args = base.to_vec();
            args.extend(["--quantities", qfile.to_str().unwrap()]);
            let (g, _) = json::<GeodesicOutput>(&args)?;
            ensure(g.quantities.len() == report.conserved.len(), || format!("{name}: quantity count"))?;
            for q in &g.quantities {
                worst = worst.max(q.max_abs_drift);
                ensure(q.max_abs_drift <= DRIFT_TOL, || format!("{name}: {} drifts {:e}", q.id, q.max_abs_drift))?;
            }
            let mut args = base.to_vec();
            args.extend(["--format", "json", "--quantities", bad.to_str().unwrap()]);
            let (stdout, code) = conslaw(&args);
            let g: GeodesicOutput = serde_json::from_str(&stdout).map_err(|e| format!("control: {e}"))?;
            ensure(code == 2 || code == 0, || format!("control exit {code}"))?;
            control = control.max(g.quantities[target].max_abs_drift);
        }
    }
    ensure(control > CONTROL_MIN, || format!("corrupted control drift only {control:e}"))?;
    let elapsed = start.elapsed();
    ensure(elapsed < DRIFT_RUNTIME, || format!("took {elapsed:?}"))?;
    Ok(format!("worst drift {worst:.1e} over 6 geodesics, control {control:.2e}, {elapsed:.2?}"))
}

fn random_polynomial_metric(rng: &mut ChaCha8Rng, n: usize) -> Metric {
    let names = ["x", "y", "z"];
    loop {
        let mut entries = Vec::new();
        for a in 0..n {
            for b in a..n {
                let u = names[rng.gen_range(0..n)];
                let v = names[rng.gen_range(0..n)];
                let text = if a == b {
                    format!("{} + {}*{u}*{v} + {}*{u}", rng.gen_range(2..=5), rng.gen_range(-1..=2), rng.gen_range(-1..=1))
                } else if rng.gen_bool(0.5) {
                    format!("{}*{u} + {}*{u}*{v}", rng.gen_range(-1..=1), rng.gen_range(-1..=1))
                } else {
                    "0".to_string()
                };
                entries.push((names[a].to_string(), names[b].to_string(), text));
            }
        }
        let refs: Vec<(&str, &str, &str)> = entries.iter().map(|(a, b, c)| (a.as_str(), b.as_str(), c.as_str())).collect();
        if let Ok(m) = Metric::parse(&names[..n], &[], &refs) {
            return m;
        }
    }
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut dims = Vec::new();
    for k in 0..10 {
        let m = random_polynomial_metric(&mut rng, 1 + k % 3);
        let n = m.dim();
        dims.push(n.to_string());
        let g = christoffel(&m).map_err(|e| e.to_string())?;
        let r = riemann(&m).map_err(|e| e.to_string())?;
        let low = r.lowered(&m);
        let idx = |a: usize, b: usize, c: usize, d: usize| ((a * n + b) * n + c) * n + d;
        let zero = |p: Poly| p.is_identically_zero().unwrap_or(false);
        let fail = |what: &str| format!("metric {k} (n = {n}): {what}");
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    ensure(zero(g.poly(a, b, c) - g.poly(a, c, b)), || fail("Christoffel symmetry"))?;
                    for d in 0..n {
                        ensure(zero(r.poly(a, b, c, d) + r.poly(a, b, d, c)), || fail("R^a_bcd antisymmetry"))?;
                        ensure(zero(&low[idx(a, b, c, d)] + &low[idx(b, a, c, d)]), || fail("R_abcd antisymmetry"))?;
                        ensure(zero(&low[idx(a, b, c, d)] - &low[idx(c, d, a, b)]), || fail("pair symmetry"))?;
                        ensure(
                            zero(&(r.poly(a, b, c, d) + r.poly(a, c, d, b)) + r.poly(a, d, b, c)),
                            || fail("first Bianchi"),
                        )?;
                    }
                }
            }
        }
        let inv = inverse_metric(&m).map_err(|e| e.to_string())?;
        for a in 0..n {
            for c in 0..n {
                let mut acc = Poly::zero();
                for b in 0..n {
                    acc += &(m.poly(a, b) * &inv[b][c].to_poly());
                }
                if a == c {
                    acc = &acc - &Expr::one().to_poly();
                }
                ensure(zero(acc), || fail("g g^-1 = 1"))?;
            }
        }
    }
    Ok(format!("all identities hold on 10 metrics (dims {})", dims.join(",")))
}

fn check_brackets(name: &str, t: &SymbolTable, r: &NoetherOutput) -> Result<usize, String> {
    let sc = &r.structure_constants;
    ensure(sc.closed && sc.antisymmetric && sc.jacobi, || {
        format!("{name}: closed {} antisymmetric {} jacobi {}", sc.closed, sc.antisymmetric, sc.jacobi)
    })?;
    let gens = generators(t, r);
    let n = gens.len();
    let mut c: BTreeMap<(usize, usize), Vec<Expr>> = BTreeMap::new();
    for e in &sc.nonzero {
        c.entry((e.i, e.j)).or_insert_with(|| vec![Expr::zero(); n])[e.k] = expr(t, &e.value);
    }
    let zeros = vec![Expr::zero(); n];
    for i in 0..n {
        for j in 0..n {
            let br = lie_bracket(&gens[i], &gens[j], t);
            let (coeffs, sign) = match i.cmp(&j) {
                std::cmp::Ordering::Less => (c.get(&(i, j)).unwrap_or(&zeros), 1),
                std::cmp::Ordering::Greater => (c.get(&(j, i)).unwrap_or(&zeros), -1),
                std::cmp::Ordering::Equal => (&zeros, 1),
            };
            for (comp, b) in br.components().enumerate() {
                let mut rhs = Expr::zero();
                for (k, ck) in coeffs.iter().enumerate() {
                    let gk = gens[k].components().nth(comp).unwrap().clone();
                    rhs = rhs + ck.clone() * gk * Expr::int(sign);
                }
                ensure((b.clone() - rhs).is_zero().unwrap_or(false), || format!("{name}: [X{i}, X{j}] mismatch"))?;
            }
        }
    }
    Ok(sc.nonzero.len())
}

fn criterion_9() -> Outcome {
    let (e, _, _) = euclid_report()?;
    let (b, _, _) = bertotti_report()?;
    let ne = check_brackets("euclid3", metric("euclid3.metric").table(), &e)?;
    let nb = check_brackets("bertotti", metric("bertotti.metric").table(), &b)?;
    Ok(format!("both algebras close; {ne} and {nb} nonzero constants reproduce every bracket"))
}

fn criterion_10() -> Outcome {
    let m = metric("bertotti.metric");
    let params = m.bind_params(&BTreeMap::from([("a".to_string(), 1.0)])).unwrap();
    let init = GeodesicState::new(0.0, vec![0.0, 0.3, 0.0, 0.0], vec![1.0, 0.4, 0.2, -0.1]);
    let drift = |h: f64| -> Result<f64, String> {
        let tr = integrate_geodesic(&m, &init, DRIFT_S_END, h, &params).map_err(|e| e.to_string())?;
        let l0 = tr.energy[0];
        Ok(tr.energy.iter().fold(0.0f64, |acc, l| acc.max((l - l0).abs())))
    };
    let (coarse, fine) = (drift(0.1)?, drift(0.05)?);
    let ratio = coarse / fine;
    ensure(ratio >= ORDER_RANGE.0 && ratio <= ORDER_RANGE.1, || {
        format!("drift {coarse:e} -> {fine:e}, ratio {ratio:.2}")
    })?;
    Ok(format!("L drift {coarse:.3e} at h = 0.1, {fine:.3e} at h = 0.05, ratio {ratio:.2}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("flat 3-space census", criterion_1),
        ("flat 3-space conserved quantities", criterion_2),
        ("Bertotti-Robinson-like census and flat section", criterion_3),
        ("scaling exclusion", criterion_4),
        ("flat counting formula", criterion_5),
        ("gauge sign discrepancy", criterion_6),
        ("numerical conservation", criterion_7),
        ("tensor identities", criterion_8),
        ("algebra closure", criterion_9),
        ("RK4 order", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let result = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
