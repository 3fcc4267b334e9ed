use conslaw_core::expr::{parse_expression, Expr, ZeroTest};
use conslaw_core::geometry::Metric;
use conslaw_core::noether::{
    in_span, predicted_flat_count, scaling_exclusion_check, solve_noether, symmetry_report, AnsatzBasis, Generator,
    SymmetryClass,
};

fn bertotti() -> Metric {
    Metric::parse(
        &["t", "x", "y", "z"],
        &["a"],
        &[("t", "t", "cosh(x/a)^2"), ("x", "x", "-1"), ("y", "y", "-1"), ("z", "z", "-1")],
    )
    .unwrap()
}

fn euclid(n: usize) -> Metric {
    let names = ["x", "y", "z"];
    let entries: Vec<(&str, &str, &str)> = names[..n].iter().map(|c| (*c, *c, "1")).collect();
    Metric::parse(&names[..n], &[], &entries).unwrap()
}

fn gen(m: &Metric, xi: &str, eta: &[&str]) -> Generator {
    let p = |s: &str| parse_expression(s, m.table()).unwrap();
    Generator::new(p(xi), eta.iter().map(|e| p(e)).collect())
}

fn bertotti_basis(m: &Metric) -> AnsatzBasis {
    let f = ["sin(t/a)", "cos(t/a)", "sinh(x/a)/cosh(x/a)"]
        .iter()
        .map(|s| parse_expression(s, m.table()).unwrap())
        .collect();
    AnsatzBasis::new(2, 2, f)
}

#[test]
fn bertotti_symmetries() {
    let m = bertotti();
    let r = symmetry_report(&m, &bertotti_basis(&m), &ZeroTest::default()).unwrap();
    assert_eq!((r.counts.total, r.counts.isometries, r.counts.lagrangian, r.counts.new), (9, 6, 1, 2));
    let gens: Vec<Generator> = r.symmetries.iter().map(|s| s.gen.clone()).collect();
    for (xi, eta) in [
        ("0", ["1", "0", "0", "0"]),
        ("0", ["0", "0", "z", "-y"]),
        ("0", ["0", "0", "0", "1"]),
        ("0", ["0", "0", "1", "0"]),
        ("0", ["-tanh(x/a)*sin(t/a)", "cos(t/a)", "0", "0"]),
        ("0", ["tanh(x/a)*cos(t/a)", "sin(t/a)", "0", "0"]),
        ("1", ["0", "0", "0", "0"]),
        ("0", ["0", "0", "s", "0"]),
        ("0", ["0", "0", "0", "s"]),
    ] {
        assert!(in_span(&gen(&m, xi, &eta), &gens, m.table()).unwrap(), "{xi} {eta:?}");
    }
    let y = r.symmetries.iter().find(|s| s.gen == gen(&m, "0", &["0", "0", "s", "0"])).unwrap();
    assert_eq!(y.gauge, parse_expression("-2*y", m.table()).unwrap().normalize());
    assert!(!r.flat);
    assert_eq!(r.sections.len(), 1);
    assert_eq!(r.sections[0].coords, vec![2, 3]);
    assert!(r.conjecture.unwrap().passed());
}

#[test]
fn bertotti_printed_x4_is_not_a_symmetry() {
    let m = bertotti();
    let syms = solve_noether(&m, &bertotti_basis(&m)).unwrap();
    let gens: Vec<Generator> = syms.iter().map(|s| s.gen.clone()).collect();
    let printed = gen(&m, "0", &["-(1/a)*tanh(x/a)*sin(t/a)", "cos(t/a)", "0", "0"]);
    assert!(!in_span(&printed, &gens, m.table()).unwrap());
}

#[test]
fn flat_counts() {
    for n in 1..=3 {
        let syms = solve_noether(&euclid(n), &AnsatzBasis::default()).unwrap();
        let want = predicted_flat_count(n as i64).unwrap();
        let count = |c| syms.iter().filter(|s| s.class == c).count();
        assert_eq!(syms.len(), want.total, "n = {n}");
        assert_eq!(count(SymmetryClass::Isometry), want.isometries);
        assert_eq!(count(SymmetryClass::New), want.new);
    }
}

#[test]
fn truncated_s_degree_keeps_s_free_symmetries() {
    let m = euclid(3);
    let syms = solve_noether(&m, &AnsatzBasis::new(0, 2, Vec::new())).unwrap();
    assert_eq!(syms.len(), 7);
    assert!(syms.iter().all(|s| !s.gen.components().any(|c| c.contains(m.table().s()))));
}

#[test]
fn scaling_is_excluded() {
    for m in [euclid(3), bertotti()] {
        let table = scaling_exclusion_check(&m).unwrap();
        for (k, c) in table {
            let coeff_of_l = -m.lagrangian_poly().to_expr();
            assert_eq!(c, coeff_of_l.velocity_coefficients().unwrap()[&k]);
        }
        let syms = solve_noether(&m, &AnsatzBasis::default()).unwrap();
        let gens: Vec<Generator> = syms.iter().map(|s| s.gen.clone()).collect();
        let scaling = Generator::new(Expr::sym(m.table().s()), vec![Expr::zero(); m.dim()]);
        assert!(!in_span(&scaling, &gens, m.table()).unwrap());
    }
}
