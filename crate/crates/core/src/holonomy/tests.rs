use proptest::prelude::*;

use super::*;
use crate::maps::map_modular_vf;
use crate::testutil::polynomial;

fn zt() -> ZeroTest {
    ZeroTest::default()
}

fn chart(names: &[&str]) -> Arc<Chart> {
    Arc::new(Chart::new(names).unwrap())
}

fn poisson(c: &Arc<Chart>, entries: &[(&str, &str, &str)]) -> PoissonStructure {
    let e: Vec<(&str, &str, Expr)> = entries.iter().map(|(a, b, s)| (*a, *b, c.parse(s).unwrap())).collect();
    PoissonStructure::from_entries(c, &e, &zt()).unwrap()
}

fn line_fixture() -> (PoissonStructure, SubmanifoldSpec) {
    let pi = poisson(&chart(&["a", "b"]), &[("a", "b", "a")]);
    let n = SubmanifoldSpec::new(pi.chart(), &["a"]).unwrap();
    (pi, n)
}

fn leaf_fixture() -> (PoissonStructure, SubmanifoldSpec) {
    let pi = poisson(&chart(&["x", "y", "z", "w"]), &[("x", "y", "x"), ("z", "w", "1")]);
    let n = SubmanifoldSpec::new(pi.chart(), &["x", "y"]).unwrap();
    (pi, n)
}

/// Constant base point `b = 1` on `{a = 0}` with covector `f(t) db`.
fn line_path(pi: &PoissonStructure, f: &str) -> CotangentPath {
    CotangentPath::parse(pi.chart(), &["0", "1"], &["0", f], true).unwrap()
}

/// Unit circle in the (z, w) leaf with extra conormal components `ax dx + ay dy`.
fn leaf_loop(pi: &PoissonStructure, ax: &str, ay: &str) -> CotangentPath {
    CotangentPath::parse(
        pi.chart(),
        &["0", "0", "cos(2*pi*t)", "sin(2*pi*t)"],
        &[ax, ay, "2*pi*cos(2*pi*t)", "2*pi*sin(2*pi*t)"],
        true,
    )
    .unwrap()
}

fn param(s: &str) -> Expr {
    crate::expr::parse(s, &Chart::new(&[PARAM]).unwrap(), &[]).unwrap()
}

fn gl(f: &str) -> f64 {
    let e = param(f);
    let (x, w) = crate::paths::gauss_legendre(20);
    let mut s = 0.0;
    for p in 0..50 {
        for (x, w) in x.iter().zip(&w) {
            let t = (p as f64 + 0.5 + 0.5 * x) / 50.0;
            s += w * 0.5 / 50.0 * e.eval(&Env::new().with(PARAM, t)).unwrap();
        }
    }
    s
}

#[test]
fn submanifold_spec() {
    let c = chart(&["x", "y", "z"]);
    let n = SubmanifoldSpec::new(&c, &["z", "x"]).unwrap();
    assert_eq!(n.transverse(), &[0, 2]);
    assert_eq!(n.chart().coords().len(), 1);
    assert_eq!(n.restrict(&c.parse("x*y + z + y").unwrap()), Expr::var("y"));
    assert!(matches!(SubmanifoldSpec::new(&c, &["q"]), Err(Error::InvalidChart(_))));
    assert!(matches!(SubmanifoldSpec::new(&c, &["x", "x"]), Err(Error::InvalidChart(_))));
}

#[test]
fn restriction_examples() {
    let (pi, n) = leaf_fixture();
    let pi_n = restrict_poisson(&pi, &n, &zt()).unwrap();
    assert_eq!(pi_n.entry(0, 1), Expr::one());
    let (pi, n) = line_fixture();
    assert!(restrict_poisson(&pi, &n, &zt()).unwrap().bivector().is_zero_literal());
    let sympl = poisson(&chart(&["z", "w"]), &[("z", "w", "1")]);
    let bad = SubmanifoldSpec::new(sympl.chart(), &["z"]).unwrap();
    match restrict_poisson(&sympl, &bad, &zt()) {
        Err(Error::NotPoissonSubmanifold { component, .. }) => assert_eq!(component, ("w".into(), "z".into())),
        other => panic!("{other:?}"),
    }
}

#[test]
fn relative_modular_examples() {
    let (pi, n) = leaf_fixture();
    let lm = VolumeDensity::lebesgue(pi.chart());
    let ln = VolumeDensity::lebesgue(n.chart());
    let rel = relative_modular_vf(&pi, &lm, &ln, &n, &zt()).unwrap();
    assert_eq!(rel.components(), &[Expr::zero(), Expr::int(-1), Expr::zero(), Expr::zero()]);
    // It is minus the modular field of the inclusion.
    let pi_n = restrict_poisson(&pi, &n, &zt()).unwrap();
    let inc = map_modular_vf(&n.inclusion(), &pi_n, &pi, &ln, &lm, &zt()).unwrap();
    assert!(rel.add(&inc).unwrap().is_zero(&zt()).unwrap());

    let (pi, n) = line_fixture();
    let rel = relative_modular_vf(
        &pi,
        &VolumeDensity::lebesgue(pi.chart()),
        &VolumeDensity::lebesgue(n.chart()),
        &n,
        &zt(),
    )
    .unwrap();
    assert_eq!(rel.components(), &[Expr::zero(), Expr::int(-1)]);

    let open = SubmanifoldSpec::new::<&str>(pi.chart(), &[]).unwrap();
    let rho = VolumeDensity::new(pi.chart(), pi.chart().parse("exp(a*b)").unwrap(), &zt()).unwrap();
    let rho_n = VolumeDensity::new(open.chart(), open.chart().parse("exp(a*b)").unwrap(), &zt()).unwrap();
    assert!(relative_modular_vf(&pi, &rho, &rho_n, &open, &zt()).unwrap().is_zero(&zt()).unwrap());
}

#[test]
fn relative_field_depends_on_density_only_along_n() {
    let (pi, n) = leaf_fixture();
    let ln = VolumeDensity::lebesgue(n.chart());
    let base = relative_modular_vf(&pi, &VolumeDensity::lebesgue(pi.chart()), &ln, &n, &zt()).unwrap();
    let g = pi.chart().parse("exp(x*w + y^3 - x)").unwrap();
    let other = VolumeDensity::new(pi.chart(), g, &zt()).unwrap();
    let rel = relative_modular_vf(&pi, &other, &ln, &n, &zt()).unwrap();
    assert!(rel.sub(&base).unwrap().is_zero(&zt()).unwrap());
}

#[test]
fn vanishing_relative_field_means_tangent_modular_field() {
    let pi = poisson(&chart(&["x", "y", "z"]), &[("x", "y", "z")]);
    let n = SubmanifoldSpec::new(pi.chart(), &["z"]).unwrap();
    let rho = VolumeDensity::new(pi.chart(), pi.chart().parse("exp(x)").unwrap(), &zt()).unwrap();
    let rho_n = VolumeDensity::new(n.chart(), n.chart().parse("exp(x)").unwrap(), &zt()).unwrap();
    assert!(relative_modular_vf(&pi, &rho, &rho_n, &n, &zt()).unwrap().is_zero(&zt()).unwrap());
    let xm = modular_vf(&pi, &rho, &zt()).unwrap();
    assert!(crate::expr::is_zero(&n.restrict(&xm.at(2)), n.chart(), &zt()).unwrap());
    // The leaf example has a nonzero relative field and X_μ leaves N.
    let (pi, n) = leaf_fixture();
    let xm = modular_vf(&pi, &VolumeDensity::lebesgue(pi.chart()), &zt()).unwrap();
    assert!(!crate::expr::is_zero(&n.restrict(&xm.at(1)), n.chart(), &zt()).unwrap());
}

#[test]
fn line_fixture_closed_form() {
    let (pi, n) = line_fixture();
    for f in ["1", "t", "sin(2*pi*t)"] {
        let p = line_path(&pi, f);
        let h = transport(&pi, &n, &p, None, 1000).unwrap();
        let expected = (-gl(f)).exp();
        assert!((h.det - expected).abs() / expected < 1e-6, "{f}: {} vs {expected}", h.det);
        let h2 = transport(&pi, &n, &p, None, 2000).unwrap();
        assert!((h.det - h2.det).abs() < 1e-8);
        assert!(h.ode_error < 1e-8);
    }
}

#[test]
fn open_submanifold_has_trivial_holonomy() {
    let (pi, _) = line_fixture();
    let open = SubmanifoldSpec::new::<&str>(pi.chart(), &[]).unwrap();
    let p = CotangentPath::parse(pi.chart(), &["0", "1"], &["0", "1"], true).unwrap();
    let h = transport(&pi, &open, &p, None, 10).unwrap();
    assert_eq!(h.matrix.nrows(), 0);
    assert_eq!(h.det, 1.0);
}

#[test]
fn transport_rejects_paths_off_n() {
    let (pi, n) = line_fixture();
    let p = CotangentPath::parse(pi.chart(), &["1", "exp(t)"], &["exp(t)", "0"], false).unwrap();
    assert!(p.validate(&pi, 20, 1e-9).unwrap());
    assert!(matches!(transport(&pi, &n, &p, None, 10), Err(Error::InvalidPath(_))));
}

#[test]
fn leak_is_reported() {
    // {z = 0} is not a Poisson submanifold of w ∂z∧∂w, and [dw, dz] = −dw leaks.
    let pi = poisson(&chart(&["z", "w"]), &[("z", "w", "w")]);
    let n = SubmanifoldSpec::new(pi.chart(), &["z"]).unwrap();
    let p = CotangentPath::parse(pi.chart(), &["0", "1"], &["0", "1"], false).unwrap();
    match conormal_transport(&pi, &n, &p, None, 4) {
        Err(Error::ConormalLeak { direction, .. }) => assert_eq!(direction, "w"),
        other => panic!("{other:?}"),
    }
    assert!(matches!(transport(&pi, &n, &p, None, 4), Err(Error::NotPoissonSubmanifold { .. })));
}

#[test]
fn leaf_loop_identity() {
    let (pi, n) = leaf_fixture();
    let p = leaf_loop(&pi, "1 + t", "cos(2*pi*t)^2 + t");
    let r = verify_holonomy_identity(
        &pi,
        &n,
        &VolumeDensity::lebesgue(pi.chart()),
        &VolumeDensity::lebesgue(n.chart()),
        &p,
        1000,
        Quadrature::default(),
        &zt(),
    )
    .unwrap();
    assert!(r.loop_residual.unwrap() < 1e-6, "{r:?}");
    // ∫⟨−∂y, a⟩ = −∫ a_y = −(1/2 + 1/2).
    assert!((r.integral.value + 1.0).abs() < 1e-10);
    assert!((r.holonomy.det - (-1.0f64).exp()).abs() < 1e-6);
}

#[test]
fn line_fixture_identity() {
    let (pi, n) = line_fixture();
    for f in ["1", "t", "sin(2*pi*t)"] {
        let r = verify_holonomy_identity(
            &pi,
            &n,
            &VolumeDensity::lebesgue(pi.chart()),
            &VolumeDensity::lebesgue(n.chart()),
            &line_path(&pi, f),
            1000,
            Quadrature::default(),
            &zt(),
        )
        .unwrap();
        assert!(r.loop_residual.unwrap() < 1e-6);
    }
}

#[test]
fn loop_identity_is_independent_of_the_representative() {
    let (pi, n) = leaf_fixture();
    let p = leaf_loop(&pi, "t", "1 - t^2");
    let dens = [("1", "1"), ("exp(z + x*w)", "1 + z^2 + w^2")];
    let mut ints = Vec::new();
    for (m, nn) in dens {
        let rm = VolumeDensity::new(pi.chart(), pi.chart().parse(m).unwrap(), &zt()).unwrap();
        let rn = VolumeDensity::new(n.chart(), n.chart().parse(nn).unwrap(), &zt()).unwrap();
        let r = verify_holonomy_identity(&pi, &n, &rm, &rn, &p, 800, Quadrature::default(), &zt()).unwrap();
        assert!(r.loop_residual.unwrap() < 1e-6);
        ints.push(r.integral.value);
    }
    assert!((ints[0] - ints[1]).abs() < 1e-8);
}

#[test]
fn open_path_identity_with_normal_volumes() {
    let (pi, n) = leaf_fixture();
    // ż = −a_w, ẇ = a_z.
    let p = CotangentPath::parse(pi.chart(), &["0", "0", "t", "t^2"], &["1", "t", "2*t", "-1"], false).unwrap();
    let rm = VolumeDensity::new(pi.chart(), pi.chart().parse("exp(z + x) * (2 + w)").unwrap(), &zt()).unwrap();
    let rn = VolumeDensity::new(n.chart(), n.chart().parse("1 + z^2 + w^2").unwrap(), &zt()).unwrap();
    let r = verify_holonomy_identity(&pi, &n, &rm, &rn, &p, 1000, Quadrature::default(), &zt()).unwrap();
    assert!(r.loop_residual.is_none());
    assert!(r.open_residual < 1e-6, "{r:?}");
}

#[test]
fn trivial_loop() {
    let (pi, n) = leaf_fixture();
    let p = CotangentPath::parse(pi.chart(), &["0", "0", "1", "2"], &["0", "0", "0", "0"], true).unwrap();
    let r = verify_holonomy_identity(
        &pi,
        &n,
        &VolumeDensity::lebesgue(pi.chart()),
        &VolumeDensity::lebesgue(n.chart()),
        &p,
        10,
        Quadrature::default(),
        &zt(),
    )
    .unwrap();
    assert_eq!(r.holonomy.det, 1.0);
    assert_eq!(r.integral.value, 0.0);
}

#[test]
fn reversal_and_concatenation() {
    let (pi, n) = leaf_fixture();
    let p = leaf_loop(&pi, "sin(2*pi*t)", "1 + t");
    let q = leaf_loop(&pi, "0", "t^2");
    let hp = transport(&pi, &n, &p, None, 500).unwrap();
    let hq = transport(&pi, &n, &q, None, 500).unwrap();
    let hr = transport(&pi, &n, &p.reverse(), None, 500).unwrap();
    assert!((hp.det * hr.det - 1.0).abs() < 1e-6);
    let pq = transport(&pi, &n, &p.concat(&q).unwrap(), None, 500).unwrap();
    assert!((pq.det - hp.det * hq.det).abs() < 1e-6 * pq.det.abs());
    // The matrices compose too: h(p·q) = h(q) h(p).
    assert!((&pq.matrix - &hq.matrix * &hp.matrix).norm() < 1e-6);
}

#[test]
fn explicit_extension_checks() {
    let (pi, n) = leaf_fixture();
    let p = leaf_loop(&pi, "1", "t");
    let c = pi.chart();
    let wrong: Vec<Expr> = ["2", "t", "2*pi*cos(2*pi*t)", "2*pi*sin(2*pi*t)"]
        .iter()
        .map(|s| crate::expr::parse(s, c, &[PARAM]).unwrap())
        .collect();
    assert!(matches!(transport(&pi, &n, &p, Some(&wrong), 10), Err(Error::InvalidPath(_))));
    let twice = p.concat(&p).unwrap();
    assert!(matches!(transport(&pi, &n, &twice, Some(&wrong), 10), Err(Error::InvalidPath(_))));
}

#[test]
fn abelian_conormal() {
    let (pi, _) = leaf_fixture();
    let fixed = SubmanifoldSpec::new(pi.chart(), &["x"]).unwrap();
    assert!(conormal_abelian_check(&pi, &fixed, &zt()).unwrap());
    let (pi, n) = line_fixture();
    assert!(conormal_abelian_check(&pi, &n, &zt()).unwrap());
    // The c-axis in the linear structure a ∂a∧∂b on ℝ³ has isotropy [da, db] = da.
    let pi = poisson(&chart(&["a", "b", "c"]), &[("a", "b", "a")]);
    let axis = SubmanifoldSpec::new(pi.chart(), &["a", "b"]).unwrap();
    assert!(!conormal_abelian_check(&pi, &axis, &zt()).unwrap());
}

fn extension(c: &Arc<Chart>, base: &[&str], extra: &[Expr], transverse: &Expr) -> Vec<Expr> {
    base.iter()
        .zip(extra)
        .map(|(s, e)| crate::expr::parse(s, c, &[PARAM]).unwrap() + transverse * e)
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn extension_independence_on_the_line(p in polynomial(&["a", "b"], 2), q in polynomial(&["a", "b"], 2)) {
        let (pi, n) = line_fixture();
        let path = line_path(&pi, "1 + t");
        let ext = extension(pi.chart(), &["0", "1 + t"], &[p, q], &Expr::var("a"));
        let h1 = transport(&pi, &n, &path, None, 400).unwrap();
        let h2 = transport(&pi, &n, &path, Some(&ext), 400).unwrap();
        prop_assert!((&h1.matrix - &h2.matrix).norm() < 1e-6);
    }

    #[test]
    fn extension_independence_on_the_leaf(p in polynomial(&["x", "y", "z", "w"], 1),
                                          q in polynomial(&["x", "y", "z", "w"], 1),
                                          r in polynomial(&["x", "y", "z", "w"], 1)) {
        let (pi, n) = leaf_fixture();
        let base = ["1", "t", "2*pi*cos(2*pi*t)", "2*pi*sin(2*pi*t)"];
        let path = leaf_loop(&pi, base[0], base[1]);
        let transverse = pi.chart().parse("x + x*y - y").unwrap();
        let ext = extension(pi.chart(), &base, &[p, q, r.clone(), r], &transverse);
        let h1 = transport(&pi, &n, &path, None, 400).unwrap();
        let h2 = transport(&pi, &n, &path, Some(&ext), 400).unwrap();
        prop_assert!((&h1.matrix - &h2.matrix).norm() < 1e-6, "{} vs {}", h1.matrix, h2.matrix);
    }

    #[test]
    fn step_halving(k in 0u32..3) {
        let (pi, n) = leaf_fixture();
        let path = leaf_loop(&pi, "t", &format!("cos(2*pi*t)^{}", k + 1));
        let h1 = transport(&pi, &n, &path, None, 400).unwrap();
        let h2 = transport(&pi, &n, &path, None, 800).unwrap();
        prop_assert!((h1.det - h2.det).abs() < 1e-8);
    }
}
