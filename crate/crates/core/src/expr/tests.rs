use proptest::prelude::*;

use super::*;
use crate::testutil::{chart3, smooth_expr};

fn zt() -> ZeroTest {
    ZeroTest::default()
}

#[test]
fn canonical_rationals() {
    assert_eq!(Expr::rational(2, 4), Expr::rational(1, 2));
    let c = chart3();
    assert_eq!(c.parse("x + x").unwrap(), c.parse("2*x").unwrap());
    assert_eq!(c.parse("x*x/x").unwrap(), c.parse("x").unwrap());
    assert!(c.parse("x - x").unwrap().is_zero_literal());
}

#[test]
fn derivatives() {
    let c = chart3();
    let e = c.parse("x^2 + y").unwrap();
    assert_eq!(e.diff("x"), c.parse("2*x").unwrap());
    assert!(c.parse("exp(z)").unwrap().diff("x").is_zero_literal());
    let r = c.parse("(x^2+y^2+z^2)^(1/2)").unwrap();
    let expected = c.parse("x*(x^2+y^2+z^2)^(-1/2)").unwrap();
    assert!(is_zero(&(r.diff("x") - expected), &c, &zt()).unwrap());
}

#[test]
fn evaluation() {
    let c = chart3();
    let env = Env::from_pairs(&[("x", 3.0), ("y", 4.0), ("z", 2.0)]);
    assert_eq!(c.parse("x*y").unwrap().eval(&env).unwrap(), 12.0);
    let env = Env::from_pairs(&[("x", 1.0), ("y", 2.0), ("z", 2.0)]);
    assert!((c.parse("sqrt(x^2+y^2+z^2)").unwrap().eval(&env).unwrap() - 3.0).abs() < 1e-15);
    let env = Env::from_pairs(&[("x", 0.0)]);
    match c.parse("1/x").unwrap().eval(&env) {
        Err(Error::Domain { expr, .. }) => assert_eq!(expr, "1/x"),
        other => panic!("{other:?}"),
    }
    assert!(matches!(c.parse("x").unwrap().eval(&Env::new()), Err(Error::Unassigned(_))));
}

#[test]
fn odd_roots_of_negatives() {
    let c = chart3();
    let env = Env::from_pairs(&[("x", -8.0)]);
    assert!((c.parse("x^(1/3)").unwrap().eval(&env).unwrap() + 2.0).abs() < 1e-12);
    assert!(c.parse("sqrt(x)").unwrap().eval(&env).is_err());
}

#[test]
fn zero_tests() {
    let c = chart3();
    assert!(is_zero(&c.parse("(x+y)^2 - x^2 - 2*x*y - y^2").unwrap(), &c, &zt()).unwrap());
    assert!(!is_zero(&c.parse("x - y").unwrap(), &c, &zt()).unwrap());
    let pos = Chart::new(&["x"]).unwrap().with_guard(Expr::var("x")).unwrap();
    let e = pos.parse("sqrt(x^2)*sqrt(x^2) - x^2").unwrap();
    assert!(is_zero(&e, &pos, &zt()).unwrap());
    let e = pos.parse("sqrt(x^2) - x").unwrap();
    assert!(is_zero(&e, &pos, &zt()).unwrap());
}

#[test]
fn sampling_failure_is_reported() {
    let c = Chart::new(&["x"]).unwrap().with_guard(Expr::int(-1)).unwrap();
    assert!(matches!(is_zero(&Expr::var("x"), &c, &zt()), Err(Error::Sampling { .. })));
}

#[test]
fn chart_validation() {
    assert!(Chart::new(&["x", "x"]).is_err());
    assert!(Chart::new::<&str>(&[]).is_err());
    assert!(Chart::new(&["pi"]).is_err());
    assert!(Chart::new(&["x"]).unwrap().with_guard(Expr::var("y")).is_err());
}

#[test]
fn printing() {
    let c = chart3();
    for (src, shown) in [
        ("x - y", "x - y"),
        ("-x/2", "-x/2"),
        ("x^(-1/2)", "1/sqrt(x)"),
        ("(x+y)^2*z", "z*(x + y)^2"),
        ("3/(x*y)", "3/(x*y)"),
        ("exp(-x)", "exp(-x)"),
        ("-(x^2)/2", "-(x^2)/2"),
        ("x^2/y", "x^2/y"),
    ] {
        assert_eq!(c.parse(src).unwrap().to_string(), shown, "{src}");
    }
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn print_parse_round_trip(e in smooth_expr()) {
        let c = chart3();
        let back = c.parse(&e.to_string()).unwrap();
        prop_assert!(is_zero(&(back - &e), &c, &zt()).unwrap(), "{}", e);
    }

    #[test]
    fn derivative_is_linear(e1 in smooth_expr(), e2 in smooth_expr(), a in -5i64..5, b in 1i64..5) {
        let c = chart3();
        let (ra, rb) = (Expr::rational(a, 3), Expr::rational(b, 7));
        let lhs = (&ra * &e1 + &rb * &e2).diff("x");
        let rhs = &ra * e1.diff("x") + &rb * e2.diff("x");
        prop_assert!(is_zero(&(lhs - rhs), &c, &zt()).unwrap());
    }

    #[test]
    fn mixed_partials_commute(e in smooth_expr()) {
        let c = chart3();
        let d = e.diff("x").diff("y") - e.diff("y").diff("x");
        prop_assert!(is_zero(&d, &c, &zt()).unwrap());
    }

    #[test]
    fn zero_test_is_deterministic(e in smooth_expr(), seed in 0u64..1000) {
        let c = chart3();
        let cfg = ZeroTest::new(8, 1e-9, seed);
        prop_assert_eq!(find_nonzero(&e, &c, &cfg).unwrap(), find_nonzero(&e, &c, &cfg).unwrap());
    }

    #[test]
    fn matches_central_differences(e in smooth_expr(), seed in 0u64..1000) {
        let c = chart3();
        let d = e.diff("x");
        let mut sampler = Sampler::new(&c, [], seed);
        let h = 1e-5;
        for _ in 0..10 {
            let p = sampler.next_point().unwrap();
            let x = p.get("x").unwrap();
            let fd = (e.eval(&p.clone().with("x", x + h)).unwrap()
                - e.eval(&p.clone().with("x", x - h)).unwrap()) / (2.0 * h);
            let exact = d.eval(&p).unwrap();
            prop_assert!(close(fd, exact, 1e-5), "{} vs {} for {}", fd, exact, e);
        }
    }
}

#[test]
fn exponent_absorbs_rational_literal() {
    let c = chart3();
    assert_eq!(c.parse("x^3/2").unwrap(), Expr::pow(Expr::var("x"), rat(3, 2)));
    assert_eq!(c.parse("x^3/y").unwrap(), Expr::powi(Expr::var("x"), 3) / Expr::var("y"));
}
