//! Fixtures shared by the integration targets.
#![allow(dead_code)]

use std::sync::Arc;

use modpoisson::expr::ZeroTest;
use modpoisson::maps::SmoothMap;
use modpoisson::mvf::MultiVectorField;
use modpoisson::paths::CotangentPath;
use modpoisson::poisson::PoissonStructure;
use modpoisson::{Chart, Expr};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn zt() -> ZeroTest {
    ZeroTest::default()
}

pub fn chart(names: &[&str]) -> Arc<Chart> {
    Arc::new(Chart::new(names).unwrap())
}

pub fn guarded(names: &[&str], guard: &str) -> Arc<Chart> {
    let c = Chart::new(names).unwrap();
    let g = c.parse(guard).unwrap();
    Arc::new(c.with_guard(g).unwrap())
}

pub fn poisson(c: &Arc<Chart>, entries: &[(&str, &str, &str)]) -> PoissonStructure {
    let e: Vec<(&str, &str, Expr)> = entries.iter().map(|(a, b, s)| (*a, *b, c.parse(s).unwrap())).collect();
    PoissonStructure::from_entries(c, &e, &zt()).unwrap()
}

pub fn field(c: &Arc<Chart>, comps: &[&str]) -> MultiVectorField {
    MultiVectorField::from_vec(c, comps.iter().map(|s| c.parse(s).unwrap()).collect()).unwrap()
}

pub fn map(src: &Arc<Chart>, tgt: &Arc<Chart>, comps: &[&str]) -> SmoothMap {
    SmoothMap::new(src, tgt, comps.iter().map(|s| src.parse(s).unwrap()).collect()).unwrap()
}

pub fn symplectic_r4() -> PoissonStructure {
    poisson(&chart(&["x", "y", "z", "w"]), &[("x", "y", "1"), ("z", "w", "1")])
}

pub fn linear_r2() -> PoissonStructure {
    poisson(&chart(&["a", "b"]), &[("a", "b", "a")])
}

pub fn two_dim() -> PoissonStructure {
    poisson(&chart(&["x", "y"]), &[("x", "y", "x")])
}

pub fn leaf_r4() -> PoissonStructure {
    poisson(&chart(&["x", "y", "z", "w"]), &[("x", "y", "x"), ("z", "w", "1")])
}

pub fn r3_action() -> PoissonStructure {
    poisson(&chart(&["x", "y", "z"]), &[("x", "y", "x"), ("y", "z", "1")])
}

pub fn sphere(shift: bool) -> PoissonStructure {
    let c = guarded(&["x", "y", "z"], "x^2 + y^2 + z^2");
    let e = if shift { "sqrt(x^2 + y^2 + z^2) - 1" } else { "sqrt(x^2 + y^2 + z^2)" };
    poisson(&c, &[("x", "y", e)])
}

/// Five admissible cotangent paths, one per structure.
pub fn path_fixtures() -> Vec<(PoissonStructure, CotangentPath)> {
    let plane = poisson(&chart(&["x", "y"]), &[("x", "y", "1")]);
    let circle = CotangentPath::parse(
        plane.chart(),
        &["cos(2*pi*t)", "sin(2*pi*t)"],
        &["2*pi*cos(2*pi*t)", "2*pi*sin(2*pi*t)"],
        true,
    )
    .unwrap();
    let s4 = symplectic_r4();
    let p4 = CotangentPath::parse(s4.chart(), &["1 - t", "1 + t^2", "t", "1 + sin(t)"], &["2*t", "1", "cos(t)", "-1"], false)
        .unwrap();
    let lin = linear_r2();
    let pl = CotangentPath::parse(lin.chart(), &["exp(-t)", "t"], &["exp(t)", "1"], false).unwrap();
    let leaf = leaf_r4();
    let pleaf =
        CotangentPath::parse(leaf.chart(), &["exp(-t)", "t", "sin(t)", "t^2"], &["exp(t)", "1", "2*t", "-cos(t)"], false)
            .unwrap();
    let r3 = r3_action();
    let p3 = CotangentPath::parse(r3.chart(), &["exp(-t)", "t", "t"], &["2*exp(t)", "1", "1"], false).unwrap();
    vec![(plane, circle), (s4, p4), (lin, pl), (leaf, pleaf), (r3, p3)]
}

/// A polynomial in the chart coordinates with small integer coefficients.
pub fn random_polynomial(rng: &mut ChaCha8Rng, chart: &Chart, max_deg: u32) -> Expr {
    let n = chart.dim();
    let mut terms = Vec::new();
    for _ in 0..rng.gen_range(1..6) {
        let c = rng.gen_range(-4i64..=4);
        let mut budget = rng.gen_range(0..=max_deg);
        let mut factors = vec![Expr::int(c)];
        while budget > 0 {
            factors.push(chart.coord_expr(rng.gen_range(0..n)));
            budget -= 1;
        }
        terms.push(Expr::mul(factors));
    }
    Expr::add(terms)
}
