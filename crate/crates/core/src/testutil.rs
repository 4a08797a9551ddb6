use proptest::prelude::*;

use crate::expr::{Chart, Expr};

pub fn chart3() -> Chart {
    Chart::new(&["x", "y", "z"]).unwrap()
}

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (-4i64..=4, 1i64..=3).prop_map(|(n, d)| Expr::rational(n, d)),
        prop::sample::select(vec!["x", "y", "z"]).prop_map(Expr::var),
    ]
}

/// Random smooth expressions over x, y, z that are defined everywhere.
pub fn smooth_expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::add),
            prop::collection::vec(inner.clone(), 2..3).prop_map(Expr::mul),
            (inner.clone(), 0i64..4).prop_map(|(b, k)| Expr::powi(b, k)),
            inner.clone().prop_map(|a| Expr::sin(a)),
            inner.clone().prop_map(|a| Expr::exp(Expr::sin(a))),
            inner.clone().prop_map(|a| Expr::sqrt(Expr::one() + Expr::powi(a, 2))),
            inner.prop_map(|a| Expr::log(Expr::int(2) + Expr::cos(a))),
        ]
    })
}

/// Random polynomials in the given variables with small integer coefficients.
pub fn polynomial(vars: &'static [&'static str], max_deg: u32) -> impl Strategy<Value = Expr> {
    let term = (-3i64..=3, prop::collection::vec(0..=max_deg, vars.len())).prop_map(move |(c, exps)| {
        let mut factors = vec![Expr::int(c)];
        let mut total = 0;
        for (v, k) in vars.iter().zip(exps) {
            let k = k.min(max_deg - total);
            total += k;
            factors.push(Expr::powi(Expr::var(v), k as i64));
        }
        Expr::mul(factors)
    });
    prop::collection::vec(term, 1..5).prop_map(Expr::add)
}
