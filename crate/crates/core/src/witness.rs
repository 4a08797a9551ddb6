//! Bounded-degree search for a polynomial `h` with `L(h) = target`, where `L`
//! is a linear differential operator producing a list of component
//! expressions.
//!
//! When the operator images and the target are polynomial the coefficient
//! system is solved exactly over the rationals, so a negative answer is
//! definitive at the stated degree. Otherwise the system is sampled at
//! collocation points and solved in least squares; any candidate is then
//! confirmed with the randomized zero test.

use nalgebra::{DMatrix, DVector};
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::expr::poly::{monomials_up_to, Poly};
use crate::expr::{find_nonzero_all, Chart, Expr, Sampler, ZeroTest};
use crate::linalg::{least_squares, rationalize, solve_rational};

/// Outcome of a bounded witness search.
#[derive(Debug, Clone, PartialEq)]
pub enum WitnessSearch {
    Found(Expr),
    /// No polynomial witness of total degree at most the given cap.
    NoWitness(u32),
}

impl WitnessSearch {
    pub fn found(&self) -> Option<&Expr> {
        match self {
            WitnessSearch::Found(h) => Some(h),
            WitnessSearch::NoWitness(_) => None,
        }
    }
}

/// Whether non-polynomial input may fall back to sampled collocation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Policy {
    #[default]
    ExactOnly,
    AllowSampled,
}

/// How the search was carried out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    Exact,
    Sampled,
}

fn monomial_expr(chart: &Chart, m: &[u32]) -> Expr {
    Expr::mul(m.iter().enumerate().map(|(i, &k)| Expr::powi(chart.coord_expr(i), k as i64)))
}

/// Searches for `h` of degree ≤ `cap` (constants excluded) with `op(h) = target`.
pub fn search(
    chart: &Chart,
    op: impl Fn(&Expr) -> Vec<Expr>,
    target: &[Expr],
    cap: u32,
    policy: Policy,
    cfg: &ZeroTest,
) -> Result<(WitnessSearch, SearchMode)> {
    if target.iter().all(Expr::is_zero_literal) {
        return Ok((WitnessSearch::Found(Expr::zero()), SearchMode::Exact));
    }
    let monos: Vec<Vec<u32>> = monomials_up_to(chart.dim(), cap).into_iter().filter(|m| m.iter().any(|&k| k > 0)).collect();
    let basis: Vec<Expr> = monos.iter().map(|m| monomial_expr(chart, m)).collect();
    let images: Vec<Vec<Expr>> = basis.iter().map(&op).collect();

    match exact_system(chart, &images, target) {
        Some((rows, rhs)) => {
            let outcome = match solve_rational(&rows, &rhs) {
                Some(c) => WitnessSearch::Found(Expr::add(
                    c.into_iter().zip(&basis).map(|(ci, b)| Expr::scale(ci, b.clone())),
                )),
                None => WitnessSearch::NoWitness(cap),
            };
            Ok((outcome, SearchMode::Exact))
        }
        None if policy == Policy::AllowSampled => {
            Ok((sampled(chart, &op, &basis, &images, target, cap, cfg)?, SearchMode::Sampled))
        }
        None => {
            let culprit = target
                .iter()
                .chain(images.iter().flatten())
                .find(|e| Poly::from_expr(e, chart).is_err())
                .map(|e| e.to_string())
                .unwrap_or_default();
            Err(Error::NonPolynomialInput(culprit))
        }
    }
}

type System = (Vec<Vec<BigRational>>, Vec<BigRational>);

fn exact_system(chart: &Chart, images: &[Vec<Expr>], target: &[Expr]) -> Option<System> {
    let polys: Vec<Vec<Poly>> = images
        .iter()
        .map(|img| img.iter().map(|e| Poly::from_expr(e, chart)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()
        .ok()?;
    let rhs: Vec<Poly> = target.iter().map(|e| Poly::from_expr(e, chart)).collect::<Result<Vec<_>>>().ok()?;
    let mut keys = std::collections::BTreeSet::new();
    for (j, t) in rhs.iter().enumerate() {
        keys.extend(t.terms().keys().map(|m| (j, m.clone())));
    }
    for img in &polys {
        for (j, p) in img.iter().enumerate() {
            keys.extend(p.terms().keys().map(|m| (j, m.clone())));
        }
    }
    let zero = BigRational::from_integer(0.into());
    let mut rows = Vec::with_capacity(keys.len());
    let mut b = Vec::with_capacity(keys.len());
    for (j, m) in keys {
        rows.push(polys.iter().map(|img| img[j].terms().get(&m).cloned().unwrap_or_else(|| zero.clone())).collect());
        b.push(rhs[j].terms().get(&m).cloned().unwrap_or_else(|| zero.clone()));
    }
    Some((rows, b))
}

fn sampled(
    chart: &Chart,
    op: &impl Fn(&Expr) -> Vec<Expr>,
    basis: &[Expr],
    images: &[Vec<Expr>],
    target: &[Expr],
    cap: u32,
    cfg: &ZeroTest,
) -> Result<WitnessSearch> {
    let ncols = basis.len();
    let npts = (3 * ncols).max(64);
    let ncomp = target.len();
    let mut vars = std::collections::BTreeSet::new();
    for e in target.iter().chain(images.iter().flatten()) {
        vars.extend(e.variables());
    }
    let mut sampler = Sampler::new(chart, vars, cfg.seed ^ 0x9e37_79b9);
    let mut a = DMatrix::<f64>::zeros(npts * ncomp, ncols);
    let mut b = DVector::<f64>::zeros(npts * ncomp);
    for p in 0..npts {
        let mut row_vals: Vec<Vec<f64>> = Vec::new();
        let mut tvals: Vec<f64> = Vec::new();
        sampler.next_valid(|env| {
            row_vals.clear();
            tvals.clear();
            for img in images {
                let mut col = Vec::with_capacity(ncomp);
                for e in img {
                    match e.eval(env) {
                        Ok(v) => col.push(v),
                        Err(_) => return false,
                    }
                }
                row_vals.push(col);
            }
            for e in target {
                match e.eval(env) {
                    Ok(v) => tvals.push(v),
                    Err(_) => return false,
                }
            }
            true
        })?;
        for j in 0..ncomp {
            let r = p * ncomp + j;
            for (c, col) in row_vals.iter().enumerate() {
                a[(r, c)] = col[j];
            }
            b[r] = tvals[j];
        }
    }
    let (x, resid) = least_squares(&a, &b);
    if resid > 1e-8 * (1.0 + b.norm()) {
        return Ok(WitnessSearch::NoWitness(cap));
    }
    let h = Expr::add(x.iter().zip(basis).map(|(&c, m)| Expr::scale(rationalize(c, 10_000, 1e-9), m.clone())));
    let residual: Vec<Expr> = op(&h).into_iter().zip(target).map(|(l, t)| l - t).collect();
    if find_nonzero_all(&residual, chart, cfg)?.is_none() {
        Ok(WitnessSearch::Found(h))
    } else {
        Ok(WitnessSearch::NoWitness(cap))
    }
}
