//! Sparse multivariate polynomials with rational coefficients.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{Chart, Expr, Node};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn monomial(exps: Vec<u32>, c: BigRational) -> Self {
        let nvars = exps.len();
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Poly::monomial(exps, BigRational::from_integer(1.into()))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.iter().sum()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            let slot = out.terms.entry(m.clone()).or_insert_with(BigRational::zero);
            *slot += c;
            if slot.is_zero() {
                out.terms.remove(m);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m: Vec<u32> = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                let slot = out.terms.entry(m.clone()).or_insert_with(BigRational::zero);
                *slot += c1 * c2;
                if slot.is_zero() {
                    out.terms.remove(&m);
                }
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut out = Poly::constant(self.nvars, BigRational::from_integer(1.into()));
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    pub fn diff(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            if m[i] == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2[i] -= 1;
            out.terms.insert(m2, c * BigRational::from_integer(m[i].into()));
        }
        out
    }

    /// Converts an expression built from rationals, chart coordinates, sums,
    /// products and non-negative integer powers.
    pub fn from_expr(e: &Expr, chart: &Chart) -> Result<Poly> {
        let n = chart.dim();
        match e.node() {
            Node::Const(c) => Ok(Poly::constant(n, c.clone())),
            Node::Var(v) => match chart.index_of(v) {
                Some(i) => Ok(Poly::var(n, i)),
                None => Err(Error::NonPolynomialInput(format!("variable `{v}` is not a coordinate"))),
            },
            Node::Add(xs) => {
                let mut acc = Poly::zero(n);
                for x in xs {
                    acc = acc.add(&Poly::from_expr(x, chart)?);
                }
                Ok(acc)
            }
            Node::Mul(xs) => {
                let mut acc = Poly::constant(n, BigRational::from_integer(1.into()));
                for x in xs {
                    acc = acc.mul(&Poly::from_expr(x, chart)?);
                }
                Ok(acc)
            }
            Node::Pow(b, k) if k.is_integer() && !k.is_negative() => {
                let k = k.to_integer().to_u32().ok_or_else(|| Error::NonPolynomialInput(e.to_string()))?;
                Ok(Poly::from_expr(b, chart)?.pow(k))
            }
            _ => Err(Error::NonPolynomialInput(e.to_string())),
        }
    }

    pub fn to_expr(&self, chart: &Chart) -> Expr {
        Expr::add(self.terms.iter().map(|(m, c)| {
            let mut factors = vec![Expr::constant(c.clone())];
            for (i, &k) in m.iter().enumerate() {
                if k > 0 {
                    factors.push(Expr::powi(chart.coord_expr(i), k as i64));
                }
            }
            Expr::mul(factors)
        }))
    }
}

/// All exponent vectors in `nvars` variables with total degree at most `cap`.
pub fn monomials_up_to(nvars: usize, cap: u32) -> Vec<Vec<u32>> {
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for k in 0..=left {
            cur[i] = k;
            rec(i + 1, left - k, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    let mut cur = vec![0; nvars];
    rec(0, cap, &mut cur, &mut out);
    out.sort_by_key(|m| (m.iter().sum::<u32>(), m.clone()));
    out
}
