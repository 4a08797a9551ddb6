use std::collections::BTreeSet;
use std::sync::Arc;

use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Chart, Expr, Func, Node};
use crate::error::{Error, Result, Witness};

/// An assignment of numbers to variable names.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Env {
    entries: Vec<(Arc<str>, f64)>,
}

impl Env {
    pub fn new() -> Self {
        Env::default()
    }

    pub fn from_pairs<S: AsRef<str>>(pairs: &[(S, f64)]) -> Self {
        let mut env = Env::new();
        for (k, v) in pairs {
            env.set(k.as_ref(), *v);
        }
        env
    }

    /// Assigns the chart coordinates in order.
    pub fn from_chart(chart: &Chart, values: &[f64]) -> Self {
        let mut env = Env::new();
        for (name, v) in chart.coords().iter().zip(values) {
            env.entries.push((name.clone(), *v));
        }
        env
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.entries.iter().find(|(k, _)| &**k == name).map(|(_, v)| *v)
    }

    pub fn set(&mut self, name: &str, value: f64) {
        match self.entries.iter_mut().find(|(k, _)| &**k == name) {
            Some(slot) => slot.1 = value,
            None => self.entries.push((Arc::from(name), value)),
        }
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.set(name, value);
        self
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, f64)> {
        self.entries.iter().map(|(k, v)| (&**k, *v))
    }

    pub fn to_witness(&self, value: f64) -> Witness {
        Witness {
            point: self.entries.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            value,
        }
    }
}

fn domain(e: &Expr, reason: &str) -> Error {
    Error::Domain { expr: e.to_string(), reason: reason.to_string() }
}

impl Expr {
    pub fn eval(&self, env: &Env) -> Result<f64> {
        let mut scale = 0.0;
        self.eval_scaled(env, &mut scale)
    }

    /// Evaluates and records the largest absolute value met at any subexpression.
    pub fn eval_scaled(&self, env: &Env, scale: &mut f64) -> Result<f64> {
        let v = match self.node() {
            Node::Const(c) => c.to_f64().unwrap_or(f64::NAN),
            Node::Pi => std::f64::consts::PI,
            Node::Var(name) => env.get(name).ok_or_else(|| Error::Unassigned(name.to_string()))?,
            Node::Add(xs) => {
                let mut s = 0.0;
                for x in xs {
                    s += x.eval_scaled(env, scale)?;
                }
                s
            }
            Node::Mul(xs) => {
                let mut p = 1.0;
                for x in xs {
                    p *= x.eval_scaled(env, scale)?;
                }
                p
            }
            Node::Pow(base, e) => {
                let b = base.eval_scaled(env, scale)?;
                pow_real(self, b, e)?
            }
            Node::Func(f, arg) => {
                let a = arg.eval_scaled(env, scale)?;
                match f {
                    Func::Exp => a.exp(),
                    Func::Log => {
                        if a <= 0.0 {
                            return Err(domain(self, "logarithm of a non-positive number"));
                        }
                        a.ln()
                    }
                    Func::Sin => a.sin(),
                    Func::Cos => a.cos(),
                }
            }
        };
        if !v.is_finite() {
            return Err(domain(self, "non-finite value"));
        }
        *scale = scale.max(v.abs());
        Ok(v)
    }
}

fn pow_real(node: &Expr, b: f64, e: &num_rational::BigRational) -> Result<f64> {
    if b == 0.0 && e.is_negative() {
        return Err(domain(node, "division by zero"));
    }
    if e.is_integer() {
        let n = e.to_integer().to_i32().ok_or_else(|| domain(node, "exponent too large"))?;
        return Ok(b.powi(n));
    }
    let q = e.denom();
    let ef = e.to_f64().unwrap_or(f64::NAN);
    if b < 0.0 {
        if (q % 2u8).is_zero() {
            return Err(domain(node, "even root of a negative number"));
        }
        let odd_numerator = !(e.numer() % 2u8).is_zero();
        let m = (-b).powf(ef);
        return Ok(if odd_numerator { -m } else { m });
    }
    if *q == 2u8.into() && e.numer().is_positive() && *e.numer() == 1u8.into() {
        return Ok(b.sqrt());
    }
    Ok(b.powf(ef))
}

/// Settings for randomized zero testing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroTest {
    pub trials: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for ZeroTest {
    fn default() -> Self {
        ZeroTest { trials: 32, tol: 1e-9, seed: 0 }
    }
}

impl ZeroTest {
    pub fn new(trials: usize, tol: f64, seed: u64) -> Self {
        ZeroTest { trials: trials.max(1), tol, seed }
    }
}

const MAX_ATTEMPTS: usize = 2000;

/// Deterministic pseudo-random points in `[-2,-1/2] ∪ [1/2,2]` per variable,
/// filtered by the chart guard.
#[derive(Debug, Clone)]
pub struct Sampler {
    names: Vec<Arc<str>>,
    guard: Option<Expr>,
    rng: ChaCha8Rng,
    lo: f64,
    hi: f64,
}

impl Sampler {
    pub fn new(chart: &Chart, extra: impl IntoIterator<Item = Arc<str>>, seed: u64) -> Self {
        let mut names: Vec<Arc<str>> = chart.coords().to_vec();
        let known: BTreeSet<Arc<str>> = names.iter().cloned().collect();
        let mut extras: Vec<Arc<str>> = extra.into_iter().filter(|v| !known.contains(v)).collect();
        extras.sort();
        extras.dedup();
        names.extend(extras);
        Sampler { names, guard: chart.guard().cloned(), rng: ChaCha8Rng::seed_from_u64(seed), lo: 0.5, hi: 2.0 }
    }

    /// Overrides the magnitude range `[lo, hi]` (signs are drawn independently).
    pub fn with_range(mut self, lo: f64, hi: f64) -> Self {
        self.lo = lo;
        self.hi = hi;
        self
    }

    pub fn names(&self) -> &[Arc<str>] {
        &self.names
    }

    fn raw(&mut self) -> Env {
        let mut env = Env::new();
        for name in &self.names {
            let m: f64 = self.rng.gen_range(self.lo..=self.hi);
            let v = if self.rng.gen_bool(0.5) { m } else { -m };
            env.entries.push((name.clone(), v));
        }
        env
    }

    /// Draws a point inside the guard that also satisfies `accept`.
    pub fn next_valid(&mut self, mut accept: impl FnMut(&Env) -> bool) -> Result<Env> {
        for _ in 0..MAX_ATTEMPTS {
            let env = self.raw();
            if let Some(g) = &self.guard {
                match g.eval(&env) {
                    Ok(v) if v > 0.0 => {}
                    _ => continue,
                }
            }
            if accept(&env) {
                return Ok(env);
            }
        }
        Err(Error::Sampling { attempts: MAX_ATTEMPTS })
    }

    pub fn next_point(&mut self) -> Result<Env> {
        self.next_valid(|_| true)
    }
}

fn all_vars(exprs: &[Expr]) -> BTreeSet<Arc<str>> {
    let mut vars = BTreeSet::new();
    for e in exprs {
        vars.extend(e.variables());
    }
    vars
}

/// Looks for a sample point where some expression is numerically nonzero.
/// Returns the index of the first offending expression with its witness.
pub fn find_nonzero_all(exprs: &[Expr], chart: &Chart, cfg: &ZeroTest) -> Result<Option<(usize, Witness)>> {
    let pending: Vec<(usize, &Expr)> =
        exprs.iter().enumerate().filter(|(_, e)| !e.is_zero_literal()).collect();
    if pending.is_empty() {
        return Ok(None);
    }
    let live: Vec<Expr> = pending.iter().map(|(_, e)| (*e).clone()).collect();
    let mut sampler = Sampler::new(chart, all_vars(&live), cfg.seed);
    for _ in 0..cfg.trials.max(1) {
        let mut values = Vec::with_capacity(live.len());
        let env = sampler.next_valid(|env| {
            values.clear();
            for e in &live {
                let mut scale = 0.0;
                match e.eval_scaled(env, &mut scale) {
                    Ok(v) => values.push((v, scale)),
                    Err(_) => return false,
                }
            }
            true
        })?;
        for ((k, _), (v, scale)) in pending.iter().zip(&values) {
            if v.abs() > cfg.tol * (1.0 + scale) {
                return Ok(Some((*k, env.to_witness(*v))));
            }
        }
    }
    Ok(None)
}

pub fn find_nonzero(e: &Expr, chart: &Chart, cfg: &ZeroTest) -> Result<Option<Witness>> {
    Ok(find_nonzero_all(std::slice::from_ref(e), chart, cfg)?.map(|(_, w)| w))
}

/// Randomized test that `e` vanishes identically on the chart domain.
pub fn is_zero(e: &Expr, chart: &Chart, cfg: &ZeroTest) -> Result<bool> {
    Ok(find_nonzero(e, chart, cfg)?.is_none())
}
