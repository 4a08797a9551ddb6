//! Symbolic scalar expressions over named coordinates.
//!
//! Expressions are immutable trees shared through [`Arc`]. The smart
//! constructors ([`Expr::add`], [`Expr::mul`], [`Expr::pow`]) keep trees in a
//! light canonical form: nested sums and products are flattened, rational
//! constants are folded, like terms and like bases are merged and operands are
//! sorted. No expansion is attempted; semantic equality is decided by
//! [`is_zero`].

mod diff;
mod display;
mod eval;
mod parse;
pub mod poly;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use eval::{find_nonzero, find_nonzero_all, is_zero, Env, Sampler, ZeroTest};
pub use diff::differentiate;
pub use parse::parse;

/// Elementary functions accepted by the grammar (`sqrt` is stored as a power).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Func {
    Exp,
    Log,
    Sin,
    Cos,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Const(BigRational),
    Pi,
    Var(Arc<str>),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Pow(Expr, BigRational),
    Func(Func, Expr),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Expr(Arc<Node>);

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Expr {
    fn from_node(node: Node) -> Self {
        Expr(Arc::new(node))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn constant(value: BigRational) -> Self {
        Self::from_node(Node::Const(value))
    }

    pub fn int(value: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(value)))
    }

    pub fn rational(num: i64, den: i64) -> Self {
        Self::constant(rat(num, den))
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn pi() -> Self {
        Self::from_node(Node::Pi)
    }

    pub fn var(name: &str) -> Self {
        Self::from_node(Node::Var(Arc::from(name)))
    }

    pub fn as_const(&self) -> Option<&BigRational> {
        match self.node() {
            Node::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_zero_literal(&self) -> bool {
        self.as_const().is_some_and(|c| c.is_zero())
    }

    pub fn is_one_literal(&self) -> bool {
        self.as_const().is_some_and(|c| c.is_one())
    }

    /// Sum with flattening, constant folding and merging of like terms.
    pub fn add(terms: impl IntoIterator<Item = Expr>) -> Self {
        let mut flat = Vec::new();
        for t in terms {
            match t.node() {
                Node::Add(inner) => flat.extend(inner.iter().cloned()),
                _ => flat.push(t),
            }
        }
        let mut constant = BigRational::zero();
        let mut grouped: BTreeMap<Expr, BigRational> = BTreeMap::new();
        for t in flat {
            if let Some(c) = t.as_const() {
                constant += c;
                continue;
            }
            let (c, rest) = t.split_coefficient();
            *grouped.entry(rest).or_insert_with(BigRational::zero) += c;
        }
        let mut out: Vec<Expr> = Vec::with_capacity(grouped.len() + 1);
        if !constant.is_zero() {
            out.push(Expr::constant(constant));
        }
        for (rest, c) in grouped {
            if c.is_zero() {
                continue;
            }
            out.push(Expr::scale(c, rest));
        }
        match out.len() {
            0 => Expr::zero(),
            1 => out.pop().unwrap(),
            _ => {
                out.sort();
                Self::from_node(Node::Add(out))
            }
        }
    }

    /// Product with flattening, constant folding and merging of equal bases.
    pub fn mul(factors: impl IntoIterator<Item = Expr>) -> Self {
        let mut flat = Vec::new();
        for f in factors {
            match f.node() {
                Node::Mul(inner) => flat.extend(inner.iter().cloned()),
                _ => flat.push(f),
            }
        }
        let mut constant = BigRational::one();
        let mut bases: BTreeMap<Expr, BigRational> = BTreeMap::new();
        for f in flat {
            if let Some(c) = f.as_const() {
                if c.is_zero() {
                    return Expr::zero();
                }
                constant *= c;
                continue;
            }
            let (base, exp) = match f.node() {
                Node::Pow(b, e) => (b.clone(), e.clone()),
                _ => (f.clone(), BigRational::one()),
            };
            *bases.entry(base).or_insert_with(BigRational::zero) += exp;
        }
        let mut out: Vec<Expr> = Vec::new();
        for (base, exp) in bases {
            if exp.is_zero() {
                continue;
            }
            let p = Expr::pow(base, exp);
            if let Some(c) = p.as_const() {
                constant *= c;
                continue;
            }
            match p.node() {
                Node::Mul(inner) => {
                    for g in inner {
                        if let Some(c) = g.as_const() {
                            constant *= c;
                        } else {
                            out.push(g.clone());
                        }
                    }
                }
                _ => out.push(p),
            }
        }
        if constant.is_zero() {
            return Expr::zero();
        }
        if out.is_empty() {
            return Expr::constant(constant);
        }
        if !constant.is_one() {
            out.push(Expr::constant(constant));
        }
        if out.len() == 1 {
            return out.pop().unwrap();
        }
        out.sort();
        Self::from_node(Node::Mul(out))
    }

    /// `base^exp` for a rational exponent.
    pub fn pow(base: Expr, exp: BigRational) -> Self {
        if exp.is_zero() {
            return Expr::one();
        }
        if exp.is_one() {
            return base;
        }
        let integer = exp.is_integer();
        match base.node() {
            Node::Const(c) => {
                if c.is_one() {
                    return Expr::one();
                }
                if integer && !(c.is_zero() && exp.is_negative()) {
                    if let Some(n) = exp.to_integer().to_i32() {
                        return Expr::constant(pow_rational(c, n));
                    }
                }
            }
            Node::Pow(b, e) if integer => {
                return Expr::pow(b.clone(), e * &exp);
            }
            Node::Mul(factors) if integer => {
                return Expr::mul(factors.iter().map(|f| Expr::pow(f.clone(), exp.clone())));
            }
            _ => {}
        }
        Self::from_node(Node::Pow(base, exp))
    }

    pub fn powi(base: Expr, n: i64) -> Self {
        Self::pow(base, BigRational::from_integer(BigInt::from(n)))
    }

    pub fn sqrt(arg: Expr) -> Self {
        Self::pow(arg, rat(1, 2))
    }

    pub fn func(f: Func, arg: Expr) -> Self {
        if let Some(c) = arg.as_const() {
            match f {
                Func::Exp | Func::Cos if c.is_zero() => return Expr::one(),
                Func::Sin if c.is_zero() => return Expr::zero(),
                Func::Log if c.is_one() => return Expr::zero(),
                _ => {}
            }
        }
        Self::from_node(Node::Func(f, arg))
    }

    pub fn exp(arg: Expr) -> Self {
        Self::func(Func::Exp, arg)
    }

    pub fn log(arg: Expr) -> Self {
        Self::func(Func::Log, arg)
    }

    pub fn sin(arg: Expr) -> Self {
        Self::func(Func::Sin, arg)
    }

    pub fn cos(arg: Expr) -> Self {
        Self::func(Func::Cos, arg)
    }

    pub fn scale(c: BigRational, e: Expr) -> Self {
        Self::mul([Expr::constant(c), e])
    }

    pub fn recip(&self) -> Self {
        Self::powi(self.clone(), -1)
    }

    /// Splits `c * rest` into its rational coefficient and the remaining factor.
    fn split_coefficient(&self) -> (BigRational, Expr) {
        if let Node::Mul(factors) = self.node() {
            if let Some(c) = factors[0].as_const() {
                let rest: Vec<Expr> = factors[1..].to_vec();
                let rest = if rest.len() == 1 {
                    rest.into_iter().next().unwrap()
                } else {
                    Self::from_node(Node::Mul(rest))
                };
                return (c.clone(), rest);
            }
        }
        (BigRational::one(), self.clone())
    }

    /// Free variables, sorted.
    pub fn variables(&self) -> BTreeSet<Arc<str>> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Arc<str>>) {
        match self.node() {
            Node::Const(_) | Node::Pi => {}
            Node::Var(v) => {
                out.insert(v.clone());
            }
            Node::Add(xs) | Node::Mul(xs) => xs.iter().for_each(|x| x.collect_vars(out)),
            Node::Pow(b, _) => b.collect_vars(out),
            Node::Func(_, a) => a.collect_vars(out),
        }
    }

    pub fn depends_on(&self, var: &str) -> bool {
        match self.node() {
            Node::Const(_) | Node::Pi => false,
            Node::Var(v) => &**v == var,
            Node::Add(xs) | Node::Mul(xs) => xs.iter().any(|x| x.depends_on(var)),
            Node::Pow(b, _) => b.depends_on(var),
            Node::Func(_, a) => a.depends_on(var),
        }
    }

    /// Simultaneous substitution of variables by expressions.
    pub fn substitute(&self, map: &BTreeMap<&str, Expr>) -> Expr {
        if map.is_empty() {
            return self.clone();
        }
        match self.node() {
            Node::Const(_) | Node::Pi => self.clone(),
            Node::Var(v) => map.get(&**v).cloned().unwrap_or_else(|| self.clone()),
            Node::Add(xs) => Expr::add(xs.iter().map(|x| x.substitute(map))),
            Node::Mul(xs) => Expr::mul(xs.iter().map(|x| x.substitute(map))),
            Node::Pow(b, e) => Expr::pow(b.substitute(map), e.clone()),
            Node::Func(f, a) => Expr::func(*f, a.substitute(map)),
        }
    }

    pub fn substitute_var(&self, var: &str, value: &Expr) -> Expr {
        let mut map = BTreeMap::new();
        map.insert(var, value.clone());
        self.substitute(&map)
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self.node() {
            Node::Const(_) | Node::Pi | Node::Var(_) => 1,
            Node::Add(xs) | Node::Mul(xs) => 1 + xs.iter().map(Expr::size).sum::<usize>(),
            Node::Pow(b, _) => 1 + b.size(),
            Node::Func(_, a) => 1 + a.size(),
        }
    }
}

fn pow_rational(c: &BigRational, n: i32) -> BigRational {
    let (num, den) = (c.numer(), c.denom());
    let k = n.unsigned_abs();
    let p = BigRational::new(num.pow(k), den.pow(k));
    if n < 0 {
        p.recip()
    } else {
        p
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({self})")
    }
}

impl From<i64> for Expr {
    fn from(v: i64) -> Self {
        Expr::int(v)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl std::ops::$trait<Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                let f: fn(Expr, Expr) -> Expr = $body;
                f(self, rhs)
            }
        }
        impl std::ops::$trait<&Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                let f: fn(Expr, Expr) -> Expr = $body;
                f(self.clone(), rhs.clone())
            }
        }
        impl std::ops::$trait<&Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                let f: fn(Expr, Expr) -> Expr = $body;
                f(self, rhs.clone())
            }
        }
        impl std::ops::$trait<Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                let f: fn(Expr, Expr) -> Expr = $body;
                f(self.clone(), rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| Expr::add([a, b]));
binop!(Sub, sub, |a, b| Expr::add([a, -b]));
binop!(Mul, mul, |a, b| Expr::mul([a, b]));
binop!(Div, div, |a, b| Expr::mul([a, b.recip()]));

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::mul([Expr::int(-1), self])
    }
}

impl std::ops::Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -(self.clone())
    }
}

/// An ordered list of distinct coordinate names with an optional domain
/// guard, an expression required to be positive on the domain.
#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    coords: Vec<Arc<str>>,
    guard: Option<Expr>,
}

impl Chart {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let coords: Vec<Arc<str>> = names.iter().map(|s| Arc::from(s.as_ref())).collect();
        if coords.is_empty() {
            return Err(Error::InvalidChart("a chart needs at least one coordinate".into()));
        }
        let mut seen = BTreeSet::new();
        for c in &coords {
            if !parse::is_identifier(c) || parse::is_reserved(c) {
                return Err(Error::InvalidChart(format!("`{c}` is not a valid coordinate name")));
            }
            if !seen.insert(c.clone()) {
                return Err(Error::InvalidChart(format!("duplicate coordinate `{c}`")));
            }
        }
        Ok(Chart { coords, guard: None })
    }

    /// Attaches a domain guard; its variables must be coordinates of the chart.
    pub fn with_guard(mut self, guard: Expr) -> Result<Self> {
        for v in guard.variables() {
            if self.index_of(&v).is_none() {
                return Err(Error::InvalidChart(format!("guard uses unknown variable `{v}`")));
            }
        }
        self.guard = Some(guard);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Arc<str>] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &str {
        &self.coords[i]
    }

    pub fn coord_expr(&self, i: usize) -> Expr {
        Expr::var(&self.coords[i])
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.coords.iter().position(|c| &**c == name)
    }

    pub fn guard(&self) -> Option<&Expr> {
        self.guard.as_ref()
    }

    /// Parses `text` over this chart's coordinates.
    pub fn parse(&self, text: &str) -> Result<Expr> {
        parse(text, self, &[])
    }

    /// True when the coordinate lists agree (guards are not compared).
    pub fn same_coords(&self, other: &Chart) -> bool {
        self.coords == other.coords
    }
}

#[cfg(test)]
mod tests;
