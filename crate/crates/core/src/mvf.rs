//! Multivector fields and differential forms on a chart, with the exterior
//! algebra, the Schouten–Nijenhuis bracket and Lie derivatives.
//!
//! Components are stored on strictly increasing index tuples. A multivector
//! field of degree `k` is read as the superfunction `Σ A^I θ_I` in odd
//! variables `θ_i = ∂_i`; the bracket is
//! `[A,B] = Σ_i (A ∂⃖θ_i)(∂_i B) − (∂_i A)(∂⃗θ_i B)`,
//! which restricts to the Lie bracket on vector fields and satisfies
//! `[π, h] = −π♯dh`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result, Witness};
use crate::expr::{find_nonzero_all, Chart, Env, Expr, ZeroTest};

/// Sorts `idx` in place and returns the permutation sign, or `None` when an
/// index repeats.
pub fn sort_with_sign(idx: &mut [usize]) -> Option<i32> {
    let mut sign = 1;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

/// `θ_I θ_J = sign · θ_{I∪J}` for increasing tuples, or `None` if they meet.
fn merge(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, i32)> {
    let mut inversions = 0usize;
    for &i in a {
        for &j in b {
            if i == j {
                return None;
            }
            if i > j {
                inversions += 1;
            }
        }
    }
    let mut out: Vec<usize> = a.iter().chain(b).copied().collect();
    out.sort_unstable();
    Some((out, if inversions.is_multiple_of(2) { 1 } else { -1 }))
}

fn without(idx: &[usize], pos: usize) -> Vec<usize> {
    let mut v = idx.to_vec();
    v.remove(pos);
    v
}

fn sign_expr(sign: i32, e: Expr) -> Expr {
    if sign < 0 {
        -e
    } else {
        e
    }
}

fn check_same(a: &Chart, b: &Chart) -> Result<()> {
    if a.same_coords(b) {
        Ok(())
    } else {
        Err(Error::ChartMismatch(format!(
            "({}) vs ({})",
            a.coords().join(","),
            b.coords().join(",")
        )))
    }
}

fn accumulate(map: &mut BTreeMap<Vec<usize>, Vec<Expr>>, idx: Vec<usize>, term: Expr) {
    if !term.is_zero_literal() {
        map.entry(idx).or_default().push(term);
    }
}

fn collapse(map: BTreeMap<Vec<usize>, Vec<Expr>>) -> BTreeMap<Vec<usize>, Expr> {
    map.into_iter()
        .map(|(k, terms)| (k, Expr::add(terms)))
        .filter(|(_, e)| !e.is_zero_literal())
        .collect()
}

macro_rules! alternating {
    ($name:ident) => {
        impl $name {
            pub fn zero(chart: &Arc<Chart>, degree: usize) -> Self {
                $name { chart: chart.clone(), degree, comps: BTreeMap::new() }
            }

            /// Builds from arbitrary index tuples; entries are antisymmetrized
            /// into increasing order and summed. Above the chart dimension
            /// every tuple repeats an index, so the result is zero.
            pub fn from_components(
                chart: &Arc<Chart>,
                degree: usize,
                entries: impl IntoIterator<Item = (Vec<usize>, Expr)>,
            ) -> Result<Self> {
                let mut acc: BTreeMap<Vec<usize>, Vec<Expr>> = BTreeMap::new();
                for (mut idx, e) in entries {
                    if idx.len() != degree {
                        return Err(Error::DegreeMismatch { expected: degree, found: idx.len() });
                    }
                    if let Some(&bad) = idx.iter().find(|&&i| i >= chart.dim()) {
                        return Err(Error::DimensionMismatch(format!(
                            "index {bad} out of range for dimension {}",
                            chart.dim()
                        )));
                    }
                    if let Some(s) = sort_with_sign(&mut idx) {
                        accumulate(&mut acc, idx, sign_expr(s, e));
                    }
                }
                Ok($name { chart: chart.clone(), degree, comps: collapse(acc) })
            }

            /// Degree-0 element.
            pub fn function(chart: &Arc<Chart>, f: Expr) -> Self {
                let mut comps = BTreeMap::new();
                if !f.is_zero_literal() {
                    comps.insert(Vec::new(), f);
                }
                $name { chart: chart.clone(), degree: 0, comps }
            }

            /// Degree-1 element from its `n` components.
            pub fn from_vec(chart: &Arc<Chart>, comps: Vec<Expr>) -> Result<Self> {
                if comps.len() != chart.dim() {
                    return Err(Error::DimensionMismatch(format!(
                        "expected {} components, got {}",
                        chart.dim(),
                        comps.len()
                    )));
                }
                Self::from_components(chart, 1, comps.into_iter().enumerate().map(|(i, e)| (vec![i], e)))
            }

            /// The basis element of index `i` (degree 1).
            pub fn basis(chart: &Arc<Chart>, i: usize) -> Self {
                let mut comps = BTreeMap::new();
                comps.insert(vec![i], Expr::one());
                $name { chart: chart.clone(), degree: 1, comps }
            }

            pub fn chart(&self) -> &Arc<Chart> {
                &self.chart
            }

            pub fn degree(&self) -> usize {
                self.degree
            }

            /// Nonzero components on increasing tuples.
            pub fn components(&self) -> &BTreeMap<Vec<usize>, Expr> {
                &self.comps
            }

            /// Component on an arbitrary tuple, with the antisymmetry sign.
            pub fn get(&self, idx: &[usize]) -> Expr {
                let mut idx = idx.to_vec();
                match sort_with_sign(&mut idx) {
                    Some(s) => self.comps.get(&idx).map(|e| sign_expr(s, e.clone())).unwrap_or_else(Expr::zero),
                    None => Expr::zero(),
                }
            }

            /// Component `i` of a degree-1 element.
            pub fn at(&self, i: usize) -> Expr {
                self.get(&[i])
            }

            /// All `n` components of a degree-1 element.
            pub fn to_vec(&self) -> Vec<Expr> {
                (0..self.chart.dim()).map(|i| self.at(i)).collect()
            }

            /// The function of a degree-0 element.
            pub fn scalar(&self) -> Expr {
                self.get(&[])
            }

            pub fn is_zero_literal(&self) -> bool {
                self.comps.is_empty()
            }

            pub fn map(&self, f: impl Fn(&Expr) -> Expr) -> Self {
                let comps = self
                    .comps
                    .iter()
                    .map(|(k, e)| (k.clone(), f(e)))
                    .filter(|(_, e)| !e.is_zero_literal())
                    .collect();
                $name { chart: self.chart.clone(), degree: self.degree, comps }
            }

            pub fn scale(&self, f: &Expr) -> Self {
                self.map(|e| f * e)
            }

            pub fn neg(&self) -> Self {
                self.map(|e| -e)
            }

            pub fn add(&self, other: &Self) -> Result<Self> {
                check_same(&self.chart, &other.chart)?;
                if self.degree != other.degree {
                    return Err(Error::DegreeMismatch { expected: self.degree, found: other.degree });
                }
                let mut acc: BTreeMap<Vec<usize>, Vec<Expr>> = BTreeMap::new();
                for (k, e) in self.comps.iter().chain(other.comps.iter()) {
                    accumulate(&mut acc, k.clone(), e.clone());
                }
                Ok($name { chart: self.chart.clone(), degree: self.degree, comps: collapse(acc) })
            }

            pub fn sub(&self, other: &Self) -> Result<Self> {
                self.add(&other.neg())
            }

            pub fn diff(&self, var: &str) -> Self {
                self.map(|e| e.diff(var))
            }

            pub fn substitute(&self, map: &BTreeMap<&str, Expr>) -> Self {
                self.map(|e| e.substitute(map))
            }

            pub fn wedge(&self, other: &Self) -> Result<Self> {
                check_same(&self.chart, &other.chart)?;
                let dim = self.chart.dim();
                if self.degree + other.degree > dim {
                    return Err(Error::DegreeOverflow { lhs: self.degree, rhs: other.degree, dim });
                }
                let mut acc: BTreeMap<Vec<usize>, Vec<Expr>> = BTreeMap::new();
                for (i, a) in &self.comps {
                    for (j, b) in &other.comps {
                        if let Some((k, s)) = merge(i, j) {
                            accumulate(&mut acc, k, sign_expr(s, a * b));
                        }
                    }
                }
                Ok($name { chart: self.chart.clone(), degree: self.degree + other.degree, comps: collapse(acc) })
            }

            /// First component failing the zero test, if any.
            pub fn find_nonzero(&self, cfg: &ZeroTest) -> Result<Option<(Vec<usize>, Witness)>> {
                let keys: Vec<&Vec<usize>> = self.comps.keys().collect();
                let exprs: Vec<Expr> = self.comps.values().cloned().collect();
                Ok(find_nonzero_all(&exprs, &self.chart, cfg)?.map(|(k, w)| (keys[k].clone(), w)))
            }

            pub fn is_zero(&self, cfg: &ZeroTest) -> Result<bool> {
                Ok(self.find_nonzero(cfg)?.is_none())
            }

            /// Numerical components of a degree-1 element at a point.
            pub fn eval_vec(&self, env: &Env) -> Result<Vec<f64>> {
                (0..self.chart.dim()).map(|i| self.at(i).eval(env)).collect()
            }
        }
    };
}

/// Antisymmetric contravariant tensor field.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiVectorField {
    chart: Arc<Chart>,
    degree: usize,
    comps: BTreeMap<Vec<usize>, Expr>,
}

/// Differential form.
#[derive(Debug, Clone, PartialEq)]
pub struct DifferentialForm {
    chart: Arc<Chart>,
    degree: usize,
    comps: BTreeMap<Vec<usize>, Expr>,
}

alternating!(MultiVectorField);
alternating!(DifferentialForm);

impl MultiVectorField {
    /// Applies a vector field to a function.
    pub fn apply(&self, f: &Expr) -> Expr {
        Expr::add(self.comps.iter().map(|(k, x)| x * f.diff(self.chart.coord(k[0]))))
    }

    /// Interior product of a 1-form into the first slot: `(i_α A)^{J} = Σ α_i A^{iJ}`.
    pub fn contract(&self, alpha: &DifferentialForm) -> Result<MultiVectorField> {
        check_same(&self.chart, &alpha.chart)?;
        if alpha.degree != 1 {
            return Err(Error::DegreeMismatch { expected: 1, found: alpha.degree });
        }
        if self.degree == 0 {
            return Err(Error::DegreeMismatch { expected: 1, found: 0 });
        }
        let mut acc: BTreeMap<Vec<usize>, Vec<Expr>> = BTreeMap::new();
        for (idx, a) in &self.comps {
            for (r, &i) in idx.iter().enumerate() {
                let c = alpha.at(i);
                if c.is_zero_literal() {
                    continue;
                }
                let s = if r % 2 == 0 { 1 } else { -1 };
                accumulate(&mut acc, without(idx, r), sign_expr(s, &c * a));
            }
        }
        Ok(MultiVectorField { chart: self.chart.clone(), degree: self.degree - 1, comps: collapse(acc) })
    }
}

/// Graded bracket of multivector fields.
pub fn schouten(a: &MultiVectorField, b: &MultiVectorField) -> Result<MultiVectorField> {
    check_same(&a.chart, &b.chart)?;
    let dim = a.chart.dim();
    if a.degree + b.degree == 0 {
        return Err(Error::DegreeMismatch { expected: 1, found: 0 });
    }
    let degree = a.degree + b.degree - 1;
    if degree > dim {
        return Ok(MultiVectorField::zero(&a.chart, degree));
    }
    let mut acc: BTreeMap<Vec<usize>, Vec<Expr>> = BTreeMap::new();
    // (A ∂⃖θ_i)(∂_i B)
    for (ia, ca) in &a.comps {
        let p = ia.len();
        for (r, &i) in ia.iter().enumerate() {
            let s_right = if (p - 1 - r) % 2 == 0 { 1 } else { -1 };
            let rest = without(ia, r);
            let var = a.chart.coord(i);
            for (jb, cb) in &b.comps {
                let db = cb.diff(var);
                if db.is_zero_literal() {
                    continue;
                }
                if let Some((k, s)) = merge(&rest, jb) {
                    accumulate(&mut acc, k, sign_expr(s * s_right, ca * &db));
                }
            }
        }
    }
    // −(∂_i A)(∂⃗θ_i B)
    for (jb, cb) in &b.comps {
        for (r, &i) in jb.iter().enumerate() {
            let s_left = if r % 2 == 0 { 1 } else { -1 };
            let rest = without(jb, r);
            let var = b.chart.coord(i);
            for (ia, ca) in &a.comps {
                let da = ca.diff(var);
                if da.is_zero_literal() {
                    continue;
                }
                if let Some((k, s)) = merge(ia, &rest) {
                    accumulate(&mut acc, k, sign_expr(-s * s_left, &da * cb));
                }
            }
        }
    }
    Ok(MultiVectorField { chart: a.chart.clone(), degree, comps: collapse(acc) })
}

pub fn wedge(a: &MultiVectorField, b: &MultiVectorField) -> Result<MultiVectorField> {
    a.wedge(b)
}

impl DifferentialForm {
    /// `df`.
    pub fn exact(chart: &Arc<Chart>, f: &Expr) -> Self {
        let comps = (0..chart.dim())
            .map(|i| (vec![i], f.diff(chart.coord(i))))
            .filter(|(_, e)| !e.is_zero_literal())
            .collect();
        DifferentialForm { chart: chart.clone(), degree: 1, comps }
    }

    /// Top-degree form `ρ dx¹∧…∧dxⁿ`.
    pub fn top(chart: &Arc<Chart>, rho: Expr) -> Self {
        let mut comps = BTreeMap::new();
        if !rho.is_zero_literal() {
            comps.insert((0..chart.dim()).collect(), rho);
        }
        DifferentialForm { chart: chart.clone(), degree: chart.dim(), comps }
    }

    /// Exterior derivative.
    pub fn d(&self) -> Result<DifferentialForm> {
        let dim = self.chart.dim();
        if self.degree + 1 > dim {
            return Ok(DifferentialForm::zero(&self.chart, self.degree + 1));
        }
        let mut acc: BTreeMap<Vec<usize>, Vec<Expr>> = BTreeMap::new();
        for (idx, w) in &self.comps {
            for i in 0..dim {
                let dw = w.diff(self.chart.coord(i));
                if dw.is_zero_literal() {
                    continue;
                }
                if let Some((k, s)) = merge(&[i], idx) {
                    accumulate(&mut acc, k, sign_expr(s, dw));
                }
            }
        }
        Ok(DifferentialForm { chart: self.chart.clone(), degree: self.degree + 1, comps: collapse(acc) })
    }

    /// Interior product `i_X ω` into the first slot.
    pub fn interior(&self, x: &MultiVectorField) -> Result<DifferentialForm> {
        check_same(&self.chart, &x.chart)?;
        if x.degree != 1 {
            return Err(Error::DegreeMismatch { expected: 1, found: x.degree });
        }
        if self.degree == 0 {
            return Ok(DifferentialForm::zero(&self.chart, 0));
        }
        let mut acc: BTreeMap<Vec<usize>, Vec<Expr>> = BTreeMap::new();
        for (idx, w) in &self.comps {
            for (r, &i) in idx.iter().enumerate() {
                let xi = x.at(i);
                if xi.is_zero_literal() {
                    continue;
                }
                let s = if r % 2 == 0 { 1 } else { -1 };
                accumulate(&mut acc, without(idx, r), sign_expr(s, &xi * w));
            }
        }
        Ok(DifferentialForm { chart: self.chart.clone(), degree: self.degree - 1, comps: collapse(acc) })
    }
}

/// Full contraction `⟨ω, A⟩ = Σ_I ω_I A^I` over increasing tuples.
pub fn pair(omega: &DifferentialForm, a: &MultiVectorField) -> Result<Expr> {
    check_same(&omega.chart, &a.chart)?;
    if omega.degree != a.degree {
        return Err(Error::DegreeMismatch { expected: omega.degree, found: a.degree });
    }
    Ok(Expr::add(omega.comps.iter().filter_map(|(k, w)| a.comps.get(k).map(|x| w * x))))
}

/// Lie derivative of a multivector field: `L_X T = [X, T]`.
pub fn lie_derivative(x: &MultiVectorField, t: &MultiVectorField) -> Result<MultiVectorField> {
    if x.degree != 1 {
        return Err(Error::DegreeMismatch { expected: 1, found: x.degree });
    }
    schouten(x, t)
}

/// Lie derivative of a form by Cartan's formula `i_X dω + d i_X ω`.
pub fn lie_derivative_form(x: &MultiVectorField, omega: &DifferentialForm) -> Result<DifferentialForm> {
    check_same(&x.chart, &omega.chart)?;
    if x.degree != 1 {
        return Err(Error::DegreeMismatch { expected: 1, found: x.degree });
    }
    if omega.degree == 0 {
        return Ok(DifferentialForm::function(&omega.chart, x.apply(&omega.scalar())));
    }
    let a = omega.d()?.interior(x)?;
    let b = omega.interior(x)?.d()?;
    a.add(&b)
}
