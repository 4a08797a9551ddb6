//! Cotangent paths `a: [0,1] → T*M` over a base curve `γ` with `π♯a = γ̇`,
//! the path integral `∫_a X = ∫₀¹ ⟨X|_{γ(t)}, a(t)⟩ dt` and modular
//! characters of Poisson maps.
//!
//! Paths are closed-form in the parameter `t`. Concatenation keeps the
//! pieces apart so quadrature never straddles a corner.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expr::{Chart, Env, Expr, ZeroTest};
use crate::maps::{map_modular_vf, SmoothMap, VectorFieldAlongMap};
use crate::mvf::MultiVectorField;
use crate::poisson::{PoissonStructure, VolumeDensity};

/// Name of the path parameter.
pub const PARAM: &str = "t";

const ENDPOINT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
struct Piece {
    gamma: Vec<Expr>,
    covector: Vec<Expr>,
}

impl Piece {
    fn eval(&self, t: f64) -> Result<(Vec<f64>, Vec<f64>)> {
        let env = Env::new().with(PARAM, t);
        let g = self.gamma.iter().map(|e| e.eval(&env)).collect::<Result<_>>()?;
        let a = self.covector.iter().map(|e| e.eval(&env)).collect::<Result<_>>()?;
        Ok((g, a))
    }

    fn point(&self, t: f64) -> Result<Vec<f64>> {
        let env = Env::new().with(PARAM, t);
        self.gamma.iter().map(|e| e.eval(&env)).collect()
    }
}

/// A piecewise closed-form cotangent path. The covector part may live in a
/// different space than the base (for paths in a pullback algebroid).
#[derive(Debug, Clone, PartialEq)]
pub struct CotangentPath {
    chart: Arc<Chart>,
    pieces: Vec<Piece>,
    is_loop: bool,
}

fn check_param_only(e: &Expr) -> Result<()> {
    match e.variables().into_iter().find(|v| &**v != PARAM) {
        Some(v) => Err(Error::InvalidPath(format!("path expression depends on `{v}`, expected only `{PARAM}`"))),
        None => Ok(()),
    }
}

fn close(p: &[f64], q: &[f64]) -> bool {
    p.iter().zip(q).all(|(a, b)| (a - b).abs() <= ENDPOINT_TOL * (1.0 + a.abs().max(b.abs())))
}

impl CotangentPath {
    /// `gamma` has one entry per chart coordinate; `covector` may have any
    /// positive length.
    pub fn new(chart: &Arc<Chart>, gamma: Vec<Expr>, covector: Vec<Expr>, is_loop: bool) -> Result<Self> {
        if chart.index_of(PARAM).is_some() {
            return Err(Error::InvalidPath(format!("`{PARAM}` is a chart coordinate")));
        }
        if gamma.len() != chart.dim() {
            return Err(Error::InvalidPath(format!("base curve has {} components, chart has {}", gamma.len(), chart.dim())));
        }
        if covector.is_empty() {
            return Err(Error::InvalidPath("empty covector curve".into()));
        }
        for e in gamma.iter().chain(&covector) {
            check_param_only(e)?;
        }
        let path = CotangentPath { chart: chart.clone(), pieces: vec![Piece { gamma, covector }], is_loop };
        if is_loop && !close(&path.start()?, &path.end()?) {
            return Err(Error::InvalidPath("loop does not close".into()));
        }
        Ok(path)
    }

    pub fn parse(chart: &Arc<Chart>, gamma: &[&str], covector: &[&str], is_loop: bool) -> Result<Self> {
        let param = Chart::new(&[PARAM])?;
        let p = |s: &&str| crate::expr::parse(s, &param, &[]);
        let g = gamma.iter().map(p).collect::<Result<_>>()?;
        let a = covector.iter().map(p).collect::<Result<_>>()?;
        Self::new(chart, g, a, is_loop)
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn is_loop(&self) -> bool {
        self.is_loop
    }

    pub fn piece_count(&self) -> usize {
        self.pieces.len()
    }

    pub fn fiber_dim(&self) -> usize {
        self.pieces[0].covector.len()
    }

    pub fn start(&self) -> Result<Vec<f64>> {
        self.pieces[0].point(0.0)
    }

    pub fn end(&self) -> Result<Vec<f64>> {
        self.pieces[self.pieces.len() - 1].point(1.0)
    }

    /// Base curve of piece `k` in `t`.
    pub fn gamma_exprs(&self, k: usize) -> &[Expr] {
        &self.pieces[k].gamma
    }

    /// Covector curve of piece `k` in `t`.
    pub fn covector_exprs(&self, k: usize) -> &[Expr] {
        &self.pieces[k].covector
    }

    /// The same path over a smaller chart whose coordinates are the base
    /// components listed in `keep`; the covector is untouched.
    pub fn restrict_base(&self, chart: &Arc<Chart>, keep: &[usize]) -> Result<Self> {
        if keep.len() != chart.dim() || keep.iter().any(|&i| i >= self.chart.dim()) {
            return Err(Error::DimensionMismatch("restricted base does not fit the chart".into()));
        }
        let pieces = self
            .pieces
            .iter()
            .map(|p| Piece { gamma: keep.iter().map(|&i| p.gamma[i].clone()).collect(), covector: p.covector.clone() })
            .collect();
        Ok(CotangentPath { chart: chart.clone(), pieces, is_loop: self.is_loop })
    }

    /// Base point and covector of piece `k` at local parameter `t`.
    pub fn eval_piece(&self, k: usize, t: f64) -> Result<(Vec<f64>, Vec<f64>)> {
        self.pieces[k].eval(t)
    }

    /// Covector along the whole path, with `t` rescaled so each piece takes
    /// equal time. Used by transport routines that need a single clock.
    pub fn eval_global(&self, t: f64) -> Result<(Vec<f64>, Vec<f64>)> {
        let n = self.pieces.len() as f64;
        let s = (t.clamp(0.0, 1.0) * n).min(n - 1e-15);
        let k = s.floor() as usize;
        let (g, a) = self.pieces[k].eval(s - k as f64)?;
        // dt_local/dt_global = n, so the covector scales by n.
        Ok((g, a.into_iter().map(|v| v * n).collect()))
    }

    /// Base velocity of piece `k` at `t`.
    pub fn velocity(&self, k: usize, t: f64) -> Result<Vec<f64>> {
        let env = Env::new().with(PARAM, t);
        self.pieces[k].gamma.iter().map(|e| e.diff(PARAM).eval(&env)).collect()
    }

    /// Largest sup-norm gap between `anchor(a)` and `γ̇` on a uniform grid.
    pub fn anchor_gap(
        &self,
        grid: usize,
        anchor: impl Fn(&Env, &[f64]) -> Result<Vec<f64>>,
    ) -> Result<f64> {
        let grid = grid.max(1);
        let mut worst = 0.0f64;
        for k in 0..self.pieces.len() {
            for i in 0..=grid {
                let t = i as f64 / grid as f64;
                let (g, a) = self.pieces[k].eval(t)?;
                let v = self.velocity(k, t)?;
                let env = Env::from_chart(&self.chart, &g);
                let w = anchor(&env, &a)?;
                for (x, y) in w.iter().zip(&v) {
                    worst = worst.max((x - y).abs());
                }
            }
        }
        Ok(worst)
    }

    /// `max |π♯a − γ̇| ≤ tol` on a grid of `grid` intervals per piece.
    pub fn validate(&self, pi: &PoissonStructure, grid: usize, tol: f64) -> Result<bool> {
        self.check_chart(pi.chart())?;
        if self.fiber_dim() != self.chart.dim() {
            return Err(Error::InvalidPath("covector dimension differs from the base".into()));
        }
        let n = self.chart.dim();
        let entries: Vec<Vec<Expr>> = (0..n).map(|i| (0..n).map(|j| pi.entry(i, j)).collect()).collect();
        let gap = self.anchor_gap(grid, |env, a| sharp_at(&entries, env, a))?;
        Ok(gap <= tol)
    }

    /// Validation for a path in `φ*T*N`: the anchor is `π_M♯(φ*a)`.
    pub fn validate_along(&self, phi: &SmoothMap, pi_m: &PoissonStructure, grid: usize, tol: f64) -> Result<bool> {
        self.check_chart(phi.source())?;
        if self.fiber_dim() != phi.target().dim() {
            return Err(Error::InvalidPath("covector dimension differs from the map's target".into()));
        }
        let n = self.chart.dim();
        let entries: Vec<Vec<Expr>> = (0..n).map(|i| (0..n).map(|j| pi_m.entry(i, j)).collect()).collect();
        let jac: Vec<Vec<Expr>> =
            (0..phi.target().dim()).map(|b| (0..n).map(|i| phi.jacobian(b, i)).collect()).collect();
        let gap = self.anchor_gap(grid, |env, a| {
            let mut pulled = vec![0.0; n];
            for (b, row) in jac.iter().enumerate() {
                for (i, e) in row.iter().enumerate() {
                    pulled[i] += e.eval(env)? * a[b];
                }
            }
            sharp_at(&entries, env, &pulled)
        })?;
        Ok(gap <= tol)
    }

    fn check_chart(&self, chart: &Chart) -> Result<()> {
        if self.chart.same_coords(chart) {
            Ok(())
        } else {
            Err(Error::ChartMismatch("path and structure live on different charts".into()))
        }
    }

    /// Traverse `self` then `other`.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        if !self.chart.same_coords(&other.chart) || self.fiber_dim() != other.fiber_dim() {
            return Err(Error::ChartMismatch("paths live in different spaces".into()));
        }
        let (end, start) = (self.end()?, other.start()?);
        if !close(&end, &start) {
            return Err(Error::EndpointMismatch(format!("first path ends at {end:?}, second starts at {start:?}")));
        }
        let mut pieces = self.pieces.clone();
        pieces.extend(other.pieces.iter().cloned());
        let mut out = CotangentPath { chart: self.chart.clone(), pieces, is_loop: false };
        out.is_loop = close(&out.start()?, &out.end()?);
        Ok(out)
    }

    /// `t ↦ 1 − t`, with the covector negated so that `π♯a = γ̇` persists.
    pub fn reverse(&self) -> Self {
        let flip = Expr::int(1) - Expr::var(PARAM);
        let pieces = self
            .pieces
            .iter()
            .rev()
            .map(|p| Piece {
                gamma: p.gamma.iter().map(|e| e.substitute_var(PARAM, &flip)).collect(),
                covector: p.covector.iter().map(|e| -e.substitute_var(PARAM, &flip)).collect(),
            })
            .collect();
        CotangentPath { chart: self.chart.clone(), pieces, is_loop: self.is_loop }
    }

    /// `(γ∘τ, (a∘τ)·τ')` for a monotone `τ: [0,1] → [0,1]` fixing the ends,
    /// applied to every piece.
    pub fn reparametrize(&self, tau: &Expr) -> Result<Self> {
        check_param_only(tau)?;
        let dtau = tau.diff(PARAM);
        let pieces = self
            .pieces
            .iter()
            .map(|p| Piece {
                gamma: p.gamma.iter().map(|e| e.substitute_var(PARAM, tau)).collect(),
                covector: p.covector.iter().map(|e| &dtau * e.substitute_var(PARAM, tau)).collect(),
            })
            .collect();
        Ok(CotangentPath { chart: self.chart.clone(), pieces, is_loop: self.is_loop })
    }
}

fn sharp_at(entries: &[Vec<Expr>], env: &Env, a: &[f64]) -> Result<Vec<f64>> {
    let n = entries.len();
    let mut out = vec![0.0; n];
    for (i, row) in entries.iter().enumerate() {
        if a[i] == 0.0 {
            continue;
        }
        for (j, e) in row.iter().enumerate() {
            if i != j {
                out[j] += e.eval(env)? * a[i];
            }
        }
    }
    Ok(out)
}

/// Composite Gauss–Legendre rule on each piece.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Quadrature {
    pub panels: usize,
    pub order: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature { panels: 64, order: 8 }
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    let n = order.max(1);
    if n == 1 {
        return (vec![0.0], vec![2.0]);
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            // Three-term recurrence for P_n(x) and P_{n-1}(x).
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Value of a path integral and an error estimate from halving the panels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
}

/// Anything that pairs with a covector at points of the base chart.
pub trait PathIntegrand {
    fn base_chart(&self) -> &Chart;
    fn fiber_dim(&self) -> usize;
    fn components(&self) -> Vec<Expr>;
}

impl PathIntegrand for MultiVectorField {
    fn base_chart(&self) -> &Chart {
        self.chart()
    }

    fn fiber_dim(&self) -> usize {
        self.chart().dim()
    }

    fn components(&self) -> Vec<Expr> {
        self.to_vec()
    }
}

impl PathIntegrand for VectorFieldAlongMap {
    fn base_chart(&self) -> &Chart {
        self.map().source()
    }

    fn fiber_dim(&self) -> usize {
        self.map().target().dim()
    }

    fn components(&self) -> Vec<Expr> {
        VectorFieldAlongMap::components(self).to_vec()
    }
}

fn integrate_with(comps: &[Expr], path: &CotangentPath, panels: usize, nodes: &[f64], weights: &[f64]) -> Result<f64> {
    let mut total = 0.0;
    for piece in &path.pieces {
        let h = 1.0 / panels as f64;
        for p in 0..panels {
            let mid = (p as f64 + 0.5) * h;
            for (x, w) in nodes.iter().zip(weights) {
                let t = mid + 0.5 * h * x;
                let (g, a) = piece.eval(t)?;
                let env = Env::from_chart(&path.chart, &g);
                let mut s = 0.0;
                for (c, ai) in comps.iter().zip(&a) {
                    if *ai != 0.0 {
                        s += c.eval(&env)? * ai;
                    }
                }
                total += 0.5 * h * w * s;
            }
        }
    }
    Ok(total)
}

/// `∫_a X` by composite Gauss–Legendre on every piece.
pub fn path_integral<X: PathIntegrand>(x: &X, path: &CotangentPath, quad: Quadrature) -> Result<Integral> {
    if !x.base_chart().same_coords(&path.chart) {
        return Err(Error::ChartMismatch("integrand and path live on different charts".into()));
    }
    if x.fiber_dim() != path.fiber_dim() {
        return Err(Error::InvalidPath("covector dimension does not match the integrand".into()));
    }
    let comps = x.components();
    let (nodes, weights) = gauss_legendre(quad.order);
    let panels = quad.panels.max(2);
    let fine = integrate_with(&comps, path, panels, &nodes, &weights)?;
    let coarse = integrate_with(&comps, path, panels / 2, &nodes, &weights)?;
    Ok(Integral { value: fine, error: (fine - coarse).abs() })
}

/// `c([a]) = exp(2 ∫_a X_{μ,ν})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Character {
    pub integral: Integral,
    pub value: f64,
}

/// Grid used to check that a path is admissible before integrating.
const ADMISSIBILITY_GRID: usize = 64;
const ADMISSIBILITY_TOL: f64 = 1e-6;

#[allow(clippy::too_many_arguments)]
pub fn modular_character(
    phi: &SmoothMap,
    pi_m: &PoissonStructure,
    pi_n: &PoissonStructure,
    rho_m: &VolumeDensity,
    rho_n: &VolumeDensity,
    path: &CotangentPath,
    quad: Quadrature,
    cfg: &ZeroTest,
) -> Result<Character> {
    if !path.validate_along(phi, pi_m, ADMISSIBILITY_GRID, ADMISSIBILITY_TOL)? {
        return Err(Error::InvalidPath("path is not a cotangent path for the pullback anchor".into()));
    }
    let x = map_modular_vf(phi, pi_m, pi_n, rho_m, rho_n, cfg)?;
    let integral = path_integral(&x, path, quad)?;
    Ok(Character { integral, value: (2.0 * integral.value).exp() })
}
