//! Poisson submanifolds given as coordinate zero sets, their relative
//! modular field and linear holonomy.
//!
//! The conormal bundle `ν*(N)` is spanned by the differentials `dx^m` of the
//! transverse coordinates. Along a cotangent path `a` the Bott-type connection
//! `∇_α β = [α, β]_π` transports conormal frames; the normal holonomy is the
//! inverse transpose of that transport.

use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::expr::{find_nonzero_all, Chart, Env, Expr, ZeroTest};
use crate::maps::{SmoothMap, VectorFieldAlongMap};
use crate::mvf::DifferentialForm;
use crate::paths::{path_integral, CotangentPath, Integral, Quadrature, PARAM};
use crate::poisson::{bracket_1forms, modular_vf, PoissonStructure, VolumeDensity};

/// Relative size of tangential leakage tolerated in `[α, dx^m]|_N`.
const LEAK_TOL: f64 = 1e-8;
/// Grid and tolerance for checking that a path is admissible.
const PATH_GRID: usize = 64;
const PATH_TOL: f64 = 1e-6;

/// `N = {x^m = 0 : m transverse}` inside an ambient chart.
#[derive(Debug, Clone, PartialEq)]
pub struct SubmanifoldSpec {
    ambient: Arc<Chart>,
    transverse: Vec<usize>,
    tangential: Vec<usize>,
    chart: Arc<Chart>,
}

impl SubmanifoldSpec {
    pub fn new<S: AsRef<str>>(ambient: &Arc<Chart>, transverse: &[S]) -> Result<Self> {
        let mut idx = Vec::new();
        for name in transverse {
            let name = name.as_ref();
            let i = ambient
                .index_of(name)
                .ok_or_else(|| Error::InvalidChart(format!("`{name}` is not an ambient coordinate")))?;
            if idx.contains(&i) {
                return Err(Error::InvalidChart(format!("transverse coordinate `{name}` listed twice")));
            }
            idx.push(i);
        }
        idx.sort_unstable();
        let tangential: Vec<usize> = (0..ambient.dim()).filter(|i| !idx.contains(i)).collect();
        let names: Vec<&str> = tangential.iter().map(|&i| ambient.coord(i)).collect();
        let chart = Arc::new(Chart::new(&names)?);
        Ok(SubmanifoldSpec { ambient: ambient.clone(), transverse: idx, tangential, chart })
    }

    pub fn ambient(&self) -> &Arc<Chart> {
        &self.ambient
    }

    /// Induced chart on `N`.
    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn transverse(&self) -> &[usize] {
        &self.transverse
    }

    pub fn tangential(&self) -> &[usize] {
        &self.tangential
    }

    pub fn codim(&self) -> usize {
        self.transverse.len()
    }

    /// `f|_N`: transverse coordinates set to zero.
    pub fn restrict(&self, f: &Expr) -> Expr {
        let zero: BTreeMap<&str, Expr> =
            self.transverse.iter().map(|&m| (self.ambient.coord(m), Expr::zero())).collect();
        f.substitute(&zero)
    }

    /// The inclusion `N → M`.
    pub fn inclusion(&self) -> SmoothMap {
        let comps = (0..self.ambient.dim())
            .map(|i| if self.transverse.contains(&i) { Expr::zero() } else { self.ambient.coord_expr(i) })
            .collect();
        SmoothMap::new(&self.chart, &self.ambient, comps).expect("inclusion components use tangential coordinates")
    }

    /// `π♯(dx^m)|_N = 0` for every transverse `m`, i.e. `π^{jm}|_N = 0` for all `j`.
    pub fn check_poisson(&self, pi: &PoissonStructure, cfg: &ZeroTest) -> Result<()> {
        if !pi.chart().same_coords(&self.ambient) {
            return Err(Error::ChartMismatch("structure is not on the ambient chart".into()));
        }
        let mut pairs = Vec::new();
        let mut exprs = Vec::new();
        for &m in &self.transverse {
            for j in 0..self.ambient.dim() {
                if j == m || (self.transverse.contains(&j) && j < m) {
                    continue;
                }
                pairs.push((j, m));
                exprs.push(self.restrict(&pi.entry(j, m)));
            }
        }
        match find_nonzero_all(&exprs, &self.chart, cfg)? {
            Some((k, witness)) => {
                let (j, m) = pairs[k];
                Err(Error::NotPoissonSubmanifold {
                    component: (self.ambient.coord(j).to_string(), self.ambient.coord(m).to_string()),
                    witness,
                })
            }
            None => Ok(()),
        }
    }
}

/// The induced structure `π_N` on the submanifold chart.
pub fn restrict_poisson(pi: &PoissonStructure, n: &SubmanifoldSpec, cfg: &ZeroTest) -> Result<PoissonStructure> {
    n.check_poisson(pi, cfg)?;
    let mut entries = Vec::new();
    for (a, &i) in n.tangential.iter().enumerate() {
        for (b, &j) in n.tangential.iter().enumerate().skip(a + 1) {
            let e = n.restrict(&pi.entry(i, j));
            if !e.is_zero_literal() {
                entries.push((n.chart.coord(a), n.chart.coord(b), e));
            }
        }
    }
    PoissonStructure::from_entries(&n.chart, &entries, cfg)
}

/// `X_μ|_N − X_ν` as a field along the inclusion. This represents the
/// relative class, which is minus the modular class of the inclusion.
pub fn relative_modular_vf(
    pi: &PoissonStructure,
    rho_m: &VolumeDensity,
    rho_n: &VolumeDensity,
    n: &SubmanifoldSpec,
    cfg: &ZeroTest,
) -> Result<VectorFieldAlongMap> {
    let pi_n = restrict_poisson(pi, n, cfg)?;
    let xm = modular_vf(pi, rho_m, cfg)?;
    let xn = modular_vf(&pi_n, rho_n, cfg)?;
    let mut comps: Vec<Expr> = xm.to_vec().iter().map(|e| n.restrict(e)).collect();
    for (a, &i) in n.tangential.iter().enumerate() {
        comps[i] = &comps[i] - xn.at(a);
    }
    VectorFieldAlongMap::new(&n.inclusion(), comps)
}

/// Normal holonomy along a cotangent path.
#[derive(Debug, Clone, PartialEq)]
pub struct HolonomyResult {
    /// `h` on the frame `∂_m` of transverse coordinate fields.
    pub matrix: DMatrix<f64>,
    pub det: f64,
    /// Change in `det h` when the step count is halved.
    pub ode_error: f64,
}

/// Connection coefficients `[α, dx^m]|_N` split into conormal and tangential parts.
struct Coefficients {
    /// `gamma[m][m']`: coefficient of `dx^{m'}` in `[α, dx^m]|_N`.
    gamma: Vec<Vec<Expr>>,
    /// `(j, expr)`: tangential components of the same brackets.
    leak: Vec<(usize, Expr)>,
}

fn coefficients(pi: &PoissonStructure, n: &SubmanifoldSpec, alpha: &DifferentialForm) -> Result<Coefficients> {
    let mut gamma = Vec::with_capacity(n.codim());
    let mut leak = Vec::new();
    for &m in &n.transverse {
        let br = bracket_1forms(pi, alpha, &DifferentialForm::basis(pi.chart(), m))?;
        gamma.push(n.transverse.iter().map(|&mp| n.restrict(&br.at(mp))).collect());
        for &j in &n.tangential {
            let e = n.restrict(&br.at(j));
            if !e.is_zero_literal() {
                leak.push((j, e));
            }
        }
    }
    Ok(Coefficients { gamma, leak })
}

fn ensure_on_path(path: &CotangentPath, pi: &PoissonStructure, n: &SubmanifoldSpec) -> Result<()> {
    if !path.chart().same_coords(&n.ambient) {
        return Err(Error::ChartMismatch("path is not on the ambient chart".into()));
    }
    if !path.validate(pi, PATH_GRID, PATH_TOL)? {
        return Err(Error::InvalidPath("not a cotangent path for this structure".into()));
    }
    for k in 0..path.piece_count() {
        for i in 0..=PATH_GRID {
            let (g, _) = path.eval_piece(k, i as f64 / PATH_GRID as f64)?;
            if let Some(&m) = n.transverse.iter().find(|&&m| g[m].abs() > 1e-9) {
                return Err(Error::InvalidPath(format!("base curve leaves N in direction `{}`", n.ambient.coord(m))));
            }
        }
    }
    Ok(())
}

fn check_extension(path: &CotangentPath, ext: &[Expr]) -> Result<()> {
    for i in 0..=PATH_GRID {
        let t = i as f64 / PATH_GRID as f64;
        let (g, a) = path.eval_piece(0, t)?;
        let env = Env::from_chart(path.chart(), &g).with(PARAM, t);
        for (e, ai) in ext.iter().zip(&a) {
            let v = e.eval(&env)?;
            if (v - ai).abs() > 1e-9 * (1.0 + ai.abs()) {
                return Err(Error::InvalidPath(format!("extension differs from the covector curve at t={t}")));
            }
        }
    }
    Ok(())
}

/// Conormal fundamental matrix `Φ(1)` for `Φ' = −Γᵀ Φ` over all pieces.
fn conormal_transport(
    pi: &PoissonStructure,
    n: &SubmanifoldSpec,
    path: &CotangentPath,
    extension: Option<&[Expr]>,
    steps: usize,
) -> Result<DMatrix<f64>> {
    let k = n.codim();
    let pieces = path.piece_count();
    let mut phi = DMatrix::<f64>::identity(k, k);
    for p in 0..pieces {
        let comps = match extension {
            Some(ext) => ext.to_vec(),
            None => path.covector_exprs(p).to_vec(),
        };
        let alpha = DifferentialForm::from_vec(pi.chart(), comps)?;
        let co = coefficients(pi, n, &alpha)?;
        let rhs = |t: f64| -> Result<DMatrix<f64>> {
            let (g, _) = path.eval_piece(p, t)?;
            let env = Env::from_chart(path.chart(), &g).with(PARAM, t);
            let mut m = DMatrix::<f64>::zeros(k, k);
            let mut scale = 1.0f64;
            for r in 0..k {
                for c in 0..k {
                    let v = co.gamma[r][c].eval(&env)?;
                    scale = scale.max(v.abs());
                    // Φ' = −Γᵀ Φ
                    m[(c, r)] = -v;
                }
            }
            for (j, e) in &co.leak {
                let v = e.eval(&env)?;
                if v.abs() > LEAK_TOL * scale {
                    return Err(Error::ConormalLeak {
                        direction: n.ambient.coord(*j).to_string(),
                        t: (p as f64 + t) / pieces as f64,
                        value: v,
                    });
                }
            }
            Ok(m)
        };
        let h = 1.0 / steps as f64;
        for s in 0..steps {
            let t = s as f64 * h;
            let (a0, a1, a2) = (rhs(t)?, rhs(t + 0.5 * h)?, rhs(t + h)?);
            let k1 = &a0 * &phi;
            let k2 = &a1 * (&phi + &k1 * (0.5 * h));
            let k3 = &a1 * (&phi + &k2 * (0.5 * h));
            let k4 = &a2 * (&phi + &k3 * h);
            phi += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
            if phi.iter().any(|v| !v.is_finite()) {
                return Err(Error::OdeFailure(format!("non-finite state at step {s} of piece {p}")));
            }
        }
    }
    Ok(phi)
}

fn normal_from_conormal(phi: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    phi.clone()
        .try_inverse()
        .map(|inv| inv.transpose())
        .ok_or_else(|| Error::OdeFailure("conormal transport is singular".into()))
}

/// Linear holonomy of `N` along `path` by RK4 with `steps` steps per piece.
/// Without an explicit extension the covector curve is extended constantly
/// in space; an explicit extension is a list of 1-form components in the
/// ambient coordinates and `t`, and is only accepted for single-piece paths.
pub fn transport(
    pi: &PoissonStructure,
    n: &SubmanifoldSpec,
    path: &CotangentPath,
    extension: Option<&[Expr]>,
    steps: usize,
) -> Result<HolonomyResult> {
    let cfg = ZeroTest::default();
    n.check_poisson(pi, &cfg)?;
    ensure_on_path(path, pi, n)?;
    if let Some(ext) = extension {
        if path.piece_count() != 1 {
            return Err(Error::InvalidPath("an explicit extension needs a single-piece path".into()));
        }
        if ext.len() != n.ambient.dim() {
            return Err(Error::DimensionMismatch("extension must have one component per ambient coordinate".into()));
        }
        check_extension(path, ext)?;
    }
    if n.codim() == 0 {
        return Ok(HolonomyResult { matrix: DMatrix::zeros(0, 0), det: 1.0, ode_error: 0.0 });
    }
    let steps = steps.max(2);
    let fine = normal_from_conormal(&conormal_transport(pi, n, path, extension, steps)?)?;
    let coarse = normal_from_conormal(&conormal_transport(pi, n, path, extension, steps / 2)?)?;
    let det = fine.determinant();
    if det.abs() < 1e-300 {
        return Err(Error::OdeFailure("normal holonomy is singular".into()));
    }
    Ok(HolonomyResult { ode_error: (det - coarse.determinant()).abs(), det, matrix: fine })
}

/// Both sides of the holonomy identity `det h = exp(∫_a (X_μ|_N − X_ν))`.
#[derive(Debug, Clone, PartialEq)]
pub struct HolonomyIdentity {
    pub holonomy: HolonomyResult,
    pub integral: Integral,
    /// `det h` measured against the normal volumes `ρ_M|_N / ρ_N` at the ends.
    pub normalized_det: f64,
    /// Relative residual of the loop identity; `None` for open paths.
    pub loop_residual: Option<f64>,
    /// Relative residual of the volume-normalized identity.
    pub open_residual: f64,
}

#[allow(clippy::too_many_arguments)]
pub fn verify_holonomy_identity(
    pi: &PoissonStructure,
    n: &SubmanifoldSpec,
    rho_m: &VolumeDensity,
    rho_n: &VolumeDensity,
    path: &CotangentPath,
    steps: usize,
    quad: Quadrature,
    cfg: &ZeroTest,
) -> Result<HolonomyIdentity> {
    let holonomy = transport(pi, n, path, None, steps)?;
    let rel = relative_modular_vf(pi, rho_m, rho_n, n, cfg)?;
    let on_n = path.restrict_base(&n.chart, &n.tangential)?;
    let integral = path_integral(&rel, &on_n, quad)?;
    let expected = integral.value.exp();
    let ratio = |amb: &[f64], base: &[f64]| -> Result<f64> {
        let m = rho_m.rho().eval(&Env::from_chart(&n.ambient, amb))?;
        let b = rho_n.rho().eval(&Env::from_chart(&n.chart, base))?;
        Ok(m / b)
    };
    let r0 = ratio(&path.start()?, &on_n.start()?)?;
    let r1 = ratio(&path.end()?, &on_n.end()?)?;
    let normalized_det = holonomy.det * r1 / r0;
    let rel_err = |v: f64| (v - expected).abs() / expected.abs();
    Ok(HolonomyIdentity {
        loop_residual: path.is_loop().then(|| rel_err(holonomy.det)),
        open_residual: rel_err(normalized_det),
        normalized_det,
        integral,
        holonomy,
    })
}

/// Whether `[dx^m, dx^{m'}]|_N` has no conormal part for all transverse pairs,
/// i.e. the isotropy on `ν*(N)` is abelian.
pub fn conormal_abelian_check(pi: &PoissonStructure, n: &SubmanifoldSpec, cfg: &ZeroTest) -> Result<bool> {
    n.check_poisson(pi, cfg)?;
    let mut exprs = Vec::new();
    for (a, &m) in n.transverse.iter().enumerate() {
        for &mp in &n.transverse[a + 1..] {
            let br = bracket_1forms(pi, &DifferentialForm::basis(pi.chart(), m), &DifferentialForm::basis(pi.chart(), mp))?;
            exprs.extend(n.transverse.iter().map(|&c| n.restrict(&br.at(c))));
        }
    }
    Ok(find_nonzero_all(&exprs, &n.chart, cfg)?.is_none())
}

#[cfg(test)]
mod tests;
