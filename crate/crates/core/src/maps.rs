//! Smooth maps between charts, Poisson maps, the pullback algebroid
//! `φ*T*N` through its anchor and low-degree differentials, and the modular
//! vector field of a map `X_{μ,ν} = dφ·X_μ − X_ν∘φ`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result, Witness};
use crate::expr::{find_nonzero_all, Chart, Env, Expr, ZeroTest};
use crate::mvf::{DifferentialForm, MultiVectorField};
use crate::poisson::{bracket_1forms, modular_vf, PoissonStructure, VolumeDensity};
use crate::witness::{self, Policy, SearchMode, WitnessSearch};

/// `φ: M → N` given by target components written in source coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothMap {
    source: Arc<Chart>,
    target: Arc<Chart>,
    comps: Vec<Expr>,
}

impl SmoothMap {
    pub fn new(source: &Arc<Chart>, target: &Arc<Chart>, comps: Vec<Expr>) -> Result<Self> {
        if comps.len() != target.dim() {
            return Err(Error::DimensionMismatch(format!(
                "map has {} components but the target has dimension {}",
                comps.len(),
                target.dim()
            )));
        }
        for e in &comps {
            if let Some(v) = e.variables().into_iter().find(|v| source.index_of(v).is_none()) {
                return Err(Error::ChartMismatch(format!("map component uses `{v}`, not a source coordinate")));
            }
        }
        Ok(SmoothMap { source: source.clone(), target: target.clone(), comps })
    }

    pub fn identity(chart: &Arc<Chart>) -> Self {
        SmoothMap { source: chart.clone(), target: chart.clone(), comps: (0..chart.dim()).map(|i| chart.coord_expr(i)).collect() }
    }

    pub fn source(&self) -> &Arc<Chart> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Chart> {
        &self.target
    }

    pub fn components(&self) -> &[Expr] {
        &self.comps
    }

    /// `∂φ^a/∂x^i`.
    pub fn jacobian(&self, a: usize, i: usize) -> Expr {
        self.comps[a].diff(self.source.coord(i))
    }

    /// `f∘φ` for `f` on the target.
    pub fn pull_function(&self, f: &Expr) -> Expr {
        let map: BTreeMap<&str, Expr> =
            self.target.coords().iter().map(|c| &**c).zip(self.comps.iter().cloned()).collect();
        f.substitute(&map)
    }

    /// `(φ*α)_i = Σ_a (α_a∘φ) ∂_iφ^a`.
    pub fn pull_form(&self, alpha: &DifferentialForm) -> Result<DifferentialForm> {
        if !alpha.chart().same_coords(&self.target) || alpha.degree() != 1 {
            return Err(Error::ChartMismatch("expected a 1-form on the target chart".into()));
        }
        let pulled: Vec<Expr> = alpha.to_vec().iter().map(|e| self.pull_function(e)).collect();
        let comps = (0..self.source.dim())
            .map(|i| Expr::add(pulled.iter().enumerate().map(|(a, c)| c * self.jacobian(a, i))))
            .collect();
        DifferentialForm::from_vec(&self.source, comps)
    }

    /// `dφ·X` as a field along `φ`.
    pub fn push_vector(&self, x: &MultiVectorField) -> Result<VectorFieldAlongMap> {
        if !x.chart().same_coords(&self.source) || x.degree() != 1 {
            return Err(Error::ChartMismatch("expected a vector field on the source chart".into()));
        }
        let comps = self.comps.iter().map(|phi| x.apply(phi)).collect();
        Ok(VectorFieldAlongMap { map: self.clone(), comps })
    }

    /// `ψ∘φ`.
    pub fn then(&self, psi: &SmoothMap) -> Result<SmoothMap> {
        if !psi.source.same_coords(&self.target) {
            return Err(Error::ChartMismatch("maps are not composable".into()));
        }
        let comps = psi.comps.iter().map(|e| self.pull_function(e)).collect();
        Ok(SmoothMap { source: self.source.clone(), target: psi.target.clone(), comps })
    }

    /// Numerical image of a source point.
    pub fn eval(&self, env: &Env) -> Result<Vec<f64>> {
        self.comps.iter().map(|e| e.eval(env)).collect()
    }
}

/// A section of `φ*TN`: target-direction components over source coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorFieldAlongMap {
    map: SmoothMap,
    comps: Vec<Expr>,
}

impl VectorFieldAlongMap {
    pub fn new(map: &SmoothMap, comps: Vec<Expr>) -> Result<Self> {
        if comps.len() != map.target.dim() {
            return Err(Error::DimensionMismatch(format!(
                "expected {} components along the map, got {}",
                map.target.dim(),
                comps.len()
            )));
        }
        Ok(VectorFieldAlongMap { map: map.clone(), comps })
    }

    pub fn zero(map: &SmoothMap) -> Self {
        VectorFieldAlongMap { map: map.clone(), comps: vec![Expr::zero(); map.target.dim()] }
    }

    /// `X∘φ` for a vector field on the target.
    pub fn compose(x: &MultiVectorField, map: &SmoothMap) -> Result<Self> {
        if !x.chart().same_coords(&map.target) || x.degree() != 1 {
            return Err(Error::ChartMismatch("expected a vector field on the target chart".into()));
        }
        Ok(VectorFieldAlongMap { map: map.clone(), comps: x.to_vec().iter().map(|e| map.pull_function(e)).collect() })
    }

    pub fn map(&self) -> &SmoothMap {
        &self.map
    }

    pub fn components(&self) -> &[Expr] {
        &self.comps
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.comps.len() != other.comps.len() || !self.map.source.same_coords(&other.map.source) {
            return Err(Error::ChartMismatch("fields along different maps".into()));
        }
        let comps = self.comps.iter().zip(&other.comps).map(|(a, b)| a + b).collect();
        Ok(VectorFieldAlongMap { map: self.map.clone(), comps })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&Expr::int(-1)))
    }

    pub fn scale(&self, f: &Expr) -> Self {
        VectorFieldAlongMap { map: self.map.clone(), comps: self.comps.iter().map(|e| f * e).collect() }
    }

    /// `⟨P, α∘φ⟩`.
    pub fn pair(&self, alpha: &DifferentialForm) -> Result<Expr> {
        if !alpha.chart().same_coords(&self.map.target) || alpha.degree() != 1 {
            return Err(Error::ChartMismatch("expected a 1-form on the target chart".into()));
        }
        Ok(Expr::add(self.comps.iter().enumerate().map(|(a, p)| p * self.map.pull_function(&alpha.at(a)))))
    }

    /// `dψ·P` along `ψ∘φ`.
    pub fn push(&self, psi: &SmoothMap) -> Result<VectorFieldAlongMap> {
        let composite = self.map.then(psi)?;
        let comps = psi
            .comps
            .iter()
            .map(|q| {
                Expr::add(self.comps.iter().enumerate().map(|(a, p)| {
                    p * self.map.pull_function(&q.diff(psi.source.coord(a)))
                }))
            })
            .collect();
        Ok(VectorFieldAlongMap { map: composite, comps })
    }

    pub fn find_nonzero(&self, cfg: &ZeroTest) -> Result<Option<(usize, Witness)>> {
        find_nonzero_all(&self.comps, &self.map.source, cfg)
    }

    pub fn is_zero(&self, cfg: &ZeroTest) -> Result<bool> {
        Ok(self.find_nonzero(cfg)?.is_none())
    }

    pub fn eval(&self, env: &Env) -> Result<Vec<f64>> {
        self.comps.iter().map(|e| e.eval(env)).collect()
    }
}

fn check_charts(phi: &SmoothMap, pi_m: &PoissonStructure, pi_n: Option<&PoissonStructure>) -> Result<()> {
    if !pi_m.chart().same_coords(&phi.source) {
        return Err(Error::DimensionMismatch("source structure does not live on the map's source chart".into()));
    }
    if let Some(pi_n) = pi_n {
        if !pi_n.chart().same_coords(&phi.target) {
            return Err(Error::DimensionMismatch("target structure does not live on the map's target chart".into()));
        }
    }
    Ok(())
}

/// First entry `(a,b)` of `{φ^a,φ^b}_M − π_N^{ab}∘φ` failing the zero test.
pub fn poisson_map_defect(
    phi: &SmoothMap,
    pi_m: &PoissonStructure,
    pi_n: &PoissonStructure,
    cfg: &ZeroTest,
) -> Result<Option<((usize, usize), Witness)>> {
    check_charts(phi, pi_m, Some(pi_n))?;
    let n = phi.target.dim();
    let mut pairs = Vec::new();
    let mut residuals = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let r = pi_m.bracket(&phi.comps[a], &phi.comps[b]) - phi.pull_function(&pi_n.entry(a, b));
            pairs.push((a, b));
            residuals.push(r);
        }
    }
    Ok(find_nonzero_all(&residuals, &phi.source, cfg)?.map(|(k, w)| (pairs[k], w)))
}

pub fn check_poisson_map(
    phi: &SmoothMap,
    pi_m: &PoissonStructure,
    pi_n: &PoissonStructure,
    cfg: &ZeroTest,
) -> Result<bool> {
    Ok(poisson_map_defect(phi, pi_m, pi_n, cfg)?.is_none())
}

fn require_poisson_map(phi: &SmoothMap, pi_m: &PoissonStructure, pi_n: &PoissonStructure, cfg: &ZeroTest) -> Result<()> {
    match poisson_map_defect(phi, pi_m, pi_n, cfg)? {
        Some((component, witness)) => Err(Error::NotPoissonMap { component, witness }),
        None => Ok(()),
    }
}

/// Anchor of `φ*T*N` on a generator: `π_M♯(φ*α)`.
pub fn pullback_anchor(phi: &SmoothMap, pi_m: &PoissonStructure, alpha: &DifferentialForm) -> Result<MultiVectorField> {
    check_charts(phi, pi_m, None).map_err(|_| Error::ChartMismatch("structure is not on the source chart".into()))?;
    Ok(pi_m.sharp(&phi.pull_form(alpha)?))
}

/// `⟨d_A f, φ*α⟩ = ρ_A(φ*α)(f)`.
pub fn algebroid_diff0(phi: &SmoothMap, pi_m: &PoissonStructure, f: &Expr, alpha: &DifferentialForm) -> Result<Expr> {
    Ok(pullback_anchor(phi, pi_m, alpha)?.apply(f))
}

/// `dP(φ*α, φ*β) = ρ(φ*α)⟨P,β∘φ⟩ − ρ(φ*β)⟨P,α∘φ⟩ − ⟨P,[α,β]_{π_N}∘φ⟩`.
pub fn algebroid_diff1(
    phi: &SmoothMap,
    pi_m: &PoissonStructure,
    pi_n: &PoissonStructure,
    p: &VectorFieldAlongMap,
    alpha: &DifferentialForm,
    beta: &DifferentialForm,
) -> Result<Expr> {
    check_charts(phi, pi_m, Some(pi_n))?;
    let pa = p.pair(alpha)?;
    let pb = p.pair(beta)?;
    let first = pullback_anchor(phi, pi_m, alpha)?.apply(&pb);
    let second = pullback_anchor(phi, pi_m, beta)?.apply(&pa);
    let third = p.pair(&bracket_1forms(pi_n, alpha, beta)?)?;
    Ok(first - second - third)
}

/// `dP` on all pairs of coordinate generators `(db^a, db^b)`, `a < b`.
pub fn algebroid_diff1_generators(
    phi: &SmoothMap,
    pi_m: &PoissonStructure,
    pi_n: &PoissonStructure,
    p: &VectorFieldAlongMap,
) -> Result<Vec<((usize, usize), Expr)>> {
    let n = phi.target.dim();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let da = DifferentialForm::basis(&phi.target, a);
            let db = DifferentialForm::basis(&phi.target, b);
            out.push(((a, b), algebroid_diff1(phi, pi_m, pi_n, p, &da, &db)?));
        }
    }
    Ok(out)
}

/// `[φ*α, φ*β]_{π_M} − φ*[α,β]_{π_N}`; vanishes for Poisson maps.
pub fn pullback_bracket_defect(
    phi: &SmoothMap,
    pi_m: &PoissonStructure,
    pi_n: &PoissonStructure,
    alpha: &DifferentialForm,
    beta: &DifferentialForm,
) -> Result<DifferentialForm> {
    check_charts(phi, pi_m, Some(pi_n))?;
    let lhs = bracket_1forms(pi_m, &phi.pull_form(alpha)?, &phi.pull_form(beta)?)?;
    let rhs = phi.pull_form(&bracket_1forms(pi_n, alpha, beta)?)?;
    lhs.sub(&rhs)
}

/// `X_{μ,ν} = dφ·X_μ − X_ν∘φ`.
pub fn map_modular_vf(
    phi: &SmoothMap,
    pi_m: &PoissonStructure,
    pi_n: &PoissonStructure,
    rho_m: &VolumeDensity,
    rho_n: &VolumeDensity,
    cfg: &ZeroTest,
) -> Result<VectorFieldAlongMap> {
    require_poisson_map(phi, pi_m, pi_n, cfg)?;
    let xm = modular_vf(pi_m, rho_m, cfg)?;
    let xn = modular_vf(pi_n, rho_n, cfg)?;
    phi.push_vector(&xm)?.sub(&VectorFieldAlongMap::compose(&xn, phi)?)
}

/// Residual `X_{μ,λ} − (dψ·X_{μ,ν} + X_{ν,λ}∘φ)` along `ψ∘φ`.
#[allow(clippy::too_many_arguments)]
pub fn check_composition(
    phi: &SmoothMap,
    psi: &SmoothMap,
    pi_m: &PoissonStructure,
    pi_n: &PoissonStructure,
    pi_q: &PoissonStructure,
    rho_m: &VolumeDensity,
    rho_n: &VolumeDensity,
    rho_q: &VolumeDensity,
    cfg: &ZeroTest,
) -> Result<VectorFieldAlongMap> {
    let composite = phi.then(psi)?;
    let x_ml = map_modular_vf(&composite, pi_m, pi_q, rho_m, rho_q, cfg)?;
    let x_mn = map_modular_vf(phi, pi_m, pi_n, rho_m, rho_n, cfg)?;
    let x_nl = map_modular_vf(psi, pi_n, pi_q, rho_n, rho_q, cfg)?;
    let pulled = VectorFieldAlongMap {
        map: composite.clone(),
        comps: x_nl.comps.iter().map(|e| phi.pull_function(e)).collect(),
    };
    let rhs = x_mn.push(psi)?.add(&pulled)?;
    let comps = x_ml.comps.iter().zip(&rhs.comps).map(|(a, b)| a - b).collect();
    Ok(VectorFieldAlongMap { map: composite, comps })
}

/// Searches for `f` on the source with `P = −dφ·X_f`, i.e. `P^a = −{f, φ^a}`.
pub fn map_exactness_witness(
    phi: &SmoothMap,
    pi_m: &PoissonStructure,
    p: &VectorFieldAlongMap,
    cap: u32,
    policy: Policy,
    cfg: &ZeroTest,
) -> Result<(WitnessSearch, SearchMode)> {
    check_charts(phi, pi_m, None)?;
    let op = |f: &Expr| phi.comps.iter().map(|c| -pi_m.bracket(f, c)).collect::<Vec<_>>();
    witness::search(&phi.source, op, &p.comps, cap, policy, cfg)
}

#[cfg(test)]
mod tests;
