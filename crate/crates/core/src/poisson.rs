//! Poisson structures, volume densities, hamiltonian and modular vector
//! fields, the bracket of 1-forms and linear Poisson structures.
//!
//! Conventions: `{f,g} = π(df,dg)`, `⟨β, π♯α⟩ = π(α,β)`, `X_h = π♯dh = {h,·}`.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::expr::{Chart, Expr, Sampler, ZeroTest};
use crate::mvf::{lie_derivative_form, schouten, DifferentialForm, MultiVectorField};
use crate::witness::{self, Policy, SearchMode, WitnessSearch};

/// A bivector whose Schouten square passed the zero test.
#[derive(Debug, Clone, PartialEq)]
pub struct PoissonStructure {
    pi: MultiVectorField,
}

impl PoissonStructure {
    /// Validates the Jacobi identity `[π,π] = 0`.
    pub fn new(bivector: MultiVectorField, cfg: &ZeroTest) -> Result<Self> {
        if bivector.degree() != 2 {
            return Err(Error::DegreeMismatch { expected: 2, found: bivector.degree() });
        }
        let square = schouten(&bivector, &bivector)?;
        if let Some((component, witness)) = square.find_nonzero(cfg)? {
            return Err(Error::JacobiFailed { component, witness });
        }
        Ok(PoissonStructure { pi: bivector })
    }

    /// Builds from entries `π^{ij}` given by coordinate names.
    pub fn from_entries(chart: &Arc<Chart>, entries: &[(&str, &str, Expr)], cfg: &ZeroTest) -> Result<Self> {
        let mut comps = Vec::with_capacity(entries.len());
        for (a, b, e) in entries {
            let i = chart.index_of(a).ok_or_else(|| Error::InvalidChart(format!("unknown coordinate `{a}`")))?;
            let j = chart.index_of(b).ok_or_else(|| Error::InvalidChart(format!("unknown coordinate `{b}`")))?;
            if i == j {
                return Err(Error::DimensionMismatch(format!("diagonal entry ({a},{a}) of a bivector")));
            }
            comps.push((vec![i, j], e.clone()));
        }
        Self::new(MultiVectorField::from_components(chart, 2, comps)?, cfg)
    }

    pub fn zero(chart: &Arc<Chart>) -> Self {
        PoissonStructure { pi: MultiVectorField::zero(chart, 2) }
    }

    pub fn chart(&self) -> &Arc<Chart> {
        self.pi.chart()
    }

    pub fn bivector(&self) -> &MultiVectorField {
        &self.pi
    }

    /// `π^{ij}`.
    pub fn entry(&self, i: usize, j: usize) -> Expr {
        self.pi.get(&[i, j])
    }

    /// `π(α, β) = Σ π^{ij} α_i β_j`.
    pub fn eval_pair(&self, alpha: &DifferentialForm, beta: &DifferentialForm) -> Expr {
        let mut terms = Vec::new();
        for (idx, p) in self.pi.components() {
            let (i, j) = (idx[0], idx[1]);
            terms.push(p * (alpha.at(i) * beta.at(j) - alpha.at(j) * beta.at(i)));
        }
        Expr::add(terms)
    }

    /// `(π♯α)^j = Σ_i π^{ij} α_i`.
    pub fn sharp(&self, alpha: &DifferentialForm) -> MultiVectorField {
        let n = self.chart().dim();
        let comps = (0..n)
            .map(|j| Expr::add((0..n).map(|i| self.entry(i, j) * alpha.at(i))))
            .collect();
        MultiVectorField::from_vec(self.chart(), comps).expect("dimension matches chart")
    }

    /// `{f, g}`.
    pub fn bracket(&self, f: &Expr, g: &Expr) -> Expr {
        let c = self.chart();
        let mut terms = Vec::new();
        for (idx, p) in self.pi.components() {
            let (a, b) = (c.coord(idx[0]), c.coord(idx[1]));
            terms.push(p * (f.diff(a) * g.diff(b) - f.diff(b) * g.diff(a)));
        }
        Expr::add(terms)
    }

    pub fn hamiltonian_vf(&self, h: &Expr) -> MultiVectorField {
        self.sharp(&DifferentialForm::exact(self.chart(), h))
    }

    /// Wraps a bivector already known to satisfy Jacobi.
    pub(crate) fn from_validated(pi: MultiVectorField) -> Self {
        PoissonStructure { pi }
    }
}

pub fn make_poisson(bivector: MultiVectorField, cfg: &ZeroTest) -> Result<PoissonStructure> {
    PoissonStructure::new(bivector, cfg)
}

pub fn hamiltonian_vf(pi: &PoissonStructure, h: &Expr) -> MultiVectorField {
    pi.hamiltonian_vf(h)
}

/// Poisson coboundary `d_π A = [π, A]`.
pub fn d_pi(pi: &PoissonStructure, a: &MultiVectorField) -> Result<MultiVectorField> {
    schouten(pi.bivector(), a)
}

/// `[α,β] = L_{π♯α}β − L_{π♯β}α − dπ(α,β)`.
pub fn bracket_1forms(
    pi: &PoissonStructure,
    alpha: &DifferentialForm,
    beta: &DifferentialForm,
) -> Result<DifferentialForm> {
    for f in [alpha, beta] {
        if f.degree() != 1 {
            return Err(Error::DegreeMismatch { expected: 1, found: f.degree() });
        }
        if !f.chart().same_coords(pi.chart()) {
            return Err(Error::ChartMismatch("1-form and Poisson structure live on different charts".into()));
        }
    }
    let a = lie_derivative_form(&pi.sharp(alpha), beta)?;
    let b = lie_derivative_form(&pi.sharp(beta), alpha)?;
    let c = DifferentialForm::exact(pi.chart(), &pi.eval_pair(alpha, beta));
    a.sub(&b)?.sub(&c)
}

/// Positive density `ρ` of the volume form `ρ dx¹∧…∧dxⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct VolumeDensity {
    chart: Arc<Chart>,
    rho: Expr,
}

impl VolumeDensity {
    /// Checks positivity at `cfg.trials` sample points.
    pub fn new(chart: &Arc<Chart>, rho: Expr, cfg: &ZeroTest) -> Result<Self> {
        let mut extra = rho.variables();
        extra.retain(|v| chart.index_of(v).is_none());
        if let Some(v) = extra.into_iter().next() {
            return Err(Error::ChartMismatch(format!("density uses unknown variable `{v}`")));
        }
        if let Some(c) = rho.as_const() {
            if c <= &BigRational::zero() {
                let value = crate::linalg::to_f64(c);
                return Err(Error::NonPositiveDensity { witness: crate::error::Witness { point: Vec::new(), value } });
            }
        } else {
            let mut sampler = Sampler::new(chart, [], cfg.seed);
            for _ in 0..cfg.trials {
                let mut value = 0.0;
                let env = sampler.next_valid(|env| match rho.eval(env) {
                    Ok(v) => {
                        value = v;
                        true
                    }
                    Err(_) => false,
                })?;
                if value <= 0.0 {
                    return Err(Error::NonPositiveDensity { witness: env.to_witness(value) });
                }
            }
        }
        Ok(VolumeDensity { chart: chart.clone(), rho })
    }

    pub fn lebesgue(chart: &Arc<Chart>) -> Self {
        VolumeDensity { chart: chart.clone(), rho: Expr::one() }
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn rho(&self) -> &Expr {
        &self.rho
    }

    pub fn form(&self) -> DifferentialForm {
        DifferentialForm::top(&self.chart, self.rho.clone())
    }

    /// `g·ρ` for a positive `g`.
    pub fn scaled(&self, g: &Expr, cfg: &ZeroTest) -> Result<Self> {
        VolumeDensity::new(&self.chart, g * &self.rho, cfg)
    }
}

/// The modular vector field `X_μ^i = (1/ρ) Σ_j ∂_j(ρ π^{ij})`, the
/// first-order part of `f ↦ (1/ρ) Σ_j ∂_j(ρ X_f^j)`.
pub fn modular_vf(pi: &PoissonStructure, rho: &VolumeDensity, cfg: &ZeroTest) -> Result<MultiVectorField> {
    let chart = pi.chart();
    if !chart.same_coords(rho.chart()) {
        return Err(Error::ChartMismatch("density and Poisson structure live on different charts".into()));
    }
    let n = chart.dim();
    // Second-order coefficients are the symmetric part of π^{ij}.
    let sym: Vec<Expr> = (0..n)
        .flat_map(|i| (i..n).map(move |j| (i, j)))
        .map(|(i, j)| pi.entry(i, j) + pi.entry(j, i))
        .collect();
    if let Some((_, witness)) = crate::expr::find_nonzero_all(&sym, chart, cfg)? {
        return Err(Error::SecondOrderResidue { witness });
    }
    let r = rho.rho();
    let log_grad: Vec<Expr> = if r.as_const().is_some() {
        vec![Expr::zero(); n]
    } else {
        (0..n).map(|j| r.diff(chart.coord(j)) / r).collect()
    };
    let comps = (0..n)
        .map(|i| {
            Expr::add((0..n).map(|j| {
                let p = pi.entry(i, j);
                p.diff(chart.coord(j)) + p * &log_grad[j]
            }))
        })
        .collect();
    MultiVectorField::from_vec(chart, comps)
}

/// Structure constants `c^k_{ij}` of a Lie algebra, `[e_i, e_j] = Σ_k c^k_{ij} e_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebraData {
    dim: usize,
    c: Vec<Vec<Vec<BigRational>>>,
}

impl LieAlgebraData {
    /// `c[i][j][k] = c^k_{ij}`; checks antisymmetry and the Jacobi identity exactly.
    pub fn new(c: Vec<Vec<Vec<BigRational>>>) -> Result<Self> {
        let d = c.len();
        if c.iter().any(|row| row.len() != d || row.iter().any(|v| v.len() != d)) {
            return Err(Error::InvalidLieAlgebra("structure constants must be a d×d×d array".into()));
        }
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    if c[i][j][k] != -c[j][i][k].clone() {
                        return Err(Error::InvalidLieAlgebra(format!("c^{k}_{{{i}{j}}} is not antisymmetric")));
                    }
                }
            }
        }
        for i in 0..d {
            for j in 0..d {
                for l in 0..d {
                    for k in 0..d {
                        let mut s = BigRational::zero();
                        for m in 0..d {
                            s += &c[i][j][m] * &c[m][l][k];
                            s += &c[j][l][m] * &c[m][i][k];
                            s += &c[l][i][m] * &c[m][j][k];
                        }
                        if !s.is_zero() {
                            return Err(Error::InvalidLieAlgebra(format!(
                                "Jacobi identity fails for (e{i}, e{j}, e{l})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(LieAlgebraData { dim: d, c })
    }

    /// From nonzero brackets `(i, j, k, c)` meaning `c^k_{ij} = c`.
    pub fn from_brackets(dim: usize, entries: &[(usize, usize, usize, BigRational)]) -> Result<Self> {
        let mut c = vec![vec![vec![BigRational::zero(); dim]; dim]; dim];
        for (i, j, k, v) in entries {
            if *i >= dim || *j >= dim || *k >= dim {
                return Err(Error::InvalidLieAlgebra(format!("index out of range in ({i},{j},{k})")));
            }
            c[*i][*j][*k] = v.clone();
            c[*j][*i][*k] = -v.clone();
        }
        Self::new(c)
    }

    pub fn abelian(dim: usize) -> Self {
        LieAlgebraData { dim, c: vec![vec![vec![BigRational::zero(); dim]; dim]; dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `c^k_{ij}`.
    pub fn constant(&self, i: usize, j: usize, k: usize) -> &BigRational {
        &self.c[i][j][k]
    }

    /// `ϑ₀_i = tr(ad e_i) = Σ_j c^j_{ij}`.
    pub fn adjoint_character(&self) -> Vec<BigRational> {
        (0..self.dim).map(|i| (0..self.dim).map(|j| self.c[i][j][j].clone()).sum()).collect()
    }

    pub fn is_unimodular(&self) -> bool {
        self.adjoint_character().iter().all(Zero::is_zero)
    }
}

pub fn adjoint_character(g: &LieAlgebraData) -> Vec<BigRational> {
    g.adjoint_character()
}

/// The linear Poisson structure `π^{ij} = Σ_k c^k_{ij} x_k` on a chart of the dual.
pub fn linear_poisson(g: &LieAlgebraData, chart: &Arc<Chart>, cfg: &ZeroTest) -> Result<PoissonStructure> {
    if chart.dim() != g.dim() {
        return Err(Error::DimensionMismatch(format!(
            "dual chart has dimension {}, algebra has dimension {}",
            chart.dim(),
            g.dim()
        )));
    }
    let d = g.dim();
    let mut comps = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            let e = Expr::add((0..d).map(|k| Expr::scale(g.constant(i, j, k).clone(), chart.coord_expr(k))));
            comps.push((vec![i, j], e));
        }
    }
    PoissonStructure::new(MultiVectorField::from_components(chart, 2, comps)?, cfg)
}

/// Searches for a polynomial `h` of degree ≤ `cap` with `X = X_h`.
pub fn hamiltonian_witness(pi: &PoissonStructure, x: &MultiVectorField, cap: u32) -> Result<WitnessSearch> {
    Ok(hamiltonian_witness_with(pi, x, cap, Policy::ExactOnly, &ZeroTest::default())?.0)
}

/// As [`hamiltonian_witness`], optionally falling back to sampled
/// collocation for non-polynomial input.
pub fn hamiltonian_witness_with(
    pi: &PoissonStructure,
    x: &MultiVectorField,
    cap: u32,
    policy: Policy,
    cfg: &ZeroTest,
) -> Result<(WitnessSearch, SearchMode)> {
    if x.degree() != 1 {
        return Err(Error::DegreeMismatch { expected: 1, found: x.degree() });
    }
    if !x.chart().same_coords(pi.chart()) {
        return Err(Error::ChartMismatch("vector field and Poisson structure live on different charts".into()));
    }
    witness::search(pi.chart(), |h| pi.hamiltonian_vf(h).to_vec(), &x.to_vec(), cap, policy, cfg)
}
