//! Infinitesimal Poisson actions with `π_G = 0`: validation, the quotient
//! volume `μ = (μ_G ∧ φ*ν)/⟨μ_G, ξ¹∧…∧ξ^d⟩`, the modular class of the action,
//! moment maps into `𝔤*` and hamiltonian quotients.
//!
//! Generators are anti-homomorphic: `[ξ_i, ξ_j] = −Σ_k c^k_{ij} ξ_k`, which is
//! what a left action produces. Equivariant moment maps are then Poisson into
//! `𝔤*` with the opposite of the linear structure, `{κ_i, κ_j} = −Σ_k c^k_{ij} κ_k`.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_rational::BigRational;

use crate::error::{Error, Result, Witness};
use crate::expr::{find_nonzero_all, Chart, Env, Expr, Sampler, ZeroTest};
use crate::linalg::rationalize;
use crate::maps::{check_poisson_map, map_modular_vf, poisson_map_defect, SmoothMap, VectorFieldAlongMap};
use crate::mvf::{lie_derivative, schouten, MultiVectorField};
use crate::poisson::{linear_poisson, modular_vf, LieAlgebraData, PoissonStructure, VolumeDensity};

/// Points drawn when checking pointwise independence of the generators.
const RANK_SAMPLES: usize = 16;
const RANK_TOL: f64 = 1e-8;
/// Points drawn to decide the sign of the quotient density.
const SIGN_SAMPLES: usize = 16;

/// `d` generators of an infinitesimal action together with the quotient data.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupAction {
    chart: Arc<Chart>,
    algebra: LieAlgebraData,
    generators: Vec<MultiVectorField>,
    g_pair: Expr,
    quotient: SmoothMap,
    pi_quotient: PoissonStructure,
}

impl GroupAction {
    pub fn new(
        algebra: LieAlgebraData,
        generators: Vec<MultiVectorField>,
        quotient: SmoothMap,
        pi_quotient: PoissonStructure,
    ) -> Result<Self> {
        let chart = quotient.source().clone();
        if generators.len() != algebra.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} generators for an algebra of dimension {}",
                generators.len(),
                algebra.dim()
            )));
        }
        if generators.iter().any(|x| x.degree() != 1 || !x.chart().same_coords(&chart)) {
            return Err(Error::ChartMismatch("generators must be vector fields on the quotient map's source".into()));
        }
        if !pi_quotient.chart().same_coords(quotient.target()) {
            return Err(Error::ChartMismatch("quotient structure must live on the quotient map's target".into()));
        }
        if algebra.dim() + quotient.target().dim() != chart.dim() {
            return Err(Error::DimensionMismatch(format!(
                "group dimension {} plus quotient dimension {} differs from {}",
                algebra.dim(),
                quotient.target().dim(),
                chart.dim()
            )));
        }
        Ok(GroupAction { chart, algebra, generators, g_pair: Expr::one(), quotient, pi_quotient })
    }

    /// Sets `⟨μ_G, ξ¹∧…∧ξ^d⟩`; it scales `μ_G` and cancels in the quotient volume.
    pub fn with_pairing(mut self, g_pair: Expr) -> Self {
        self.g_pair = g_pair;
        self
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn algebra(&self) -> &LieAlgebraData {
        &self.algebra
    }

    pub fn generators(&self) -> &[MultiVectorField] {
        &self.generators
    }

    pub fn pairing(&self) -> &Expr {
        &self.g_pair
    }

    pub fn quotient(&self) -> &SmoothMap {
        &self.quotient
    }

    pub fn pi_quotient(&self) -> &PoissonStructure {
        &self.pi_quotient
    }
}

/// Names of the invariants confirmed by [`validate_action`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionReport {
    pub checked: Vec<&'static str>,
}

fn invalid(invariant: &str, detail: String) -> Error {
    Error::InvalidAction { invariant: invariant.to_string(), detail }
}

/// Checks the representation property, `L_ξ π = 0`, invariance of the
/// quotient map, that it is Poisson, and pointwise independence of the
/// generators.
pub fn validate_action(act: &GroupAction, pi: &PoissonStructure, cfg: &ZeroTest) -> Result<ActionReport> {
    if !pi.chart().same_coords(&act.chart) {
        return Err(Error::ChartMismatch("structure is not on the action's chart".into()));
    }
    let d = act.algebra.dim();
    let xi = &act.generators;
    for i in 0..d {
        for j in i + 1..d {
            let mut expected = MultiVectorField::zero(&act.chart, 1);
            for (k, x) in xi.iter().enumerate() {
                expected = expected.sub(&x.scale(&Expr::constant(act.algebra.constant(i, j, k).clone())))?;
            }
            let residual = schouten(&xi[i], &xi[j])?.sub(&expected)?;
            if let Some((_, w)) = residual.find_nonzero(cfg)? {
                return Err(invalid("representation", format!("[ξ{}, ξ{}] ≠ −Σ c^k ξk at {w}", i + 1, j + 1)));
            }
        }
    }
    for (i, x) in xi.iter().enumerate() {
        if let Some((idx, w)) = lie_derivative(x, pi.bivector())?.find_nonzero(cfg)? {
            return Err(invalid("poisson action", format!("L_ξ{} π has component {idx:?} nonzero at {w}", i + 1)));
        }
    }
    for (i, x) in xi.iter().enumerate() {
        let pushed = act.quotient.push_vector(x)?;
        if let Some((a, w)) = pushed.find_nonzero(cfg)? {
            return Err(invalid("quotient invariance", format!("dφ·ξ{} has component {a} nonzero at {w}", i + 1)));
        }
    }
    if let Some(((a, b), w)) = poisson_map_defect(&act.quotient, pi, &act.pi_quotient, cfg)? {
        return Err(invalid("quotient is Poisson", format!("component ({a},{b}) fails at {w}")));
    }
    if d > 0 {
        check_rank(act, cfg)?;
    }
    Ok(ActionReport {
        checked: vec!["representation", "poisson action", "quotient invariance", "quotient is Poisson", "rank"],
    })
}

fn check_rank(act: &GroupAction, cfg: &ZeroTest) -> Result<()> {
    let n = act.chart.dim();
    let d = act.generators.len();
    let comps: Vec<Vec<Expr>> = act.generators.iter().map(MultiVectorField::to_vec).collect();
    let mut sampler = Sampler::new(&act.chart, [], cfg.seed ^ 0x5eed_0001);
    for _ in 0..RANK_SAMPLES {
        let mut m = DMatrix::<f64>::zeros(d, n);
        let env = sampler.next_valid(|env| {
            for (i, row) in comps.iter().enumerate() {
                for (j, e) in row.iter().enumerate() {
                    match e.eval(env) {
                        Ok(v) => m[(i, j)] = v,
                        Err(_) => return false,
                    }
                }
            }
            true
        })?;
        let sv = m.singular_values();
        let (lo, hi) = (sv.min(), sv.max());
        if hi == 0.0 || lo <= RANK_TOL * hi {
            return Err(invalid("rank", format!("generators are dependent at {}", env.to_witness(lo))));
        }
    }
    Ok(())
}

/// Determinant of a square matrix of expressions by cofactor expansion.
pub fn det_expr(m: &[Vec<Expr>]) -> Expr {
    fn rec(m: &[Vec<Expr>], rows: &[usize], cols: &[usize]) -> Expr {
        if rows.is_empty() {
            return Expr::one();
        }
        let r = rows[0];
        let rest = &rows[1..];
        let mut terms = Vec::new();
        for (k, &c) in cols.iter().enumerate() {
            let e = &m[r][c];
            if e.is_zero_literal() {
                continue;
            }
            let sub: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let minor = rec(m, rest, &sub);
            let term = e * minor;
            terms.push(if k % 2 == 0 { term } else { -term });
        }
        Expr::add(terms)
    }
    let idx: Vec<usize> = (0..m.len()).collect();
    rec(m, &idx, &idx)
}

/// Density of `μ = (μ_G ∧ φ*ν)/⟨μ_G, ξ¹∧…∧ξ^d⟩`. Evaluating on the frame
/// `(ξ_1,…,ξ_d, Dφᵀe_1,…,Dφᵀe_q)` gives
/// `ρ = ρ_ν∘φ · det(Dφ Dφᵀ) / det[ξ_1,…,ξ_d, Dφᵀ]`, with the sign chosen so
/// that `ρ > 0`. The pairing cancels because `μ_G` is normalized by it.
pub fn quotient_volume(act: &GroupAction, nu: &VolumeDensity, cfg: &ZeroTest) -> Result<VolumeDensity> {
    let phi = &act.quotient;
    if !nu.chart().same_coords(phi.target()) {
        return Err(Error::ChartMismatch("quotient density is not on the quotient chart".into()));
    }
    let n = act.chart.dim();
    let q = phi.target().dim();
    let jac: Vec<Vec<Expr>> = (0..q).map(|a| (0..n).map(|i| phi.jacobian(a, i)).collect()).collect();
    let gram: Vec<Vec<Expr>> = (0..q)
        .map(|a| (0..q).map(|b| Expr::add((0..n).map(|i| &jac[a][i] * &jac[b][i]))).collect())
        .collect();
    // Columns of the frame: generators first, then the rows of Dφ.
    let frame: Vec<Vec<Expr>> = (0..n)
        .map(|i| {
            act.generators.iter().map(|x| x.at(i)).chain((0..q).map(|a| jac[a][i].clone())).collect()
        })
        .collect();
    let num = phi.pull_function(nu.rho()) * det_expr(&gram);
    let den = det_expr(&frame);
    let rho = num / den.clone();

    let mut sampler = Sampler::new(&act.chart, [], cfg.seed ^ 0x5eed_0002);
    let (mut pos, mut neg) = (0usize, 0usize);
    for _ in 0..SIGN_SAMPLES {
        let mut value = 0.0;
        let env = sampler.next_valid(|env| match (rho.eval(env), den.eval(env)) {
            (Ok(v), Ok(_)) => {
                value = v;
                true
            }
            _ => false,
        })?;
        let dv = den.eval(&env)?;
        if dv.abs() < 1e-12 || value == 0.0 {
            return Err(Error::DegenerateFrame(format!("frame determinant vanishes at {}", env.to_witness(dv))));
        }
        if value > 0.0 {
            pos += 1;
        } else {
            neg += 1;
        }
    }
    if pos > 0 && neg > 0 {
        return Err(Error::DegenerateFrame("frame changes orientation on the sampling box".into()));
    }
    let rho = if neg > 0 { -rho } else { rho };
    VolumeDensity::new(&act.chart, rho, cfg)
}

/// `X_μ` for the quotient volume, with its projectability and relatedness defects.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionModular {
    pub density: VolumeDensity,
    pub field: MultiVectorField,
    /// First `(generator, component)` where `dφ·[ξ, X_μ]` is nonzero.
    pub projection_defect: Option<(usize, usize, Witness)>,
    /// First component where `dφ·X_μ − X_ν∘φ` is nonzero.
    pub relatedness_defect: Option<(usize, Witness)>,
}

impl ActionModular {
    pub fn is_consistent(&self) -> bool {
        self.projection_defect.is_none() && self.relatedness_defect.is_none()
    }
}

pub fn action_modular_rep(
    act: &GroupAction,
    pi: &PoissonStructure,
    nu: &VolumeDensity,
    cfg: &ZeroTest,
) -> Result<ActionModular> {
    let density = quotient_volume(act, nu, cfg)?;
    let field = modular_vf(pi, &density, cfg)?;
    let mut projection_defect = None;
    for (i, x) in act.generators.iter().enumerate() {
        let pushed = act.quotient.push_vector(&schouten(x, &field)?)?;
        if let Some((a, w)) = pushed.find_nonzero(cfg)? {
            projection_defect = Some((i, a, w));
            break;
        }
    }
    let rel = map_modular_vf(&act.quotient, pi, &act.pi_quotient, &density, nu, cfg)?;
    let relatedness_defect = rel.find_nonzero(cfg)?;
    Ok(ActionModular { density, field, projection_defect, relatedness_defect })
}

/// Largest absolute component of `X_{μ,ν}` over `samples` points, for the
/// constructed `μ`.
pub fn quotient_theorem_residual(
    act: &GroupAction,
    pi: &PoissonStructure,
    nu: &VolumeDensity,
    samples: usize,
    cfg: &ZeroTest,
) -> Result<f64> {
    let density = quotient_volume(act, nu, cfg)?;
    let rel = map_modular_vf(&act.quotient, pi, &act.pi_quotient, &density, nu, cfg)?;
    max_over_samples(rel.components(), &act.chart, samples, cfg.seed ^ 0x5eed_0003)
}

fn max_over_samples(exprs: &[Expr], chart: &Chart, samples: usize, seed: u64) -> Result<f64> {
    let mut sampler = Sampler::new(chart, [], seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let mut vals = Vec::new();
        sampler.next_valid(|env| {
            vals.clear();
            for e in exprs {
                match e.eval(env) {
                    Ok(v) => vals.push(v),
                    Err(_) => return false,
                }
            }
            true
        })?;
        worst = vals.iter().fold(worst, |m, v| m.max(v.abs()));
    }
    Ok(worst)
}

/// Components `⟨κ, ξ_i⟩` of a moment map, valued in a chart of `𝔤*`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentMap {
    map: SmoothMap,
}

impl MomentMap {
    /// The dual chart gets coordinates `k1, …, kd`.
    pub fn new(chart: &Arc<Chart>, comps: Vec<Expr>) -> Result<Self> {
        let names: Vec<String> = (1..=comps.len()).map(|i| format!("k{i}")).collect();
        let dual = Arc::new(Chart::new(&names)?);
        Ok(MomentMap { map: SmoothMap::new(chart, &dual, comps)? })
    }

    pub fn components(&self) -> &[Expr] {
        self.map.components()
    }

    pub fn as_map(&self) -> &SmoothMap {
        &self.map
    }

    pub fn dual_chart(&self) -> &Arc<Chart> {
        self.map.target()
    }

    /// `π♯d⟨κ, ξ_i⟩`, the generators this moment map induces.
    pub fn generators(&self, pi: &PoissonStructure) -> Vec<MultiVectorField> {
        self.components().iter().map(|k| pi.hamiltonian_vf(k)).collect()
    }
}

/// `ξ_i = π♯d⟨κ, ξ_i⟩` for every generator.
pub fn check_moment(act: &GroupAction, kappa: &MomentMap, pi: &PoissonStructure, cfg: &ZeroTest) -> Result<bool> {
    if kappa.components().len() != act.generators.len() {
        return Err(Error::DimensionMismatch("moment map and action have different dimensions".into()));
    }
    for (x, h) in act.generators.iter().zip(kappa.generators(pi)) {
        if !x.sub(&h)?.is_zero(cfg)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `𝔤*` with `{k_i, k_j} = −Σ_k c^k_{ij} k_k`, the target of equivariant moment maps.
pub fn moment_target(g: &LieAlgebraData, chart: &Arc<Chart>, cfg: &ZeroTest) -> Result<PoissonStructure> {
    let lin = linear_poisson(g, chart, cfg)?;
    // −π is Poisson whenever π is.
    Ok(PoissonStructure::from_validated(lin.bivector().neg()))
}

/// The modular field of `κ` against Lebesgue measure on `𝔤*`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentResidual {
    pub field: VectorFieldAlongMap,
    pub theta0: Vec<BigRational>,
    /// Exact value when every component is constant.
    pub constant: Option<Vec<BigRational>>,
    /// `Some(s)` when the constant equals `s·ϑ₀`.
    pub sign: Option<i32>,
}

fn div_rho(x: &MultiVectorField, rho: &VolumeDensity) -> Expr {
    let chart = x.chart();
    let flux = Expr::add((0..chart.dim()).map(|j| (rho.rho() * x.at(j)).diff(chart.coord(j))));
    flux / rho.rho().clone()
}

/// Requires `ρ` invariant under the generators `π♯dκ_i`; returns
/// `dκ·X_μ − X_{𝔤*}∘κ` and compares its constant value with `±ϑ₀`.
pub fn moment_modular_residual(
    kappa: &MomentMap,
    pi: &PoissonStructure,
    rho: &VolumeDensity,
    g: &LieAlgebraData,
    cfg: &ZeroTest,
) -> Result<MomentResidual> {
    if kappa.components().len() != g.dim() {
        return Err(Error::DimensionMismatch("moment map and algebra have different dimensions".into()));
    }
    for (i, x) in kappa.generators(pi).iter().enumerate() {
        if let Some(w) = crate::expr::find_nonzero(&div_rho(x, rho), pi.chart(), cfg)? {
            return Err(Error::NonInvariantDensity { generator: i, witness: w });
        }
    }
    let target = moment_target(g, kappa.dual_chart(), cfg)?;
    let leb = VolumeDensity::lebesgue(kappa.dual_chart());
    let field = map_modular_vf(kappa.as_map(), pi, &target, rho, &leb, cfg)?;
    let theta0 = g.adjoint_character();
    let constant = constant_values(field.components(), pi.chart(), cfg)?;
    let sign = constant.as_ref().and_then(|c| {
        if *c == theta0 {
            Some(1)
        } else if c.iter().zip(&theta0).all(|(a, b)| *a == -b.clone()) {
            Some(-1)
        } else {
            None
        }
    });
    Ok(MomentResidual { field, theta0, constant, sign })
}

/// Exact rational values of expressions that are constant on the chart.
fn constant_values(exprs: &[Expr], chart: &Chart, cfg: &ZeroTest) -> Result<Option<Vec<BigRational>>> {
    let derivs: Vec<Expr> =
        exprs.iter().flat_map(|e| (0..chart.dim()).map(move |i| e.diff(chart.coord(i)))).collect();
    if find_nonzero_all(&derivs, chart, cfg)?.is_some() {
        return Ok(None);
    }
    let mut sampler = Sampler::new(chart, [], cfg.seed);
    let mut out = Vec::with_capacity(exprs.len());
    for e in exprs {
        if let Some(c) = e.as_const() {
            out.push(c.clone());
            continue;
        }
        let mut value = 0.0;
        sampler.next_valid(|env| match e.eval(env) {
            Ok(v) => {
                value = v;
                true
            }
            Err(_) => false,
        })?;
        let r = rationalize(value, 1000, 1e-9);
        if (crate::linalg::to_f64(&r) - value).abs() > 1e-9 {
            return Ok(None);
        }
        out.push(r);
    }
    Ok(Some(out))
}

/// Sampled residuals for a hamiltonian quotient at a level of `κ`.
#[derive(Debug, Clone, PartialEq)]
pub struct HamQuotientReport {
    pub samples: usize,
    /// `max |dκ·X_μ̄|` over the level-set points.
    pub tangency: f64,
    /// `max |dφ·X_μ̄ − X_τ∘φ|` over the level-set points.
    pub relatedness: f64,
    pub density: VolumeDensity,
    pub field: MultiVectorField,
}

/// Projects `x` onto `{κ = level}` by Gauss–Newton steps.
fn project_to_level(
    kappa: &[Expr],
    jac: &[Vec<Expr>],
    level: &[f64],
    chart: &Chart,
    mut x: Vec<f64>,
) -> Result<Option<Vec<f64>>> {
    let d = kappa.len();
    let n = chart.dim();
    for _ in 0..60 {
        let env = Env::from_chart(chart, &x);
        let r = DVector::from_iterator(d, kappa.iter().zip(level).map(|(k, l)| k.eval(&env).map(|v| v - l)).collect::<Result<Vec<_>>>()?);
        let mut j = DMatrix::<f64>::zeros(d, n);
        for a in 0..d {
            for i in 0..n {
                j[(a, i)] = jac[a][i].eval(&env)?;
            }
        }
        // A critical value attracts Gauss–Newton at a linear rate, so the rank
        // test has to be loose enough to notice before the residual is small.
        let sv = j.singular_values();
        if sv.min() <= 1e-6 * sv.max().max(1.0) {
            return Err(Error::RankDeficientLevel(format!("dκ has rank < {d} at {}", env.to_witness(sv.min()))));
        }
        if r.norm() <= 1e-13 * (1.0 + level.iter().fold(0.0f64, |m, v| m.max(v.abs()))) {
            return Ok(Some(x));
        }
        let jjt = &j * j.transpose();
        let Some(step) = jjt.lu().solve(&r) else { return Ok(None) };
        let dx = j.transpose() * step;
        for (xi, di) in x.iter_mut().zip(dx.iter()) {
            *xi -= di;
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Ok(None);
        }
    }
    Ok(None)
}

/// Builds `μ̄` from `τ`, then samples the level set `κ = level` and measures
/// tangency of `X_μ̄` and its relatedness to `X_τ`.
///
/// `τ` is the density, on the quotient chart, of the volume `τ_{red} ∧ dκ̃`
/// where `κ̃` is the function `κ` induces on the quotient. Then `φ*τ` equals
/// `φ*τ_{red} ∧ κ*dξ^L` and `μ̄` is the quotient volume of `τ`.
#[allow(clippy::too_many_arguments)]
pub fn ham_quotient_verify(
    act: &GroupAction,
    pi: &PoissonStructure,
    kappa: &MomentMap,
    tau: &VolumeDensity,
    level: &[f64],
    samples: usize,
    cfg: &ZeroTest,
) -> Result<HamQuotientReport> {
    validate_action(act, pi, cfg)?;
    if level.len() != kappa.components().len() {
        return Err(Error::DimensionMismatch("level has the wrong number of components".into()));
    }
    if !check_moment(act, kappa, pi, cfg)? {
        return Err(invalid("moment map", "ξ_M ≠ π♯d⟨κ,ξ⟩ for some generator".into()));
    }
    for (i, x) in act.generators.iter().enumerate() {
        let values: Vec<Expr> = kappa.components().iter().map(|k| x.apply(k)).collect();
        if let Some((_, w)) = find_nonzero_all(&values, &act.chart, cfg)? {
            return Err(Error::NonInvariantMoment { generator: i, witness: w });
        }
    }
    if !check_poisson_map(&act.quotient, pi, &act.pi_quotient, cfg)? {
        return Err(invalid("quotient is Poisson", "quotient map is not Poisson".into()));
    }
    let density = quotient_volume(act, tau, cfg)?;
    let field = modular_vf(pi, &density, cfg)?;
    let x_tau = modular_vf(&act.pi_quotient, tau, cfg)?;
    let tangency: Vec<Expr> = kappa.components().iter().map(|k| field.apply(k)).collect();
    let pushed = act.quotient.push_vector(&field)?;
    let related = pushed.sub(&VectorFieldAlongMap::compose(&x_tau, &act.quotient)?)?;

    let n = act.chart.dim();
    let jac: Vec<Vec<Expr>> =
        kappa.components().iter().map(|k| (0..n).map(|i| k.diff(act.chart.coord(i))).collect()).collect();
    let mut sampler = Sampler::new(&act.chart, [], cfg.seed ^ 0x5eed_0004);
    let (mut worst_t, mut worst_r) = (0.0f64, 0.0f64);
    let mut taken = 0;
    let mut attempts = 0;
    while taken < samples {
        attempts += 1;
        if attempts > 20 * samples.max(1) + 100 {
            return Err(Error::Sampling { attempts });
        }
        let env = sampler.next_point()?;
        let start: Vec<f64> = (0..n).map(|i| env.get(act.chart.coord(i)).unwrap_or(0.0)).collect();
        let Some(x) = project_to_level(kappa.components(), &jac, level, &act.chart, start)? else { continue };
        let env = Env::from_chart(&act.chart, &x);
        if let Some(g) = act.chart.guard() {
            if !matches!(g.eval(&env), Ok(v) if v > 0.0) {
                continue;
            }
        }
        let (Ok(t), Ok(r)) = (
            tangency.iter().map(|e| e.eval(&env)).collect::<Result<Vec<_>>>(),
            related.components().iter().map(|e| e.eval(&env)).collect::<Result<Vec<_>>>(),
        ) else {
            continue;
        };
        worst_t = t.iter().fold(worst_t, |m, v| m.max(v.abs()));
        worst_r = r.iter().fold(worst_r, |m, v| m.max(v.abs()));
        taken += 1;
    }
    Ok(HamQuotientReport { samples: taken, tangency: worst_t, relatedness: worst_r, density, field })
}
