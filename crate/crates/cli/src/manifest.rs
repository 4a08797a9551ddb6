//! JSON manifests and their conversion into library objects.

use std::path::Path;
use std::sync::Arc;

use modpoisson::expr::{rat, ZeroTest};
use modpoisson::holonomy::SubmanifoldSpec;
use modpoisson::maps::SmoothMap;
use modpoisson::mvf::MultiVectorField;
use modpoisson::paths::CotangentPath;
use modpoisson::poisson::{LieAlgebraData, PoissonStructure, VolumeDensity};
use modpoisson::reduction::{GroupAction, MomentMap};
use modpoisson::{Chart, Expr};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub coordinates: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub guard: Option<String>,
    #[serde(default)]
    pub poisson: Vec<Entry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub volume: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<MapBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub submanifold: Option<SubmanifoldBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<ActionBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moment: Option<MomentBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ham: Option<HamBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
}

/// One upper-triangle entry `π^{ij}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub i: String,
    pub j: String,
    pub expr: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapBlock {
    pub target_coordinates: Vec<String>,
    pub components: Vec<String>,
    #[serde(default)]
    pub target_poisson: Vec<Entry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_volume: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubmanifoldBlock {
    pub transverse: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub submanifold_volume: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathBlock {
    pub base: Vec<String>,
    pub covector: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extension: Option<Vec<String>>,
    #[serde(default, rename = "loop")]
    pub is_loop: bool,
}

/// `c^k_{ij}` for `i < j`; the value is a rational literal such as `"1"` or `"-3/2"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureConstant {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionBlock {
    #[serde(default)]
    pub structure_constants: Vec<StructureConstant>,
    pub generators: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairing: Option<String>,
    pub quotient: MapBlock,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentBlock {
    pub components: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamBlock {
    pub tau: String,
    pub level: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zero_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ode_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_cap: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub panels: Option<usize>,
}

/// Tolerances after defaults and command-line overrides.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Effective {
    pub zero_tol: f64,
    pub ode_tol: f64,
    pub grid: usize,
    pub trials: usize,
    pub seed: u64,
    pub steps: usize,
    pub degree_cap: u32,
    pub panels: usize,
}

impl Default for Effective {
    fn default() -> Self {
        Effective { zero_tol: 1e-9, ode_tol: 1e-6, grid: 64, trials: 32, seed: 0, steps: 1000, degree_cap: 5, panels: 64 }
    }
}

impl Effective {
    pub fn zero_test(&self) -> ZeroTest {
        ZeroTest::new(self.trials, self.zero_tol, self.seed)
    }
}

impl Tolerances {
    pub fn resolve(&self) -> Effective {
        let d = Effective::default();
        Effective {
            zero_tol: self.zero_tol.unwrap_or(d.zero_tol),
            ode_tol: self.ode_tol.unwrap_or(d.ode_tol),
            grid: self.grid.unwrap_or(d.grid),
            trials: self.trials.unwrap_or(d.trials),
            seed: self.seed.unwrap_or(d.seed),
            steps: self.steps.unwrap_or(d.steps),
            degree_cap: self.degree_cap.unwrap_or(d.degree_cap),
            panels: self.panels.unwrap_or(d.panels),
        }
    }
}

fn at<T>(field: &str, r: modpoisson::Result<T>) -> Result<T, CliError> {
    r.map_err(|source| CliError::Field { field: field.to_string(), source })
}

fn missing(block: &str) -> CliError {
    CliError::Missing(block.to_string())
}

fn parse_in(chart: &Chart, field: &str, text: &str) -> Result<Expr, CliError> {
    at(field, chart.parse(text))
}

fn parse_all(chart: &Chart, field: &str, texts: &[String]) -> Result<Vec<Expr>, CliError> {
    texts.iter().enumerate().map(|(k, s)| parse_in(chart, &format!("{field}[{k}]"), s)).collect()
}

fn structure(chart: &Arc<Chart>, field: &str, entries: &[Entry], cfg: &ZeroTest) -> Result<PoissonStructure, CliError> {
    let mut parsed = Vec::new();
    for (k, e) in entries.iter().enumerate() {
        for name in [&e.i, &e.j] {
            if chart.index_of(name).is_none() {
                return Err(CliError::Field {
                    field: format!("{field}[{k}]"),
                    source: modpoisson::Error::InvalidChart(format!("`{name}` is not a coordinate")),
                });
            }
        }
        parsed.push((e.i.as_str(), e.j.as_str(), parse_in(chart, &format!("{field}[{k}].expr"), &e.expr)?));
    }
    at(field, PoissonStructure::from_entries(chart, &parsed, cfg))
}

fn density(chart: &Arc<Chart>, field: &str, text: Option<&str>, cfg: &ZeroTest) -> Result<VolumeDensity, CliError> {
    let rho = parse_in(chart, field, text.unwrap_or("1"))?;
    at(field, VolumeDensity::new(chart, rho, cfg))
}

fn new_chart(field: &str, names: &[String]) -> Result<Arc<Chart>, CliError> {
    Ok(Arc::new(at(field, Chart::new(names))?))
}

/// A map block with its target structure and volume.
pub struct Target {
    pub map: SmoothMap,
    pub pi: PoissonStructure,
    pub volume: VolumeDensity,
}

impl Manifest {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Json(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifests serialize")
    }

    pub fn chart(&self) -> Result<Arc<Chart>, CliError> {
        let c = at("coordinates", Chart::new(&self.coordinates))?;
        Ok(Arc::new(match &self.guard {
            Some(g) => {
                let e = parse_in(&c, "guard", g)?;
                at("guard", c.with_guard(e))?
            }
            None => c,
        }))
    }

    pub fn poisson(&self, chart: &Arc<Chart>, cfg: &ZeroTest) -> Result<PoissonStructure, CliError> {
        structure(chart, "poisson", &self.poisson, cfg)
    }

    pub fn volume(&self, chart: &Arc<Chart>, cfg: &ZeroTest) -> Result<VolumeDensity, CliError> {
        density(chart, "volume", self.volume.as_deref(), cfg)
    }

    pub fn target(&self, chart: &Arc<Chart>, cfg: &ZeroTest) -> Result<Target, CliError> {
        let block = self.map.as_ref().ok_or_else(|| missing("map"))?;
        map_block(chart, "map", block, cfg)
    }

    pub fn submanifold(&self, chart: &Arc<Chart>, cfg: &ZeroTest) -> Result<(SubmanifoldSpec, VolumeDensity), CliError> {
        let block = self.submanifold.as_ref().ok_or_else(|| missing("submanifold"))?;
        let n = at("submanifold.transverse", SubmanifoldSpec::new(chart, &block.transverse))?;
        let vol = density(n.chart(), "submanifold.submanifold_volume", block.submanifold_volume.as_deref(), cfg)?;
        Ok((n, vol))
    }

    pub fn path(&self, chart: &Arc<Chart>) -> Result<CotangentPath, CliError> {
        let block = self.path.as_ref().ok_or_else(|| missing("path"))?;
        let t = at("path", Chart::new(&[modpoisson::paths::PARAM]))?;
        let base = parse_all(&t, "path.base", &block.base)?;
        let covector = parse_all(&t, "path.covector", &block.covector)?;
        at("path", CotangentPath::new(chart, base, covector, block.is_loop))
    }

    /// Extension 1-form components, in the chart coordinates and `t`.
    pub fn extension(&self, chart: &Arc<Chart>) -> Result<Option<Vec<Expr>>, CliError> {
        let Some(ext) = self.path.as_ref().and_then(|p| p.extension.as_ref()) else { return Ok(None) };
        let mut names: Vec<String> = chart.coords().iter().map(|s| s.to_string()).collect();
        names.push(modpoisson::paths::PARAM.to_string());
        let c = at("path.extension", Chart::new(&names))?;
        Ok(Some(parse_all(&c, "path.extension", ext)?))
    }

    pub fn action(&self, chart: &Arc<Chart>, cfg: &ZeroTest) -> Result<(GroupAction, VolumeDensity), CliError> {
        let block = self.action.as_ref().ok_or_else(|| missing("action"))?;
        let d = block.generators.len();
        let mut entries = Vec::new();
        for (k, sc) in block.structure_constants.iter().enumerate() {
            let field = format!("action.structure_constants[{k}]");
            let value: BigRational = parse_rational(&sc.value).ok_or_else(|| CliError::Field {
                field: field.clone(),
                source: modpoisson::Error::InvalidLieAlgebra(format!("`{}` is not a rational number", sc.value)),
            })?;
            entries.push((sc.i, sc.j, sc.k, value));
        }
        let algebra = at("action.structure_constants", LieAlgebraData::from_brackets(d, &entries))?;
        let mut generators = Vec::new();
        for (k, g) in block.generators.iter().enumerate() {
            let field = format!("action.generators[{k}]");
            let comps = parse_all(chart, &field, g)?;
            generators.push(at(&field, MultiVectorField::from_vec(chart, comps))?);
        }
        let q = map_block(chart, "action.quotient", &block.quotient, cfg)?;
        let mut act = at("action", GroupAction::new(algebra, generators, q.map, q.pi))?;
        if let Some(p) = &block.pairing {
            act = act.with_pairing(parse_in(chart, "action.pairing", p)?);
        }
        Ok((act, q.volume))
    }

    pub fn moment(&self, chart: &Arc<Chart>) -> Result<MomentMap, CliError> {
        let block = self.moment.as_ref().ok_or_else(|| missing("moment"))?;
        let comps = parse_all(chart, "moment.components", &block.components)?;
        at("moment", MomentMap::new(chart, comps))
    }

    pub fn ham(&self) -> Result<&HamBlock, CliError> {
        self.ham.as_ref().ok_or_else(|| missing("ham"))
    }
}

fn map_block(chart: &Arc<Chart>, field: &str, block: &MapBlock, cfg: &ZeroTest) -> Result<Target, CliError> {
    let target = new_chart(&format!("{field}.target_coordinates"), &block.target_coordinates)?;
    let comps = parse_all(chart, &format!("{field}.components"), &block.components)?;
    let map = at(field, SmoothMap::new(chart, &target, comps))?;
    let pi = structure(&target, &format!("{field}.target_poisson"), &block.target_poisson, cfg)?;
    let volume = density(&target, &format!("{field}.target_volume"), block.target_volume.as_deref(), cfg)?;
    Ok(Target { map, pi, volume })
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse::<i64>().ok()?, d.trim().parse::<i64>().ok()?),
        None => (s.parse::<i64>().ok()?, 1),
    };
    (d != 0).then(|| rat(n, d))
}
