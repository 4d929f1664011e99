//! Strict-schema run configuration: JSON file, dotted-path overrides, sweep
//! expansion. Unknown keys are rejected everywhere.

use std::collections::BTreeMap;

use ncqm_core::algebra::BoostContext;
use ncqm_core::grid::{Boundary, Grid2D, PhysParams};
use ncqm_core::potential::PolynomialPotential;
use ncqm_core::spectra::EigenMethod;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    AlgebraCheck,
    Star,
    Spectrum,
    Linear,
    Evolve,
    Ehrenfest,
    Perturb,
    Errata,
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::AlgebraCheck => "algebra-check",
            Experiment::Star => "star",
            Experiment::Spectrum => "spectrum",
            Experiment::Linear => "linear",
            Experiment::Evolve => "evolve",
            Experiment::Ehrenfest => "ehrenfest",
            Experiment::Perturb => "perturb",
            Experiment::Errata => "errata",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default = "d_n64")]
    pub nx: usize,
    #[serde(default = "d_n64")]
    pub ny: usize,
    #[serde(default = "d_l8")]
    pub lx: f64,
    #[serde(default = "d_l8")]
    pub ly: f64,
    #[serde(default = "d_periodic")]
    pub boundary: Boundary,
}

fn d_n64() -> usize { 64 }
fn d_l8() -> f64 { 8.0 }
fn d_periodic() -> Boundary { Boundary::Periodic }

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { nx: 64, ny: 64, lx: 8.0, ly: 8.0, boundary: Boundary::Periodic }
    }
}

impl GridConfig {
    pub fn build(&self) -> Result<Grid2D, CliError> {
        Grid2D::new(self.nx, self.ny, self.lx, self.ly, self.boundary)
            .map_err(CliError::from_core)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysConfig {
    #[serde(default = "d_one")]
    pub mass: f64,
    #[serde(default = "d_one")]
    pub hbar: f64,
}

fn d_one() -> f64 { 1.0 }

impl Default for PhysConfig {
    fn default() -> Self {
        PhysConfig { mass: 1.0, hbar: 1.0 }
    }
}

impl PhysConfig {
    pub fn build(&self) -> Result<PhysParams, CliError> {
        PhysParams::new(self.mass, self.hbar).map_err(CliError::from_core)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoostConfig {
    #[serde(default)]
    pub t: f64,
    #[serde(default)]
    pub v: [f64; 2],
}

impl Default for BoostConfig {
    fn default() -> Self {
        BoostConfig { t: 0.0, v: [0.0, 0.0] }
    }
}

impl BoostConfig {
    pub fn build(&self) -> Result<BoostContext, CliError> {
        BoostContext::new(self.t, self.v).map_err(CliError::from_core)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverMethod {
    Dense,
    Lanczos,
}

impl From<SolverMethod> for EigenMethod {
    fn from(m: SolverMethod) -> Self {
        match m {
            SolverMethod::Dense => EigenMethod::Dense,
            SolverMethod::Lanczos => EigenMethod::Lanczos,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    #[serde(default = "d_k6")]
    pub k: usize,
    #[serde(default = "d_dense")]
    pub method: SolverMethod,
}

fn d_k6() -> usize { 6 }
fn d_dense() -> SolverMethod { SolverMethod::Dense }

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { k: 6, method: SolverMethod::Dense }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveConfig {
    #[serde(default = "d_dt")]
    pub dt: f64,
    #[serde(default = "d_steps")]
    pub steps: usize,
    #[serde(default)]
    pub x0: f64,
    #[serde(default)]
    pub y0: f64,
    #[serde(default = "d_one")]
    pub sigma: f64,
    #[serde(default)]
    pub px: f64,
    #[serde(default)]
    pub py: f64,
}

fn d_dt() -> f64 { 1e-3 }
fn d_steps() -> usize { 1000 }

impl Default for EvolveConfig {
    fn default() -> Self {
        EvolveConfig { dt: 1e-3, steps: 1000, x0: 0.0, y0: 0.0, sigma: 1.0, px: 0.0, py: 0.0 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearConfig {
    #[serde(default = "d_one")]
    pub alpha: f64,
    #[serde(default = "d_half")]
    pub beta: f64,
    /// Energy parameter of the sampled Airy profile.
    #[serde(default)]
    pub energy: f64,
}

fn d_half() -> f64 { 0.5 }

impl Default for LinearConfig {
    fn default() -> Self {
        LinearConfig { alpha: 1.0, beta: 0.5, energy: 0.0 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbConfig {
    #[serde(default)]
    pub n1: u32,
    #[serde(default)]
    pub n2: u32,
    #[serde(default = "d_one")]
    pub omega: f64,
    #[serde(default)]
    pub alpha_c: f64,
    #[serde(default = "d_gamma")]
    pub gamma: f64,
    #[serde(default = "d_basis")]
    pub basis_size: usize,
}

fn d_gamma() -> f64 { 0.01 }
fn d_basis() -> usize { 12 }

impl Default for PerturbConfig {
    fn default() -> Self {
        PerturbConfig { n1: 0, n2: 0, omega: 1.0, alpha_c: 0.0, gamma: 0.01, basis_size: 12 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErrataConfig {
    #[serde(default = "d_maxn")]
    pub max_n: u32,
}

fn d_maxn() -> u32 { 10 }

impl Default for ErrataConfig {
    fn default() -> Self {
        ErrataConfig { max_n: 10 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StarConfig {
    #[serde(default = "d_star_x")]
    pub f: PolynomialPotential,
    #[serde(default = "d_star_y")]
    pub g: PolynomialPotential,
    #[serde(default = "d_order")]
    pub max_order: u32,
}

fn d_star_x() -> PolynomialPotential {
    PolynomialPotential::from_monomials(&[(1, 0, num_complex::Complex64::new(1.0, 0.0))])
}

fn d_star_y() -> PolynomialPotential {
    PolynomialPotential::from_monomials(&[(0, 1, num_complex::Complex64::new(1.0, 0.0))])
}

fn d_order() -> u32 { 8 }

impl Default for StarConfig {
    fn default() -> Self {
        StarConfig { f: d_star_x(), g: d_star_y(), max_order: d_order() }
    }
}

/// The resolved experiment configuration. Every field validates against the
/// target module's preconditions before dispatch.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experiment: Option<Experiment>,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub phys: PhysConfig,
    #[serde(default)]
    pub theta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potential: Option<PolynomialPotential>,
    #[serde(default)]
    pub boost: BoostConfig,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub evolve: EvolveConfig,
    #[serde(default)]
    pub linear: LinearConfig,
    #[serde(default)]
    pub perturb: PerturbConfig,
    #[serde(default)]
    pub errata: ErrataConfig,
    #[serde(default)]
    pub star: StarConfig,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<BTreeMap<String, Vec<Value>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outdir: Option<String>,
}

fn default_tolerance() -> f64 {
    1e-6
}

fn default_seed() -> u64 {
    424242
}

impl Default for RunConfig {
    fn default() -> Self {
        serde_json::from_value(Value::Object(Default::default())).expect("default config")
    }
}

/// Set a dotted path inside a JSON value, creating objects along the way.
/// The value text parses as JSON when possible and falls back to a string.
pub fn set_dotted(root: &mut Value, path: &str, raw: &str) -> Result<(), CliError> {
    if path.is_empty() {
        return Err(CliError::Validation("--set needs a non-empty key".into()));
    }
    let parsed: Value = serde_json::from_str(raw).unwrap_or(Value::String(raw.to_string()));
    let mut node = root;
    let parts: Vec<&str> = path.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        if !node.is_object() {
            *node = Value::Object(Default::default());
        }
        let map = node.as_object_mut().expect("object ensured above");
        if i + 1 == parts.len() {
            map.insert(part.to_string(), parsed);
            return Ok(());
        }
        node = map.entry(part.to_string()).or_insert(Value::Object(Default::default()));
    }
    unreachable!("loop returns on the last component")
}

/// Strictly deserialize a config from a JSON value.
pub fn parse_config(value: Value) -> Result<RunConfig, CliError> {
    serde_json::from_value(value).map_err(|e| CliError::Validation(format!("config: {e}")))
}

/// Expand the sweep section into per-point configs (cartesian product in
/// key order). Returns the single base config when no sweep is present.
pub fn expand_sweep(mut base_value: Value) -> Result<Vec<Value>, CliError> {
    let sweep = match base_value.get("sweep") {
        Some(Value::Object(_)) | Some(Value::Null) | None => {
            let taken = base_value
                .as_object_mut()
                .and_then(|m| m.remove("sweep"))
                .unwrap_or(Value::Null);
            match taken {
                Value::Null => return Ok(vec![base_value]),
                Value::Object(map) => map,
                _ => unreachable!(),
            }
        }
        Some(other) => {
            return Err(CliError::Validation(format!(
                "sweep must be an object of path -> [values], got {other}"
            )))
        }
    };
    if sweep.is_empty() {
        return Ok(vec![base_value]);
    }
    let mut axes: Vec<(String, Vec<Value>)> = Vec::new();
    for (path, vals) in sweep {
        let arr = vals
            .as_array()
            .ok_or_else(|| CliError::Validation(format!("sweep.{path} must be an array")))?;
        if arr.is_empty() {
            return Err(CliError::Validation(format!("sweep.{path} is empty")));
        }
        axes.push((path, arr.clone()));
    }
    let mut points = vec![base_value];
    for (path, vals) in &axes {
        let mut next = Vec::with_capacity(points.len() * vals.len());
        for p in &points {
            for v in vals {
                let mut q = p.clone();
                set_dotted(&mut q, path, &serde_json::to_string(v).expect("value emits"))?;
                next.push(q);
            }
        }
        points = next;
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_rejected() {
        let v: Value = serde_json::from_str(r#"{"grid": {"nx": 32, "ny": 32, "lx": 4, "ly": 4, "boundary": "periodic", "oops": 1}}"#).unwrap();
        assert!(parse_config(v).is_err());
        let v: Value = serde_json::from_str(r#"{"bogus": true}"#).unwrap();
        assert!(parse_config(v).is_err());
    }

    #[test]
    fn dotted_set_overrides() {
        let mut v = serde_json::json!({});
        set_dotted(&mut v, "grid.nx", "128").unwrap();
        set_dotted(&mut v, "theta", "0.5").unwrap();
        set_dotted(&mut v, "grid.boundary", "dirichlet").unwrap();
        assert_eq!(v["grid"]["nx"], 128);
        assert_eq!(v["theta"], 0.5);
        assert_eq!(v["grid"]["boundary"], "dirichlet");
    }

    #[test]
    fn sweep_expansion_cartesian() {
        let v = serde_json::json!({
            "theta": 0.0,
            "sweep": {"theta": [0.1, 0.2], "grid.nx": [32, 64, 128]}
        });
        let points = expand_sweep(v).unwrap();
        assert_eq!(points.len(), 6);
        for p in &points {
            assert!(p.get("sweep").is_none());
        }
        assert_eq!(points[0]["grid"]["nx"], 32);
        assert_eq!(points[0]["theta"], 0.1);
    }
}
