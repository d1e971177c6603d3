//! Batch verification of one Hopf configuration over seeded samples.

use std::collections::BTreeMap;
use std::str::FromStr;

use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::checks::{potential_identity_study, structure_study, ConvergenceStudy};
use super::lee::{TestPotential, ZeroLee};
use super::sampling::{annulus_points, generic_points};
use super::{potential_identity_residual, HopfData};
use crate::error::{Error, Result};

pub const AUTOMORPHY_TOL: f64 = 1e-12;
pub const FORM_TOL: f64 = 1e-10;
pub const STRUCTURE_TOL: f64 = 1e-5;
pub const IDENTITY_TOL: f64 = 1e-6;
pub const UNTWISTED_IDENTITY_TOL: f64 = 1e-8;
pub const RATIO_RANGE: (f64, f64) = (3.5, 4.5);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
  Automorphy,
  Positivity,
  Structure,
  Identity,
}

impl Check {
  pub const ALL: [Check; 4] = [Check::Automorphy, Check::Positivity, Check::Structure, Check::Identity];
}

impl FromStr for Check {
  type Err = Error;

  fn from_str(s: &str) -> Result<Self> {
    match s.trim() {
      "automorphy" => Ok(Check::Automorphy),
      "positivity" => Ok(Check::Positivity),
      "structure" => Ok(Check::Structure),
      "identity" => Ok(Check::Identity),
      other => Err(Error::InvalidArgument(format!("unknown check {other:?}"))),
    }
  }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyConfig {
  pub points: usize,
  pub seed: u64,
  pub checks: Vec<Check>,
  pub step: f64,
  pub r_min: f64,
  pub r_max: f64,
  /// Shell and hyperplane clearance for the finite-difference checks.
  pub fd_r_min: f64,
  pub fd_r_max: f64,
  pub fd_min_fraction: f64,
  pub test_potentials: usize,
}

impl Default for VerifyConfig {
  fn default() -> Self {
    Self {
      points: 1000,
      seed: 42,
      checks: Check::ALL.to_vec(),
      step: 1e-3,
      r_min: 0.1,
      r_max: 10.0,
      fd_r_min: 5.0,
      fd_r_max: 20.0,
      fd_min_fraction: 0.4,
      test_potentials: 20,
    }
  }
}

/// Counts per decade `⌊log₁₀ x⌋`; exact zeros are counted separately.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Histogram {
  pub zeros: usize,
  pub decades: BTreeMap<i32, usize>,
}

impl Histogram {
  pub fn of(values: &[f64]) -> Self {
    let mut h = Histogram::default();
    for v in values {
      if *v == 0.0 {
        h.zeros += 1;
      } else {
        *h.decades.entry(v.abs().log10().floor() as i32).or_default() += 1;
      }
    }
    h
  }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
  pub check: Check,
  pub pass: bool,
  pub metrics: BTreeMap<String, Value>,
  pub error: Option<String>,
}

impl CheckOutcome {
  fn failed(check: Check, e: &Error) -> Self { Self { check, pass: false, metrics: BTreeMap::new(), error: Some(e.to_string()) } }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HopfReport {
  pub hopf: HopfData,
  pub beta_defect: f64,
  pub config: VerifyConfig,
  pub checks: Vec<CheckOutcome>,
  pub pass: bool,
}

fn max_of(v: &[f64]) -> f64 { v.iter().copied().fold(0.0, f64::max) }

fn automorphy(h: &HopfData, pts: &[DVector<f64>]) -> Result<CheckOutcome> {
  let res = pts.par_iter().map(|z| h.automorphy_residual(z)).collect::<Result<Vec<_>>>()?;
  let inv = pts.par_iter().map(|z| h.lee_invariance_residual(z)).collect::<Result<Vec<_>>>()?;
  let worst = max_of(&res);
  let mut m = BTreeMap::new();
  m.insert("max_relative_residual".into(), json!(worst));
  m.insert("max_lee_invariance_residual".into(), json!(max_of(&inv)));
  m.insert("histogram".into(), serde_json::to_value(Histogram::of(&res))?);
  m.insert("tolerance".into(), json!(AUTOMORPHY_TOL));
  Ok(CheckOutcome { check: Check::Automorphy, pass: worst <= AUTOMORPHY_TOL, metrics: m, error: None })
}

fn positivity(h: &HopfData, pts: &[DVector<f64>]) -> Result<CheckOutcome> {
  let frames = pts.par_iter().map(|z| h.frame(z)).collect::<Result<Vec<_>>>()?;
  let eig: Vec<f64> = frames.iter().map(|f| f.min_eigenvalue).collect();
  let min = eig.iter().copied().fold(f64::INFINITY, f64::min);
  let anti = max_of(&frames.iter().map(|f| f.antisymmetry_residual).collect::<Vec<_>>());
  let inv = max_of(&frames.iter().map(|f| f.invariance_residual).collect::<Vec<_>>());
  let sym = max_of(&frames.iter().map(|f| f.metric_asymmetry).collect::<Vec<_>>());
  let mean = eig.iter().sum::<f64>() / eig.len().max(1) as f64;
  let mut m = BTreeMap::new();
  m.insert("min_eigenvalue".into(), json!(min));
  m.insert("mean_min_eigenvalue".into(), json!(mean));
  m.insert("max_antisymmetry_residual".into(), json!(anti));
  m.insert("max_invariance_residual".into(), json!(inv));
  m.insert("max_metric_asymmetry".into(), json!(sym));
  m.insert("eigenvalue_histogram".into(), serde_json::to_value(Histogram::of(&eig))?);
  let pass = min > 0.0 && anti <= FORM_TOL && inv <= FORM_TOL && sym <= FORM_TOL;
  Ok(CheckOutcome { check: Check::Positivity, pass, metrics: m, error: None })
}

fn study_metrics(m: &mut BTreeMap<String, Value>, s: &Option<ConvergenceStudy>) {
  m.insert("study".into(), json!(s));
  m.insert("richardson_ratio".into(), json!(s.and_then(|s| s.ratio)));
}

fn structure(h: &HopfData, cfg: &VerifyConfig) -> Result<CheckOutcome> {
  let mut m = BTreeMap::new();
  if h.n() == 1 {
    m.insert("vacuous".into(), json!(true));
    m.insert("note".into(), json!("complex dimension 1 has no 3-forms"));
    return Ok(CheckOutcome { check: Check::Structure, pass: true, metrics: m, error: None });
  }
  let pts = generic_points(h.real_dim(), cfg.points, cfg.fd_r_min, cfg.fd_r_max, cfg.fd_min_fraction, cfg.seed ^ 0x5354);
  let studies = pts.par_iter().map(|z| structure_study(h, z, cfg.step)).collect::<Result<Vec<_>>>()?;
  let worst = ConvergenceStudy::worst(&studies);
  let residuals: Vec<f64> = studies.iter().map(|s| s.residual).collect();
  let non_monotone = studies.iter().filter(|s| !s.monotone).count();
  m.insert("vacuous".into(), json!(false));
  m.insert("max_residual".into(), json!(max_of(&residuals)));
  m.insert("histogram".into(), serde_json::to_value(Histogram::of(&residuals))?);
  m.insert("non_monotone_points".into(), json!(non_monotone));
  m.insert("tolerance".into(), json!(STRUCTURE_TOL));
  study_metrics(&mut m, &worst);
  let pass = worst.is_some_and(|w| w.residual <= STRUCTURE_TOL && w.ratio_in(RATIO_RANGE.0, RATIO_RANGE.1));
  Ok(CheckOutcome { check: Check::Structure, pass, metrics: m, error: None })
}

fn identity(h: &HopfData, cfg: &VerifyConfig) -> Result<CheckOutcome> {
  let d = h.real_dim();
  let count = cfg.test_potentials.max(1);
  let pts = generic_points(d, count, cfg.fd_r_min, cfg.fd_r_max, cfg.fd_min_fraction, cfg.seed ^ 0x4944);
  let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
  let potentials: Vec<TestPotential> = pts.iter().map(|z| TestPotential::random(&mut rng, z)).collect();
  let studies = potentials
    .par_iter()
    .zip(&pts)
    .map(|(f, z)| potential_identity_study(h, f, z, cfg.step))
    .collect::<Result<Vec<_>>>()?;
  let untwisted = potentials
    .par_iter()
    .zip(&pts)
    .map(|(f, z)| potential_identity_residual(&ZeroLee(d), f, z, cfg.step))
    .collect::<Result<Vec<_>>>()?;
  let residuals: Vec<f64> = studies.iter().map(|s| s.residual).collect();
  let worst = ConvergenceStudy::worst(&studies);
  let mut m = BTreeMap::new();
  m.insert("test_potentials".into(), json!(count));
  m.insert("max_residual".into(), json!(max_of(&residuals)));
  m.insert("max_untwisted_residual".into(), json!(max_of(&untwisted)));
  m.insert("histogram".into(), serde_json::to_value(Histogram::of(&residuals))?);
  m.insert("tolerance".into(), json!(IDENTITY_TOL));
  m.insert("untwisted_tolerance".into(), json!(UNTWISTED_IDENTITY_TOL));
  study_metrics(&mut m, &worst);
  let pass = max_of(&residuals) <= IDENTITY_TOL && max_of(&untwisted) <= UNTWISTED_IDENTITY_TOL;
  Ok(CheckOutcome { check: Check::Identity, pass, metrics: m, error: None })
}

/// Runs the requested checks. Individual check failures, including evaluation
/// errors, are recorded in the report rather than returned.
pub fn hopf_verify(h: &HopfData, cfg: &VerifyConfig) -> Result<HopfReport> {
  if cfg.points == 0 {
    return Err(Error::InvalidArgument("need at least one sample point".into()));
  }
  if !(cfg.step > 0.0) || !(cfg.r_min > 0.0 && cfg.r_max >= cfg.r_min) {
    return Err(Error::InvalidArgument("step and radii must be positive with r_min <= r_max".into()));
  }
  let pts = annulus_points(h.real_dim(), cfg.points, cfg.r_min, cfg.r_max, cfg.seed);
  let mut checks: Vec<Check> = cfg.checks.clone();
  checks.sort();
  checks.dedup();
  let outcomes: Vec<CheckOutcome> = checks
    .iter()
    .map(|c| {
      let r = match c {
        Check::Automorphy => automorphy(h, &pts),
        Check::Positivity => positivity(h, &pts),
        Check::Structure => structure(h, cfg),
        Check::Identity => identity(h, cfg),
      };
      r.unwrap_or_else(|e| CheckOutcome::failed(*c, &e))
    })
    .collect();
  let pass = outcomes.iter().all(|o| o.pass) && h.beta_defect() <= super::BETA_TOL;
  Ok(HopfReport { hopf: h.clone(), beta_defect: h.beta_defect(), config: cfg.clone(), checks: outcomes, pass })
}

#[cfg(test)]
mod tests {
  use super::*;

  #[test]
  fn standard_configuration_passes_everything() {
    let h = HopfData::from_moduli(&[0.3, 0.5], 8.0).unwrap();
    let cfg = VerifyConfig { points: 100, test_potentials: 5, ..VerifyConfig::default() };
    let r = hopf_verify(&h, &cfg).unwrap();
    assert!(r.pass, "{}", serde_json::to_string_pretty(&r).unwrap());
    assert_eq!(r.checks.len(), 4);
  }

  #[test]
  fn check_names_parse() {
    assert_eq!("structure".parse::<Check>().unwrap(), Check::Structure);
    assert!("nope".parse::<Check>().is_err());
  }

  #[test]
  fn histogram_buckets() {
    let h = Histogram::of(&[0.0, 2e-13, 5e-13, 3e-12]);
    assert_eq!(h.zeros, 1);
    assert_eq!(h.decades.get(&-13), Some(&2));
    assert_eq!(h.decades.get(&-12), Some(&1));
  }
}
