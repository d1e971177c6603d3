//! Rational approximation of Lee-class periods and the empirical positivity
//! threshold for perturbed Lee forms.

use nalgebra::DVector;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use super::lee::{BumpPerturbation, LeeField};
use super::lck_form_from;
use super::min_metric_eigenvalue;
use crate::error::{Error, Result};

/// Last continued-fraction convergent of `x` with denominator at most
/// `max_denominator`.
pub fn continued_fraction_convergent(x: f64, max_denominator: i64) -> Result<Ratio<i64>> {
  if !x.is_finite() {
    return Err(Error::InvalidArgument(format!("cannot approximate {x}")));
  }
  if max_denominator < 1 {
    return Err(Error::InvalidArgument(format!("max denominator {max_denominator} < 1")));
  }
  let (mut h_prev, mut h) = (1i128, x.floor() as i128);
  let (mut k_prev, mut k) = (0i128, 1i128);
  let mut rest = x - x.floor();
  for _ in 0..64 {
    if rest.abs() < 1e-15 {
      break;
    }
    let inv = 1.0 / rest;
    if inv > 1e15 {
      break;
    }
    let a = inv.floor() as i128;
    let (h_next, k_next) = match (a.checked_mul(h).and_then(|v| v.checked_add(h_prev)), a.checked_mul(k).and_then(|v| v.checked_add(k_prev))) {
      (Some(hn), Some(kn)) => (hn, kn),
      _ => break,
    };
    if k_next > i128::from(max_denominator) {
      break;
    }
    (h_prev, h, k_prev, k) = (h, h_next, k, k_next);
    rest = inv - inv.floor();
  }
  let num = i64::try_from(h).map_err(|_| Error::InvalidArgument(format!("numerator of {x} overflows")))?;
  Ok(Ratio::new(num, k as i64))
}

/// Periods `p′ = s·r` with `r` rational, so the character has cyclic image.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LeeDeformation {
  pub periods: Vec<f64>,
  pub reference: usize,
  pub scale: f64,
  #[serde(serialize_with = "serialize_ratios")]
  pub ratios: Vec<Ratio<i64>>,
  pub deformed: Vec<f64>,
  pub error: f64,
  pub tol: f64,
  pub max_denominator: i64,
}

fn serialize_ratios<S: serde::Serializer>(v: &[Ratio<i64>], s: S) -> std::result::Result<S::Ok, S::Error> {
  s.collect_seq(v.iter().map(|r| format!("{}/{}", r.numer(), r.denom())))
}

/// Approximates `periods` by `s·r` with `s` the first nonzero period and each
/// `r_i` the last convergent of `p_i / s` with denominator `≤ max_denominator`.
pub fn rational_lee_deformation(periods: &[f64], tol: f64, max_denominator: i64) -> Result<LeeDeformation> {
  if !(tol > 0.0) {
    return Err(Error::InvalidArgument(format!("tolerance {tol} must be positive")));
  }
  if periods.iter().any(|p| !p.is_finite()) {
    return Err(Error::InvalidArgument("periods must be finite".into()));
  }
  let reference = periods
    .iter()
    .position(|p| *p != 0.0)
    .ok_or_else(|| Error::InvalidArgument("all periods vanish".into()))?;
  let scale = periods[reference];
  let ratios = periods
    .iter()
    .enumerate()
    .map(|(i, p)| if i == reference { Ok(Ratio::from_integer(1)) } else { continued_fraction_convergent(p / scale, max_denominator) })
    .collect::<Result<Vec<_>>>()?;
  let deformed: Vec<f64> = ratios.iter().map(|r| scale * (*r.numer() as f64) / (*r.denom() as f64)).collect();
  let error = periods.iter().zip(&deformed).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
  if error > tol {
    return Err(Error::NoApproximation { tol, max_denominator, best: error });
  }
  Ok(LeeDeformation { periods: periods.to_vec(), reference, scale, ratios, deformed, error, tol, max_denominator })
}

/// Outcome of sweeping `ε` in `θ + ε(sθ + dg)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdReport {
  pub points: usize,
  pub epsilon_max: f64,
  /// First `ε` at which some sample loses positivity, or `epsilon_max`.
  pub threshold: f64,
  pub reached: bool,
  pub base_min_eigenvalue: f64,
  pub half_threshold_min_eigenvalue: f64,
  pub positive_at_half: bool,
  /// `(ε, min eigenvalue)` on the scan grid.
  pub sweep: Vec<(f64, f64)>,
}

fn min_eigenvalue_over(field: &dyn LeeField, points: &[DVector<f64>]) -> Result<f64> {
  points
    .par_iter()
    .map(|z| Ok(min_metric_eigenvalue(&lck_form_from(&field.value(z)?, &field.jacobian(z)?))))
    .try_reduce(|| f64::INFINITY, |a, b| Ok(a.min(b)))
}

/// Scans `ε ∈ (0, epsilon_max]` on `grid` steps, refines the first sign change
/// by bisection, then re-checks positivity at half the threshold.
pub fn deformation_threshold(
  template: &BumpPerturbation,
  points: &[DVector<f64>],
  epsilon_max: f64,
  grid: usize,
) -> Result<ThresholdReport> {
  if !(epsilon_max > 0.0) || grid == 0 {
    return Err(Error::InvalidArgument("need epsilon_max > 0 and a non-empty grid".into()));
  }
  let at = |eps: f64| min_eigenvalue_over(&template.with_epsilon(eps), points);
  let base = at(0.0)?;
  let mut sweep = Vec::with_capacity(grid);
  let mut bracket = None;
  let mut prev = 0.0;
  for k in 1..=grid {
    let eps = epsilon_max * k as f64 / grid as f64;
    let m = at(eps)?;
    sweep.push((eps, m));
    if m <= 0.0 {
      bracket = Some((prev, eps));
      break;
    }
    prev = eps;
  }
  let (threshold, reached) = match bracket {
    None => (epsilon_max, false),
    Some((mut lo, mut hi)) => {
      while hi - lo > 1e-9 * epsilon_max {
        let mid = 0.5 * (lo + hi);
        if at(mid)? > 0.0 {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      (hi, true)
    }
  };
  let half = at(threshold / 2.0)?;
  Ok(ThresholdReport {
    points: points.len(),
    epsilon_max,
    threshold,
    reached,
    base_min_eigenvalue: base,
    half_threshold_min_eigenvalue: half,
    positive_at_half: half > 0.0,
    sweep,
  })
}
