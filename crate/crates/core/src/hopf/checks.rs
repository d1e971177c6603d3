//! Finite-difference residuals: the structure equation, closedness, and the
//! expansion of `d_θ d^c_θ φ̃`.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::lee::{LeeField, TestPotential};
use super::{complex_structure, dc_of_closed, ddc, i_covector, wedge, HopfData};
use crate::error::Result;

/// Index triples `a < b < c`.
fn triples(d: usize) -> Vec<(usize, usize, usize)> {
  let mut out = Vec::new();
  for a in 0..d {
    for b in a + 1..d {
      for c in b + 1..d {
        out.push((a, b, c));
      }
    }
  }
  out
}

/// Components `(dω)_{abc}`, `a < b < c`, by central differences of `Ω`.
pub fn exterior_derivative_fd<F>(omega: F, z: &DVector<f64>, step: f64) -> Result<Vec<f64>>
where
  F: Fn(&DVector<f64>) -> Result<DMatrix<f64>>,
{
  let d = z.len();
  let mut partials = Vec::with_capacity(d);
  for a in 0..d {
    let mut p = z.clone();
    let mut m = z.clone();
    p[a] += step;
    m[a] -= step;
    partials.push((omega(&p)? - omega(&m)?) / (2.0 * step));
  }
  Ok(
    triples(d)
      .into_iter()
      .map(|(a, b, c)| partials[a][(b, c)] + partials[b][(c, a)] + partials[c][(a, b)])
      .collect(),
  )
}

fn one_form_wedge_two_form(theta: &DVector<f64>, omega: &DMatrix<f64>) -> Vec<f64> {
  triples(theta.len())
    .into_iter()
    .map(|(a, b, c)| theta[a] * omega[(b, c)] + theta[b] * omega[(c, a)] + theta[c] * omega[(a, b)])
    .collect()
}

/// `max |dω|` over basis triples.
pub fn closedness_residual<F>(omega: F, z: &DVector<f64>, step: f64) -> Result<f64>
where
  F: Fn(&DVector<f64>) -> Result<DMatrix<f64>>,
{
  Ok(exterior_derivative_fd(omega, z, step)?.into_iter().map(f64::abs).fold(0.0, f64::max))
}

/// `max |dω − θ_L∧ω|` with Lee form `θ_L = −d log φ`.
///
/// Vacuous (always 0) for `n = 1`, where there are no 3-forms.
pub fn structure_equation_residual(hopf: &HopfData, z: &DVector<f64>, step: f64) -> Result<f64> {
  let d_omega = exterior_derivative_fd(|p| hopf.lck_form(p), z, step)?;
  let lee = -hopf.lee_form(z)?;
  let wedge = one_form_wedge_two_form(&lee, &hopf.lck_form(z)?);
  Ok(d_omega.iter().zip(&wedge).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}

/// Residuals at `h` and `h/2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConvergenceStudy {
  pub step: f64,
  pub residual: f64,
  pub half_step_residual: f64,
  /// `residual / half_step_residual`; `None` when both vanish.
  pub ratio: Option<f64>,
  /// False when halving the step did not reduce the residual.
  pub monotone: bool,
}

impl ConvergenceStudy {
  pub fn new(step: f64, residual: f64, half_step_residual: f64) -> Self {
    let ratio = if half_step_residual > 0.0 { Some(residual / half_step_residual) } else { None };
    Self { step, residual, half_step_residual, ratio, monotone: half_step_residual <= residual }
  }

  /// Combines per-point studies by taking the worst residual at each step.
  pub fn worst(studies: &[ConvergenceStudy]) -> Option<Self> {
    let first = studies.first()?;
    let r = studies.iter().map(|s| s.residual).fold(0.0, f64::max);
    let h = studies.iter().map(|s| s.half_step_residual).fold(0.0, f64::max);
    Some(Self::new(first.step, r, h))
  }

  pub fn ratio_in(&self, lo: f64, hi: f64) -> bool { self.ratio.is_some_and(|r| (lo..=hi).contains(&r)) }
}

pub fn structure_study(hopf: &HopfData, z: &DVector<f64>, step: f64) -> Result<ConvergenceStudy> {
  Ok(ConvergenceStudy::new(
    step,
    structure_equation_residual(hopf, z, step)?,
    structure_equation_residual(hopf, z, step / 2.0)?,
  ))
}

fn fd_gradient(f: &TestPotential, x: &DVector<f64>, step: f64) -> DVector<f64> {
  DVector::from_fn(x.len(), |a, _| {
    let mut p = x.clone();
    let mut m = x.clone();
    p[a] += step;
    m[a] -= step;
    (f.value(&p) - f.value(&m)) / (2.0 * step)
  })
}

/// `d^c_θ φ̃ = d^c φ̃ − φ̃ Iθ` with a finite-difference `dφ̃`.
fn twisted_dc_fd(lee: &dyn LeeField, f: &TestPotential, x: &DVector<f64>, step: f64) -> Result<DVector<f64>> {
  let j = complex_structure(x.len());
  Ok(j.transpose() * fd_gradient(f, x, step) - i_covector(&lee.value(x)?) * f.value(x))
}

/// `max |d_θ d^c_θ φ̃ − RHS|` where the left side is nested central
/// differences and the right side is the term-by-term expansion
/// `φ̃(θ∧Iθ + d^cθ) − θ∧d^cφ̃ + Iθ∧dφ̃ + dd^cφ̃` from analytic derivatives.
pub fn potential_identity_residual(lee: &dyn LeeField, f: &TestPotential, z: &DVector<f64>, step: f64) -> Result<f64> {
  let d = z.len();
  let mut partials = Vec::with_capacity(d);
  for a in 0..d {
    let mut p = z.clone();
    let mut m = z.clone();
    p[a] += step;
    m[a] -= step;
    partials.push((twisted_dc_fd(lee, f, &p, step)? - twisted_dc_fd(lee, f, &m, step)?) / (2.0 * step));
  }
  let alpha = twisted_dc_fd(lee, f, z, step)?;
  let theta = lee.value(z)?;
  let d_alpha = DMatrix::from_fn(d, d, |a, b| partials[a][b] - partials[b][a]);
  let lhs = d_alpha - wedge(&theta, &alpha);

  let i_theta = i_covector(&theta);
  let df = f.gradient(z);
  let dcf = i_covector(&df);
  let rhs = (wedge(&theta, &i_theta) + dc_of_closed(&lee.jacobian(z)?)) * f.value(z) - wedge(&theta, &dcf)
    + wedge(&i_theta, &df)
    + ddc(f.hessian());
  Ok((lhs - rhs).amax())
}

pub fn potential_identity_study(lee: &dyn LeeField, f: &TestPotential, z: &DVector<f64>, step: f64) -> Result<ConvergenceStudy> {
  Ok(ConvergenceStudy::new(
    step,
    potential_identity_residual(lee, f, z, step)?,
    potential_identity_residual(lee, f, z, step / 2.0)?,
  ))
}

#[cfg(test)]
mod tests {
  use super::super::lee::ZeroLee;
  use super::*;
  use rand::SeedableRng;
  use rand_chacha::ChaCha8Rng;

  fn pt(v: &[f64]) -> DVector<f64> { DVector::from_column_slice(v) }

  #[test]
  fn structure_equation_converges_quadratically() {
    let h = HopfData::from_moduli(&[0.3, 0.5], 8.0).unwrap();
    let s = structure_study(&h, &pt(&[0.9, -0.6, 1.2, 0.7]), 1e-3).unwrap();
    assert!(s.residual < 1e-5, "{s:?}");
    assert!(s.ratio_in(3.5, 4.5), "{s:?}");
  }

  #[test]
  fn structure_equation_is_vacuous_in_dimension_one() {
    let h = HopfData::from_moduli(&[0.3], 8.0).unwrap();
    assert_eq!(structure_equation_residual(&h, &pt(&[0.4, 0.2]), 1e-3).unwrap(), 0.0);
  }

  #[test]
  fn wrong_sign_lee_form_is_detected() {
    // dω − (d log φ)∧ω = −2 (d log φ)∧ω is far from zero.
    let h = HopfData::from_moduli(&[0.3, 0.5], 8.0).unwrap();
    let z = pt(&[0.9, -0.6, 1.2, 0.7]);
    let d_omega = exterior_derivative_fd(|p| h.lck_form(p), &z, 1e-3).unwrap();
    let wedge = one_form_wedge_two_form(&h.lee_form(&z).unwrap(), &h.lck_form(&z).unwrap());
    let bad = d_omega.iter().zip(&wedge).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(bad > 1e-2);
  }

  #[test]
  fn kahler_degeneration_is_closed() {
    let h = HopfData::from_moduli(&[0.4, 0.4], 1.0 / 0.16);
    let h = h.unwrap();
    let z = pt(&[0.5, 0.3, -0.2, 0.8]);
    let r = closedness_residual(|p| Ok(ddc(&h.potential_hessian(p)?)), &z, 1e-3).unwrap();
    assert!(r <= 1e-10, "{r}");
  }

  #[test]
  fn identity_for_constant_and_untwisted_potentials() {
    let h = HopfData::from_moduli(&[0.3, 0.5], 8.0).unwrap();
    let z = pt(&[0.9, -0.6, 1.2, 0.7]);
    let r = potential_identity_residual(&h, &TestPotential::constant(4, 1.7), &z, 1e-3).unwrap();
    assert!(r <= 1e-6, "{r}");
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let f = TestPotential::random(&mut rng, &z);
    let r = potential_identity_residual(&ZeroLee(4), &f, &z, 1e-3).unwrap();
    assert!(r <= 1e-8, "{r}");
    let s = potential_identity_study(&h, &f, &z, 1e-3).unwrap();
    assert!(s.residual <= 1e-6 && s.ratio_in(3.5, 4.5), "{s:?}");
  }
}
