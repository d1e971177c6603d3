//! Pointwise LCK geometry of diagonal Hopf manifolds `(ℂⁿ \ 0)/⟨A⟩`,
//! `A = diag(α_i)`.
//!
//! Points are real vectors `(x₁, y₁, …, x_n, y_n)`. Covectors are column
//! vectors of components, 2-forms are antisymmetric matrices
//! `Ω_ab = ω(e_a, e_b)`, and the complex structure is the matrix `J` with
//! `J e_{x_j} = e_{y_j}`. Conventions: `(Iη)(X) = η(JX)`, so `Iη = Jᵀη`;
//! `d^c f = I df`; `ω = −d^cθ + θ∧Iθ`; the metric is `g(X, Y) = ω(JX, Y)`.

mod checks;
mod deform;
mod lee;
mod sampling;
mod verify;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

pub use checks::{
  closedness_residual, exterior_derivative_fd, potential_identity_residual, potential_identity_study,
  structure_equation_residual, structure_study, ConvergenceStudy,
};
pub use deform::{
  continued_fraction_convergent, deformation_threshold, rational_lee_deformation, LeeDeformation, ThresholdReport,
};
pub use lee::{BumpPerturbation, ConstantLee, LeeField, TestPotential, ZeroLee};
pub use sampling::{annulus_points, generic_points, sample_point};
pub use verify::{hopf_verify, Check, CheckOutcome, Histogram, HopfReport, VerifyConfig};

/// Tolerance on `|α_i|^{β_i} C − 1`.
pub const BETA_TOL: f64 = 1e-14;

/// Diagonal Hopf data `(α, C)` and the derived exponents `β_i`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HopfData {
  #[serde(serialize_with = "serialize_complex")]
  alpha: Vec<Complex64>,
  c: f64,
  beta: Vec<f64>,
}

fn serialize_complex<S: serde::Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
  use serde::ser::SerializeSeq;
  let mut seq = s.serialize_seq(Some(v.len()))?;
  for z in v {
    seq.serialize_element(&[z.re, z.im])?;
  }
  seq.end()
}

impl HopfData {
  pub fn new(alpha: Vec<Complex64>, c: f64) -> Result<Self> {
    if alpha.is_empty() {
      return Err(Error::InvalidHopf("need at least one eigenvalue".into()));
    }
    if !(c.is_finite() && c > 1.0) {
      return Err(Error::InvalidHopf(format!("C = {c} must exceed 1")));
    }
    let mut beta = Vec::with_capacity(alpha.len());
    for (i, a) in alpha.iter().enumerate() {
      let m = a.norm();
      if !(m > 0.0 && m < 1.0) {
        return Err(Error::InvalidHopf(format!("|α_{}| = {m} is not in (0, 1)", i + 1)));
      }
      let b = c.ln() / (1.0 / m).ln();
      let defect = (m.powf(b) * c - 1.0).abs();
      if defect > BETA_TOL {
        return Err(Error::InvalidHopf(format!("|α_{}|^β C deviates from 1 by {defect:e}", i + 1)));
      }
      beta.push(b);
    }
    Ok(Self { alpha, c, beta })
  }

  /// Real positive eigenvalues.
  pub fn from_moduli(moduli: &[f64], c: f64) -> Result<Self> {
    Self::new(moduli.iter().map(|m| Complex64::new(*m, 0.0)).collect(), c)
  }

  pub fn n(&self) -> usize { self.alpha.len() }

  pub fn real_dim(&self) -> usize { 2 * self.n() }

  pub fn alpha(&self) -> &[Complex64] { &self.alpha }

  pub fn c(&self) -> f64 { self.c }

  pub fn beta(&self) -> &[f64] { &self.beta }

  /// `max_i | |α_i|^{β_i} C − 1 |`.
  pub fn beta_defect(&self) -> f64 {
    self.alpha.iter().zip(&self.beta).map(|(a, b)| (a.norm().powf(*b) * self.c - 1.0).abs()).fold(0.0, f64::max)
  }

  fn check_point(&self, z: &DVector<f64>) -> Result<()> {
    if z.len() != self.real_dim() {
      return Err(Error::InvalidArgument(format!("point has {} real coordinates, expected {}", z.len(), self.real_dim())));
    }
    if z.iter().all(|x| *x == 0.0) {
      return Err(Error::ZeroPoint);
    }
    Ok(())
  }

  /// `z ↦ Az` in real coordinates.
  pub fn act(&self, z: &DVector<f64>) -> DVector<f64> { self.real_matrix() * z }

  /// `A` as a real `2n × 2n` matrix.
  pub fn real_matrix(&self) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(self.real_dim(), self.real_dim());
    for (j, a) in self.alpha.iter().enumerate() {
      m[(2 * j, 2 * j)] = a.re;
      m[(2 * j, 2 * j + 1)] = -a.im;
      m[(2 * j + 1, 2 * j)] = a.im;
      m[(2 * j + 1, 2 * j + 1)] = a.re;
    }
    m
  }

  /// `φ(z) = Σ |z_i|^{β_i}`.
  pub fn potential(&self, z: &DVector<f64>) -> Result<f64> {
    self.check_point(z)?;
    Ok((0..self.n()).map(|j| radial_power(self.beta[j], z[2 * j], z[2 * j + 1]).0).sum())
  }

  pub fn potential_gradient(&self, z: &DVector<f64>) -> Result<DVector<f64>> {
    self.check_point(z)?;
    let mut g = DVector::zeros(self.real_dim());
    for j in 0..self.n() {
      let (_, grad, _) = radial_power_derivatives(self.beta[j], z[2 * j], z[2 * j + 1], j)?;
      g[2 * j] = grad[0];
      g[2 * j + 1] = grad[1];
    }
    Ok(g)
  }

  pub fn potential_hessian(&self, z: &DVector<f64>) -> Result<DMatrix<f64>> {
    self.check_point(z)?;
    let mut h = DMatrix::zeros(self.real_dim(), self.real_dim());
    for j in 0..self.n() {
      let (_, _, hess) = radial_power_derivatives(self.beta[j], z[2 * j], z[2 * j + 1], j)?;
      for a in 0..2 {
        for b in 0..2 {
          h[(2 * j + a, 2 * j + b)] = hess[a][b];
        }
      }
    }
    Ok(h)
  }

  /// `θ = d log φ`.
  pub fn lee_form(&self, z: &DVector<f64>) -> Result<DVector<f64>> {
    let phi = self.potential(z)?;
    Ok(self.potential_gradient(z)? / phi)
  }

  /// Hessian of `log φ`, i.e. the Jacobian of θ.
  pub fn lee_jacobian(&self, z: &DVector<f64>) -> Result<DMatrix<f64>> {
    let phi = self.potential(z)?;
    let theta = self.potential_gradient(z)? / phi;
    Ok(self.potential_hessian(z)? / phi - &theta * theta.transpose())
  }

  /// `θ^♯ = −Σ z_i log|α_i| ∂_{z_i}` as complex coefficients.
  pub fn lee_field(&self, z: &[Complex64]) -> Result<Vec<Complex64>> {
    if z.len() != self.n() {
      return Err(Error::InvalidArgument(format!("point has {} complex coordinates, expected {}", z.len(), self.n())));
    }
    Ok(z.iter().zip(&self.alpha).map(|(zi, a)| -zi * a.norm().ln()).collect())
  }

  /// `|φ(Az) − C⁻¹φ(z)| / φ(z)`.
  pub fn automorphy_residual(&self, z: &DVector<f64>) -> Result<f64> {
    let phi = self.potential(z)?;
    Ok((self.potential(&self.act(z))? - phi / self.c).abs() / phi)
  }

  /// `‖(A*θ)(z) − θ(z)‖_∞`.
  pub fn lee_invariance_residual(&self, z: &DVector<f64>) -> Result<f64> {
    let pulled = self.real_matrix().transpose() * self.lee_form(&self.act(z))?;
    Ok((pulled - self.lee_form(z)?).amax())
  }

  /// `ω = −d^cθ + θ∧Iθ` at `z`, from analytic derivatives.
  pub fn lck_form(&self, z: &DVector<f64>) -> Result<DMatrix<f64>> {
    Ok(lck_form_from(&self.lee_form(z)?, &self.lee_jacobian(z)?))
  }

  /// `dd^cφ / φ`, the other end of the conformal chain.
  pub fn conformal_kahler_form(&self, z: &DVector<f64>) -> Result<DMatrix<f64>> {
    Ok(ddc(&self.potential_hessian(z)?) / self.potential(z)?)
  }

  /// Everything evaluated at one point.
  pub fn frame(&self, z: &DVector<f64>) -> Result<PointFrame> {
    let phi = self.potential(z)?;
    let theta = self.lee_form(z)?;
    let omega = self.lck_form(z)?;
    Ok(PointFrame::new(z.clone(), phi, theta, omega))
  }
}

/// `(r^β, ∇, Hessian)` of `r^β` in one complex coordinate, `r² = x² + y²`.
fn radial_power(beta: f64, x: f64, y: f64) -> (f64, [f64; 2], [[f64; 2]; 2]) {
  let r2 = x * x + y * y;
  let value = r2.powf(beta / 2.0);
  let c1 = beta * r2.powf(beta / 2.0 - 1.0);
  let c2 = beta * (beta - 2.0) * r2.powf(beta / 2.0 - 2.0);
  let p = [x, y];
  let mut hess = [[0.0; 2]; 2];
  for a in 0..2 {
    for b in 0..2 {
      hess[a][b] = c2 * p[a] * p[b] + if a == b { c1 } else { 0.0 };
    }
  }
  (value, [c1 * x, c1 * y], hess)
}

fn radial_power_derivatives(beta: f64, x: f64, y: f64, coordinate: usize) -> Result<(f64, [f64; 2], [[f64; 2]; 2])> {
  if x != 0.0 || y != 0.0 {
    return Ok(radial_power(beta, x, y));
  }
  if beta < 2.0 {
    return Err(Error::SingularPoint { coordinate: coordinate + 1, beta });
  }
  let d = if beta == 2.0 { 2.0 } else { 0.0 };
  Ok((0.0, [0.0, 0.0], [[d, 0.0], [0.0, d]]))
}

/// The complex structure on `ℝ^{2n}`.
pub fn complex_structure(real_dim: usize) -> DMatrix<f64> {
  let mut j = DMatrix::zeros(real_dim, real_dim);
  for k in 0..real_dim / 2 {
    j[(2 * k + 1, 2 * k)] = 1.0;
    j[(2 * k, 2 * k + 1)] = -1.0;
  }
  j
}

/// `α∧β` as an antisymmetric matrix.
pub fn wedge(a: &DVector<f64>, b: &DVector<f64>) -> DMatrix<f64> { a * b.transpose() - b * a.transpose() }

/// `Iη = Jᵀη`.
pub fn i_covector(eta: &DVector<f64>) -> DVector<f64> { complex_structure(eta.len()).transpose() * eta }

/// `dd^c u` from the Hessian of `u`.
pub fn ddc(hessian: &DMatrix<f64>) -> DMatrix<f64> {
  let j = complex_structure(hessian.nrows());
  hessian * &j + &j * hessian
}

/// `d^cθ` for a closed θ with Jacobian `Dθ`.
pub fn dc_of_closed(jacobian: &DMatrix<f64>) -> DMatrix<f64> { -ddc(jacobian) }

/// `ω = −d^cθ + θ∧Iθ`.
pub fn lck_form_from(theta: &DVector<f64>, jacobian: &DMatrix<f64>) -> DMatrix<f64> {
  -dc_of_closed(jacobian) + wedge(theta, &i_covector(theta))
}

/// `g(X, Y) = ω(JX, Y)`.
pub fn metric_of(omega: &DMatrix<f64>) -> DMatrix<f64> { complex_structure(omega.nrows()).transpose() * omega }

/// Smallest eigenvalue of the symmetric part of the metric of ω.
pub fn min_metric_eigenvalue(omega: &DMatrix<f64>) -> f64 {
  let g = metric_of(omega);
  let sym = (&g + g.transpose()) * 0.5;
  sym.symmetric_eigenvalues().min()
}

/// Pointwise evaluation of the LCK data.
#[derive(Clone, Debug, Serialize)]
pub struct PointFrame {
  pub z: Vec<f64>,
  pub phi: f64,
  pub theta: Vec<f64>,
  pub i_theta: Vec<f64>,
  pub omega: Vec<Vec<f64>>,
  pub min_eigenvalue: f64,
  pub antisymmetry_residual: f64,
  pub invariance_residual: f64,
  pub metric_asymmetry: f64,
}

impl PointFrame {
  fn new(z: DVector<f64>, phi: f64, theta: DVector<f64>, omega: DMatrix<f64>) -> Self {
    let j = complex_structure(omega.nrows());
    let g = metric_of(&omega);
    Self {
      z: z.iter().copied().collect(),
      phi,
      i_theta: i_covector(&theta).iter().copied().collect(),
      theta: theta.iter().copied().collect(),
      omega: omega.row_iter().map(|r| r.iter().copied().collect()).collect(),
      min_eigenvalue: min_metric_eigenvalue(&omega),
      antisymmetry_residual: (&omega + omega.transpose()).amax(),
      invariance_residual: (j.transpose() * &omega * &j - &omega).amax(),
      metric_asymmetry: (&g - g.transpose()).amax(),
    }
  }
}

/// Packs complex coordinates into a real point.
pub fn to_real(z: &[Complex64]) -> DVector<f64> { DVector::from_iterator(2 * z.len(), z.iter().flat_map(|c| [c.re, c.im])) }

#[cfg(test)]
mod tests {
  use super::*;
  use std::f64::consts::E;

  fn pt(v: &[f64]) -> DVector<f64> { DVector::from_column_slice(v) }

  #[test]
  fn exponents_and_potential() {
    let h = HopfData::from_moduli(&[1.0 / E], E * E).unwrap();
    assert!((h.beta()[0] - 2.0).abs() < 1e-15);
    let z = pt(&[0.3, -1.2]);
    assert!((h.potential(&z).unwrap() - (0.09 + 1.44)).abs() < 1e-14);
    let h2 = HopfData::from_moduli(&[0.3, 0.5], 7.0).unwrap();
    let z = pt(&[0.0, 0.0, 0.4, 0.7]);
    let expect = (0.16f64 + 0.49).powf(h2.beta()[1] / 2.0);
    assert!((h2.potential(&z).unwrap() - expect).abs() < 1e-15);
    assert!(h2.beta_defect() <= BETA_TOL);
    assert!(matches!(h2.potential(&pt(&[0.0; 4])), Err(Error::ZeroPoint)));
  }

  #[test]
  fn invalid_data_rejected() {
    assert!(HopfData::from_moduli(&[1.2], 3.0).is_err());
    assert!(HopfData::from_moduli(&[0.5], 0.5).is_err());
    assert!(HopfData::from_moduli(&[], 3.0).is_err());
  }

  #[test]
  fn lee_form_of_standard_hopf() {
    let h = HopfData::from_moduli(&[1.0 / E], E * E).unwrap();
    let z = pt(&[0.6, 0.8]);
    let theta = h.lee_form(&z).unwrap();
    assert!((theta[0] - 1.2).abs() < 1e-14 && (theta[1] - 1.6).abs() < 1e-14);
  }

  #[test]
  fn lee_form_matches_finite_differences() {
    let h = HopfData::from_moduli(&[0.3, 0.55], 6.0).unwrap();
    let z = pt(&[0.7, -0.4, 0.9, 1.1]);
    let theta = h.lee_form(&z).unwrap();
    let err = |step: f64| {
      (0..4)
        .map(|a| {
          let mut p = z.clone();
          let mut m = z.clone();
          p[a] += step;
          m[a] -= step;
          ((h.potential(&p).unwrap().ln() - h.potential(&m).unwrap().ln()) / (2.0 * step) - theta[a]).abs()
        })
        .fold(0.0, f64::max)
    };
    let ratio = err(2e-4) / err(1e-4);
    assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
  }

  #[test]
  fn lee_field_examples() {
    let h = HopfData::from_moduli(&[1.0 / E, 1.0 / E], E * E).unwrap();
    let z = [Complex64::new(1.0, 2.0), Complex64::new(-0.5, 0.1)];
    let v = h.lee_field(&z).unwrap();
    for (a, b) in v.iter().zip(&z) {
      assert!((a - b).norm() < 1e-15);
    }
    let h = HopfData::from_moduli(&[0.4, 0.7], 5.0).unwrap();
    let v = h.lee_field(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]).unwrap();
    assert!((v[0].re + 0.4f64.ln()).abs() < 1e-15 && v[1].norm() == 0.0);
  }

  #[test]
  fn cylinder_form_in_dimension_one() {
    // dd^c|z|² / |z|²: the metric is 4/|z|² times the identity.
    let h = HopfData::from_moduli(&[1.0 / E], E * E).unwrap();
    let z = pt(&[1.5, -0.5]);
    let f = h.frame(&z).unwrap();
    let r2 = 2.5;
    assert!((f.min_eigenvalue - 4.0 / r2).abs() < 1e-13);
    let kahler = h.conformal_kahler_form(&z).unwrap();
    assert!((kahler - h.lck_form(&z).unwrap()).amax() < 1e-13);
  }

  #[test]
  fn conformal_chain_and_positivity_in_dimension_two() {
    let h = HopfData::from_moduli(&[1.0 / E, 1.0 / E], E * E).unwrap();
    let f = h.frame(&pt(&[1.0, 0.0, 1.0, 0.0])).unwrap();
    assert!(f.min_eigenvalue > 0.0);
    assert!(f.antisymmetry_residual < 1e-12 && f.invariance_residual < 1e-12 && f.metric_asymmetry < 1e-12);
    let h = HopfData::from_moduli(&[0.2, 0.45], 9.0).unwrap();
    for z in [pt(&[0.3, 0.2, -1.0, 0.4]), pt(&[2.0, -1.0, 0.1, 0.05])] {
      let lhs = h.conformal_kahler_form(&z).unwrap();
      let rhs = h.lck_form(&z).unwrap();
      assert!((lhs - rhs).amax() < 1e-8);
    }
  }

  #[test]
  fn singular_hyperplanes() {
    // β < 2 on a coordinate hyperplane is refused; β = 2 and β > 2 are fine.
    let h = HopfData::from_moduli(&[0.2, 0.5], 2.5).unwrap();
    assert!(h.beta()[0] < 2.0);
    let on_plane = pt(&[0.0, 0.0, 1.0, 0.0]);
    assert!(matches!(h.lck_form(&on_plane), Err(Error::SingularPoint { coordinate: 1, .. })));
    let h = HopfData::from_moduli(&[0.5, 0.5], 4.0).unwrap();
    assert!(h.lck_form(&on_plane).is_ok());
    let h = HopfData::from_moduli(&[0.5, 0.5], 8.0).unwrap();
    assert!(h.lck_form(&on_plane).is_ok());
  }

  #[test]
  fn automorphy_and_invariance() {
    let h = HopfData::new(vec![Complex64::from_polar(0.4, 0.7), Complex64::from_polar(0.6, -1.3)], 5.0).unwrap();
    let z = pt(&[0.3, -0.8, 1.4, 0.2]);
    assert!(h.automorphy_residual(&z).unwrap() < 1e-13);
    assert!(h.lee_invariance_residual(&z).unwrap() < 1e-12);
  }
}
