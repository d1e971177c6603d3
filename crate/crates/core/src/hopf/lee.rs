//! Closed 1-forms on `ℂⁿ \ 0` given by value and Jacobian, and polynomial
//! test potentials.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use super::HopfData;
use crate::error::{Error, Result};

/// A closed real 1-form on (an open subset of) `ℝ^{2n}`.
pub trait LeeField: Sync {
  fn real_dim(&self) -> usize;

  fn value(&self, z: &DVector<f64>) -> Result<DVector<f64>>;

  /// `∂_a θ_b`; symmetric because θ is closed.
  fn jacobian(&self, z: &DVector<f64>) -> Result<DMatrix<f64>>;
}

impl LeeField for HopfData {
  fn real_dim(&self) -> usize { HopfData::real_dim(self) }

  fn value(&self, z: &DVector<f64>) -> Result<DVector<f64>> { self.lee_form(z) }

  fn jacobian(&self, z: &DVector<f64>) -> Result<DMatrix<f64>> { self.lee_jacobian(z) }
}

#[derive(Clone, Copy, Debug)]
pub struct ZeroLee(pub usize);

impl LeeField for ZeroLee {
  fn real_dim(&self) -> usize { self.0 }

  fn value(&self, _: &DVector<f64>) -> Result<DVector<f64>> { Ok(DVector::zeros(self.0)) }

  fn jacobian(&self, _: &DVector<f64>) -> Result<DMatrix<f64>> { Ok(DMatrix::zeros(self.0, self.0)) }
}

#[derive(Clone, Debug)]
pub struct ConstantLee(pub DVector<f64>);

impl LeeField for ConstantLee {
  fn real_dim(&self) -> usize { self.0.len() }

  fn value(&self, _: &DVector<f64>) -> Result<DVector<f64>> { Ok(self.0.clone()) }

  fn jacobian(&self, _: &DVector<f64>) -> Result<DMatrix<f64>> { Ok(DMatrix::zeros(self.0.len(), self.0.len())) }
}

/// `θ + ε (s θ + d g)` with `g = |z_j|^{β_j} / φ`.
///
/// `g` is invariant under `A`, so the result is again a closed form on the
/// Hopf manifold; `s` rescales the period.
#[derive(Clone, Debug)]
pub struct BumpPerturbation {
  pub hopf: HopfData,
  pub coordinate: usize,
  pub period_scale: f64,
  pub epsilon: f64,
}

impl BumpPerturbation {
  pub fn new(hopf: HopfData, coordinate: usize, period_scale: f64, epsilon: f64) -> Result<Self> {
    if coordinate >= hopf.n() {
      return Err(Error::InvalidArgument(format!("coordinate {coordinate} out of range for n = {}", hopf.n())));
    }
    Ok(Self { hopf, coordinate, period_scale, epsilon })
  }

  pub fn with_epsilon(&self, epsilon: f64) -> Self { Self { epsilon, ..self.clone() } }

  /// `(u, ∇u, Hess u)` for `u = |z_j|^{β_j}`, embedded in `ℝ^{2n}`.
  fn bump(&self, z: &DVector<f64>) -> Result<(f64, DVector<f64>, DMatrix<f64>)> {
    let j = self.coordinate;
    let d = self.hopf.real_dim();
    let (v, g, h) = super::radial_power_derivatives(self.hopf.beta()[j], z[2 * j], z[2 * j + 1], j)?;
    let mut grad = DVector::zeros(d);
    let mut hess = DMatrix::zeros(d, d);
    for a in 0..2 {
      grad[2 * j + a] = g[a];
      for b in 0..2 {
        hess[(2 * j + a, 2 * j + b)] = h[a][b];
      }
    }
    Ok((v, grad, hess))
  }

  /// Gradient and Hessian of `g = u / φ`.
  fn ratio_derivatives(&self, z: &DVector<f64>) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let (u, du, hu) = self.bump(z)?;
    let phi = self.hopf.potential(z)?;
    let dphi = self.hopf.potential_gradient(z)?;
    let hphi = self.hopf.potential_hessian(z)?;
    let grad = &du / phi - &dphi * (u / (phi * phi));
    let cross = &du * dphi.transpose() + &dphi * du.transpose();
    let hess = hu / phi - cross / (phi * phi) - hphi * (u / (phi * phi)) + (&dphi * dphi.transpose()) * (2.0 * u / phi.powi(3));
    Ok((grad, hess))
  }
}

impl LeeField for BumpPerturbation {
  fn real_dim(&self) -> usize { self.hopf.real_dim() }

  fn value(&self, z: &DVector<f64>) -> Result<DVector<f64>> {
    let theta = self.hopf.lee_form(z)?;
    let (dg, _) = self.ratio_derivatives(z)?;
    Ok(&theta * (1.0 + self.epsilon * self.period_scale) + dg * self.epsilon)
  }

  fn jacobian(&self, z: &DVector<f64>) -> Result<DMatrix<f64>> {
    let dtheta = self.hopf.lee_jacobian(z)?;
    let (_, hg) = self.ratio_derivatives(z)?;
    Ok(dtheta * (1.0 + self.epsilon * self.period_scale) + hg * self.epsilon)
  }
}

/// `φ̃(x) = c + bᵀy + ½ yᵀQy` with `y = x − x₀` and `Q` symmetric.
#[derive(Clone, Debug)]
pub struct TestPotential {
  pub center: DVector<f64>,
  pub constant: f64,
  pub linear: DVector<f64>,
  pub quadratic: DMatrix<f64>,
}

impl TestPotential {
  pub fn constant(real_dim: usize, c: f64) -> Self {
    Self {
      center: DVector::zeros(real_dim),
      constant: c,
      linear: DVector::zeros(real_dim),
      quadratic: DMatrix::zeros(real_dim, real_dim),
    }
  }

  /// Coefficients uniform in `[-1, 1]`, constant in `[1, 2]`, expanded
  /// around `center`.
  pub fn random<R: Rng + ?Sized>(rng: &mut R, center: &DVector<f64>) -> Self {
    let d = center.len();
    let linear = DVector::from_fn(d, |_, _| rng.random_range(-1.0..1.0));
    let raw = DMatrix::from_fn(d, d, |_, _| rng.random_range(-1.0..1.0));
    Self { center: center.clone(), constant: rng.random_range(1.0..2.0), linear, quadratic: (&raw + raw.transpose()) * 0.5 }
  }

  pub fn real_dim(&self) -> usize { self.linear.len() }

  pub fn value(&self, x: &DVector<f64>) -> f64 {
    let y = x - &self.center;
    self.constant + self.linear.dot(&y) + 0.5 * y.dot(&(&self.quadratic * &y))
  }

  pub fn gradient(&self, x: &DVector<f64>) -> DVector<f64> { &self.linear + &self.quadratic * (x - &self.center) }

  pub fn hessian(&self) -> &DMatrix<f64> { &self.quadratic }
}

#[cfg(test)]
mod tests {
  use super::*;

  fn fd_jacobian(field: &dyn LeeField, z: &DVector<f64>, h: f64) -> DMatrix<f64> {
    let d = z.len();
    let mut m = DMatrix::zeros(d, d);
    for a in 0..d {
      let mut p = z.clone();
      let mut q = z.clone();
      p[a] += h;
      q[a] -= h;
      let col = (field.value(&p).unwrap() - field.value(&q).unwrap()) / (2.0 * h);
      for b in 0..d {
        m[(a, b)] = col[b];
      }
    }
    m
  }

  #[test]
  fn perturbation_jacobian_matches_finite_differences() {
    let hopf = HopfData::from_moduli(&[0.3, 0.5], 8.0).unwrap();
    let field = BumpPerturbation::new(hopf, 0, 0.5, 0.7).unwrap();
    let z = DVector::from_column_slice(&[0.8, -0.3, 0.5, 1.1]);
    let exact = field.jacobian(&z).unwrap();
    assert!((&exact - exact.transpose()).amax() < 1e-12, "closed form must have symmetric Jacobian");
    assert!((fd_jacobian(&field, &z, 1e-5) - exact).amax() < 1e-7);
  }

  #[test]
  fn perturbation_is_invariant_under_the_hopf_action() {
    let hopf = HopfData::from_moduli(&[0.3, 0.5], 8.0).unwrap();
    let field = BumpPerturbation::new(hopf.clone(), 1, 0.0, 1.0).unwrap();
    let z = DVector::from_column_slice(&[0.8, -0.3, 0.5, 1.1]);
    let pulled = hopf.real_matrix().transpose() * field.value(&hopf.act(&z)).unwrap();
    assert!((pulled - field.value(&z).unwrap()).amax() < 1e-12);
    assert!(BumpPerturbation::new(hopf, 2, 0.0, 1.0).is_err());
  }

  #[test]
  fn hopf_lee_field_is_closed() {
    let hopf = HopfData::from_moduli(&[0.25, 0.6], 5.0).unwrap();
    let z = DVector::from_column_slice(&[0.4, 0.9, -0.7, 0.2]);
    let j = LeeField::jacobian(&hopf, &z).unwrap();
    assert!((&j - j.transpose()).amax() < 1e-12);
    assert!((fd_jacobian(&hopf, &z, 1e-5) - j).amax() < 1e-7);
  }
}
