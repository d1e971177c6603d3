//! Fourier-truncated differential forms on the flat torus `ℂⁿ / ℤ^{2n}` with a
//! constant Lee form.
//!
//! Real coordinates are ordered `(x₁, y₁, …, x_n, y_n)` with `z_j = x_j + i y_j`.
//! A form is a finite sum of `c · e^{2πi k·x} dz_I ∧ dz̄_J`; the basis element
//! `dz_I ∧ dz̄_J` is encoded as a bitmask whose low `n` bits select `dz_j` and
//! high `n` bits select `dz̄_j`, wedged in ascending bit order. With constant
//! θ every operator acts on one Fourier mode at a time by wedging with a
//! mode-dependent covector, so the cutoff never grows.
//!
//! Complex structure conventions: `I` acts on a `(p,q)` component by
//! `i^{p−q}` (pullback by the complex structure), `d^c = −I⁻¹ d I`, and
//! `d^c_θ = −I⁻¹ d_θ I = d^c − Iθ` on functions. With these,
//! `d_θ d^c_θ = −2i ∂_θ ∂̄_θ`.

mod cohomology;

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};

pub use cohomology::{
  bc_exact_sequence_report, bott_chern_dims, conjugate_dolbeault_dims, de_rham_dims, dolbeault_dims, harmonic_dim, harmonic_dims,
  BcSequenceReport, CohomologyKind, SpectralDims,
};

/// Fourier mode, one integer per real coordinate.
pub type Mode = Vec<i32>;

/// The flat torus of complex dimension `n` with modes `|k_i| ≤ cutoff`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FlatTorus {
  n: usize,
  cutoff: usize,
}

impl FlatTorus {
  pub fn new(n: usize, cutoff: usize) -> Result<Self> {
    if n == 0 {
      return Err(Error::InvalidTorus("complex dimension must be at least 1".into()));
    }
    if n > 3 {
      return Err(Error::InvalidTorus(format!("complex dimension {n} exceeds the supported maximum of 3")));
    }
    if cutoff < 2 {
      return Err(Error::InvalidTorus(format!("mode cutoff {cutoff} is below 2")));
    }
    Ok(Self { n, cutoff })
  }

  pub fn n(&self) -> usize { self.n }

  pub fn cutoff(&self) -> usize { self.cutoff }

  pub fn real_dim(&self) -> usize { 2 * self.n }

  pub fn with_cutoff(&self, cutoff: usize) -> Result<Self> { Self::new(self.n, cutoff) }

  /// All modes within the cutoff, in lexicographic order.
  pub fn modes(&self) -> Vec<Mode> {
    let d = self.real_dim();
    let n = self.cutoff as i32;
    let mut out = Vec::with_capacity((2 * self.cutoff + 1).pow(d as u32));
    let mut k = vec![-n; d];
    loop {
      out.push(k.clone());
      let mut i = d;
      loop {
        if i == 0 {
          return out;
        }
        i -= 1;
        if k[i] < n {
          k[i] += 1;
          break;
        }
        k[i] = -n;
      }
    }
  }
}

/// Constant real Lee form `θ = Σ c_a dx_a`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstantLeeForm {
  coefficients: Vec<f64>,
}

impl ConstantLeeForm {
  pub fn new(coefficients: Vec<f64>) -> Result<Self> {
    if coefficients.is_empty() || coefficients.len() % 2 != 0 {
      return Err(Error::InvalidTorus(format!("Lee form needs 2n coefficients, got {}", coefficients.len())));
    }
    if coefficients.iter().any(|c| !c.is_finite()) {
      return Err(Error::InvalidTorus("Lee form coefficients must be finite".into()));
    }
    Ok(Self { coefficients })
  }

  pub fn zero(n: usize) -> Self { Self { coefficients: vec![0.0; 2 * n] } }

  pub fn n(&self) -> usize { self.coefficients.len() / 2 }

  pub fn coefficients(&self) -> &[f64] { &self.coefficients }

  pub fn is_zero(&self) -> bool { self.coefficients.iter().all(|c| *c == 0.0) }

  /// Coefficient of `dz_j` in θ^{1,0}: `(c_x − i c_y)/2`.
  pub fn holomorphic_part(&self, j: usize) -> Complex64 {
    Complex64::new(self.coefficients[2 * j], -self.coefficients[2 * j + 1]) / 2.0
  }

  /// Coefficient of `dz̄_j` in θ^{0,1}: `(c_x + i c_y)/2`.
  pub fn antiholomorphic_part(&self, j: usize) -> Complex64 {
    Complex64::new(self.coefficients[2 * j], self.coefficients[2 * j + 1]) / 2.0
  }

  /// Weights of the character on the lattice generators: `e^{c_a}`.
  pub fn character_weights(&self) -> Vec<f64> { self.coefficients.iter().map(|c| c.exp()).collect() }
}

/// Differential operators acting on spectral forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Operator {
  D,
  Dc,
  Del,
  DelBar,
  DTheta,
  DcTheta,
  DelTheta,
  DelBarTheta,
  DelDelBarTheta,
}

impl Operator {
  pub const ALL: [Operator; 9] = [
    Operator::D,
    Operator::Dc,
    Operator::Del,
    Operator::DelBar,
    Operator::DTheta,
    Operator::DcTheta,
    Operator::DelTheta,
    Operator::DelBarTheta,
    Operator::DelDelBarTheta,
  ];
}

pub(crate) fn popcount(x: usize) -> usize { x.count_ones() as usize }

/// Bidegree of the basis element `mask`.
pub fn bidegree(n: usize, mask: usize) -> (usize, usize) { (popcount(mask & ((1 << n) - 1)), popcount(mask >> n)) }

/// Basis masks of a given bidegree in ascending order.
pub fn basis_of_bidegree(n: usize, p: usize, q: usize) -> Vec<usize> {
  (0..1usize << (2 * n)).filter(|m| bidegree(n, *m) == (p, q)).collect()
}

/// Basis masks of total degree `k` in ascending order.
pub fn basis_of_degree(n: usize, k: usize) -> Vec<usize> { (0..1usize << (2 * n)).filter(|m| popcount(*m) == k).collect() }

/// `e_g ∧ e_mask` as `(sign, mask)`, or `None` when `g` is already present.
pub(crate) fn wedge_generator(g: usize, mask: usize) -> Option<(f64, usize)> {
  if mask & (1 << g) != 0 {
    return None;
  }
  let sign = if popcount(mask & ((1 << g) - 1)) % 2 == 0 { 1.0 } else { -1.0 };
  Some((sign, mask | (1 << g)))
}

/// The covectors through which a mode's operators act.
#[derive(Clone, Debug)]
pub(crate) struct ModeSymbols {
  /// `dz_j` coefficients of ∂ (untwisted) on this mode.
  pub del: Vec<Complex64>,
  /// `dz̄_j` coefficients of ∂̄ (untwisted) on this mode.
  pub delbar: Vec<Complex64>,
  /// θ^{1,0} and θ^{0,1} coefficients.
  pub theta10: Vec<Complex64>,
  pub theta01: Vec<Complex64>,
}

impl ModeSymbols {
  pub fn new(mode: &[i32], theta: &ConstantLeeForm) -> Self {
    let n = mode.len() / 2;
    // ∂/∂z = (∂_x − i∂_y)/2 and ∂/∂z̄ = (∂_x + i∂_y)/2 on e^{2πi k·x}.
    let del = (0..n).map(|j| Complex64::new(PI * f64::from(mode[2 * j + 1]), PI * f64::from(mode[2 * j]))).collect();
    let delbar = (0..n).map(|j| Complex64::new(-PI * f64::from(mode[2 * j + 1]), PI * f64::from(mode[2 * j]))).collect();
    Self {
      del,
      delbar,
      theta10: (0..n).map(|j| theta.holomorphic_part(j)).collect(),
      theta01: (0..n).map(|j| theta.antiholomorphic_part(j)).collect(),
    }
  }

  pub fn n(&self) -> usize { self.del.len() }

  /// Full covector (length 2n, dz then dz̄) of ∂_θ (`twisted`) or ∂.
  pub fn del_covector(&self, twisted: bool) -> Vec<Complex64> {
    let n = self.n();
    let mut v = vec![Complex64::new(0.0, 0.0); 2 * n];
    for j in 0..n {
      v[j] = if twisted { self.del[j] - self.theta10[j] } else { self.del[j] };
    }
    v
  }

  pub fn delbar_covector(&self, twisted: bool) -> Vec<Complex64> {
    let n = self.n();
    let mut v = vec![Complex64::new(0.0, 0.0); 2 * n];
    for j in 0..n {
      v[n + j] = if twisted { self.delbar[j] - self.theta01[j] } else { self.delbar[j] };
    }
    v
  }

  pub fn d_covector(&self, twisted: bool) -> Vec<Complex64> {
    self.del_covector(twisted).iter().zip(self.delbar_covector(twisted)).map(|(a, b)| a + b).collect()
  }
}

/// Wedges a coefficient vector (indexed by mask) with a covector.
pub(crate) fn wedge(covector: &[Complex64], coeffs: &[Complex64]) -> Vec<Complex64> {
  let mut out = vec![Complex64::new(0.0, 0.0); coeffs.len()];
  for (mask, c) in coeffs.iter().enumerate() {
    if *c == Complex64::new(0.0, 0.0) {
      continue;
    }
    for (g, xi) in covector.iter().enumerate() {
      if *xi == Complex64::new(0.0, 0.0) {
        continue;
      }
      if let Some((sign, target)) = wedge_generator(g, mask) {
        out[target] += xi * c * sign;
      }
    }
  }
  out
}

/// `I`: multiplies the `(p,q)` component by `i^{p−q}`; `inverse` uses `i^{q−p}`.
fn complex_structure(n: usize, coeffs: &[Complex64], inverse: bool) -> Vec<Complex64> {
  coeffs
    .iter()
    .enumerate()
    .map(|(mask, c)| {
      let (p, q) = bidegree(n, mask);
      let e = (p as i64 - q as i64).rem_euclid(4);
      let e = if inverse { (4 - e) % 4 } else { e };
      c * Complex64::i().powu(e as u32)
    })
    .collect()
}

fn apply_on_mode(op: Operator, symbols: &ModeSymbols, coeffs: &[Complex64]) -> Vec<Complex64> {
  let n = symbols.n();
  let conj_by_i = |twisted: bool| {
    let rotated = complex_structure(n, coeffs, false);
    let dif = wedge(&symbols.d_covector(twisted), &rotated);
    complex_structure(n, &dif, true).into_iter().map(|c| -c).collect()
  };
  match op {
    Operator::D => wedge(&symbols.d_covector(false), coeffs),
    Operator::Del => wedge(&symbols.del_covector(false), coeffs),
    Operator::DelBar => wedge(&symbols.delbar_covector(false), coeffs),
    Operator::DTheta => wedge(&symbols.d_covector(true), coeffs),
    Operator::DelTheta => wedge(&symbols.del_covector(true), coeffs),
    Operator::DelBarTheta => wedge(&symbols.delbar_covector(true), coeffs),
    Operator::Dc => conj_by_i(false),
    Operator::DcTheta => conj_by_i(true),
    Operator::DelDelBarTheta => wedge(&symbols.del_covector(true), &wedge(&symbols.delbar_covector(true), coeffs)),
  }
}

/// Finite Fourier sum of differential forms on a flat torus.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralForm {
  n: usize,
  modes: BTreeMap<Mode, Vec<Complex64>>,
}

impl SpectralForm {
  pub fn zero(n: usize) -> Self { Self { n, modes: BTreeMap::new() } }

  /// The constant function 1.
  pub fn one(n: usize) -> Self {
    let mut f = Self::zero(n);
    f.set(&vec![0; 2 * n], 0, Complex64::new(1.0, 0.0));
    f
  }

  pub fn n(&self) -> usize { self.n }

  pub fn basis_len(&self) -> usize { 1 << (2 * self.n) }

  pub fn set(&mut self, mode: &[i32], mask: usize, value: Complex64) {
    assert_eq!(mode.len(), 2 * self.n, "mode has wrong length");
    let len = self.basis_len();
    self.modes.entry(mode.to_vec()).or_insert_with(|| vec![Complex64::new(0.0, 0.0); len])[mask] = value;
  }

  pub fn get(&self, mode: &[i32], mask: usize) -> Complex64 {
    self.modes.get(mode).map_or(Complex64::new(0.0, 0.0), |c| c[mask])
  }

  pub fn modes(&self) -> impl Iterator<Item = (&Mode, &Vec<Complex64>)> { self.modes.iter() }

  /// Largest `|k_i|` over stored modes.
  pub fn max_mode(&self) -> usize { self.modes.keys().flatten().map(|k| k.unsigned_abs() as usize).max().unwrap_or(0) }

  pub fn within_cutoff(&self, cutoff: usize) -> bool { self.max_mode() <= cutoff }

  pub fn max_abs(&self) -> f64 { self.modes.values().flatten().map(|c| c.norm()).fold(0.0, f64::max) }

  pub fn is_zero(&self, tol: f64) -> bool { self.max_abs() <= tol }

  pub fn scale(&self, s: Complex64) -> Self {
    Self { n: self.n, modes: self.modes.iter().map(|(k, c)| (k.clone(), c.iter().map(|x| x * s).collect())).collect() }
  }

  pub fn add(&self, other: &Self) -> Result<Self> {
    if self.n != other.n {
      return Err(Error::DimensionMismatch);
    }
    let mut out = self.clone();
    for (k, c) in &other.modes {
      let slot = out.modes.entry(k.clone()).or_insert_with(|| vec![Complex64::new(0.0, 0.0); c.len()]);
      for (a, b) in slot.iter_mut().zip(c) {
        *a += b;
      }
    }
    Ok(out)
  }

  pub fn sub(&self, other: &Self) -> Result<Self> { self.add(&other.scale(Complex64::new(-1.0, 0.0))) }

  /// Keeps only the components of bidegree `(p, q)`.
  pub fn bidegree_part(&self, p: usize, q: usize) -> Self {
    let n = self.n;
    let modes = self
      .modes
      .iter()
      .map(|(k, c)| (k.clone(), c.iter().enumerate().map(|(m, x)| if bidegree(n, m) == (p, q) { *x } else { Complex64::new(0.0, 0.0) }).collect()))
      .collect();
    Self { n, modes }
  }

  /// Complex conjugate form: `c e^{2πik·x} dz_I ∧ dz̄_J ↦ c̄ e^{−2πik·x} dz̄_I ∧ dz_J`.
  pub fn conjugate(&self) -> Self {
    let n = self.n;
    let low = (1 << n) - 1;
    let mut out = Self::zero(n);
    for (k, c) in &self.modes {
      let neg: Mode = k.iter().map(|x| -x).collect();
      for (mask, x) in c.iter().enumerate() {
        if x.norm() == 0.0 {
          continue;
        }
        let (i_set, j_set) = (mask & low, mask >> n);
        let target = j_set | (i_set << n);
        let sign = if popcount(i_set) * popcount(j_set) % 2 == 0 { 1.0 } else { -1.0 };
        let prev = out.get(&neg, target);
        out.set(&neg, target, prev + x.conj() * sign);
      }
    }
    out
  }

  /// Whether the form equals its conjugate to `tol`.
  pub fn is_real(&self, tol: f64) -> bool { self.sub(&self.conjugate()).map(|d| d.is_zero(tol)).unwrap_or(false) }

  /// `(f + f̄)/2`.
  pub fn real_part(&self) -> Self { self.add(&self.conjugate()).expect("same n").scale(Complex64::new(0.5, 0.0)) }
}

/// Applies a differential operator with constant Lee form θ; mode-preserving.
pub fn apply_operator(op: Operator, form: &SpectralForm, theta: &ConstantLeeForm) -> Result<SpectralForm> {
  if theta.n() != form.n {
    return Err(Error::DimensionMismatch);
  }
  let modes = form.modes.iter().map(|(k, c)| (k.clone(), apply_on_mode(op, &ModeSymbols::new(k, theta), c))).collect();
  Ok(SpectralForm { n: form.n, modes })
}

/// Averages over the circle action in real coordinate `direction`: every mode
/// with a non-zero `k_direction` is dropped.
pub fn circle_average(form: &SpectralForm, direction: usize) -> Result<SpectralForm> {
  if direction >= 2 * form.n {
    return Err(Error::InvalidArgument(format!("direction {direction} outside 0..{}", 2 * form.n)));
  }
  let modes = form.modes.iter().filter(|(k, _)| k[direction] == 0).map(|(k, c)| (k.clone(), c.clone())).collect();
  Ok(SpectralForm { n: form.n, modes })
}

/// Random form with Gaussian-free uniform coefficients in `[-1, 1]²` on
/// `mode_count` random modes within `cutoff`, restricted to basis elements
/// accepted by `keep`.
pub fn random_form<R: Rng + ?Sized>(
  rng: &mut R,
  n: usize,
  cutoff: usize,
  mode_count: usize,
  keep: impl Fn(usize) -> bool,
) -> SpectralForm {
  let mut f = SpectralForm::zero(n);
  let c = cutoff as i32;
  for _ in 0..mode_count {
    let mode: Mode = (0..2 * n).map(|_| rng.random_range(-c..=c)).collect();
    for mask in 0..1usize << (2 * n) {
      if keep(mask) {
        f.set(&mode, mask, Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
      }
    }
  }
  f
}

#[cfg(test)]
mod tests {
  use super::*;
  use rand::SeedableRng;
  use rand_chacha::ChaCha8Rng;

  fn theta(c: &[f64]) -> ConstantLeeForm { ConstantLeeForm::new(c.to_vec()).unwrap() }

  #[test]
  fn torus_validation_and_modes() {
    assert!(FlatTorus::new(0, 4).is_err());
    assert!(FlatTorus::new(1, 1).is_err());
    let t = FlatTorus::new(1, 2).unwrap();
    let modes = t.modes();
    assert_eq!(modes.len(), 25);
    assert_eq!(modes[0], vec![-2, -2]);
    assert_eq!(modes[24], vec![2, 2]);
  }

  #[test]
  fn twisted_derivative_of_one() {
    let th = theta(&[0.7, 0.0]);
    let out = apply_operator(Operator::DTheta, &SpectralForm::one(1), &th).unwrap();
    // −θ = −0.7 dx = −0.35 (dz + dz̄).
    assert!((out.get(&[0, 0], 0b01) - Complex64::new(-0.35, 0.0)).norm() < 1e-15);
    assert!((out.get(&[0, 0], 0b10) - Complex64::new(-0.35, 0.0)).norm() < 1e-15);
    let d = apply_operator(Operator::D, &SpectralForm::one(1), &th).unwrap();
    assert!(d.is_zero(0.0));
  }

  #[test]
  fn derivative_matches_real_gradient() {
    // f = e^{2πi(2x − y)}: df = 2πi f (2 dx − dy).
    let mut f = SpectralForm::zero(1);
    f.set(&[2, -1], 0, Complex64::new(1.0, 0.0));
    let df = apply_operator(Operator::D, &f, &ConstantLeeForm::zero(1)).unwrap();
    // dx = (dz + dz̄)/2, dy = (dz − dz̄)/(2i).
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    let dz = two_pi_i * (Complex64::new(2.0, 0.0) * 0.5 - Complex64::new(1.0, 0.0) / Complex64::new(0.0, 2.0));
    let dzbar = two_pi_i * (Complex64::new(2.0, 0.0) * 0.5 + Complex64::new(1.0, 0.0) / Complex64::new(0.0, 2.0));
    assert!((df.get(&[2, -1], 0b01) - dz).norm() < 1e-12);
    assert!((df.get(&[2, -1], 0b10) - dzbar).norm() < 1e-12);
  }

  #[test]
  fn operators_square_to_zero_and_anticommute() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in [1, 2] {
      let th = theta(&(0..2 * n).map(|i| 0.3 * i as f64 - 0.4).collect::<Vec<_>>());
      for _ in 0..10 {
        let f = random_form(&mut rng, n, 3, 3, |_| true);
        let dd = apply_operator(Operator::DTheta, &apply_operator(Operator::DTheta, &f, &th).unwrap(), &th).unwrap();
        assert!(dd.is_zero(1e-12));
        let bb = apply_operator(Operator::DelBarTheta, &apply_operator(Operator::DelBarTheta, &f, &th).unwrap(), &th).unwrap();
        assert!(bb.is_zero(1e-12));
        let db = apply_operator(Operator::DelTheta, &apply_operator(Operator::DelBarTheta, &f, &th).unwrap(), &th).unwrap();
        let bd = apply_operator(Operator::DelBarTheta, &apply_operator(Operator::DelTheta, &f, &th).unwrap(), &th).unwrap();
        assert!(db.add(&bd).unwrap().is_zero(1e-12));
      }
    }
  }

  #[test]
  fn dc_on_functions_is_i_times_d() {
    // d^c f = I df: on dz components multiply by i, on dz̄ by −i.
    let mut f = SpectralForm::zero(1);
    f.set(&[1, 2], 0, Complex64::new(0.5, -1.0));
    let th = theta(&[0.0, 0.0]);
    let df = apply_operator(Operator::D, &f, &th).unwrap();
    let dcf = apply_operator(Operator::Dc, &f, &th).unwrap();
    assert!((dcf.get(&[1, 2], 0b01) - df.get(&[1, 2], 0b01) * Complex64::i()).norm() < 1e-12);
    assert!((dcf.get(&[1, 2], 0b10) + df.get(&[1, 2], 0b10) * Complex64::i()).norm() < 1e-12);
  }

  #[test]
  fn twisted_ddc_is_minus_two_i_del_delbar() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in [1, 2] {
      let th = theta(&(0..2 * n).map(|i| 0.5 - 0.35 * i as f64).collect::<Vec<_>>());
      for _ in 0..20 {
        let f = random_form(&mut rng, n, 4, 3, |m| m == 0);
        let lhs = apply_operator(Operator::DTheta, &apply_operator(Operator::DcTheta, &f, &th).unwrap(), &th).unwrap();
        let rhs = apply_operator(Operator::DelDelBarTheta, &f, &th).unwrap().scale(Complex64::new(0.0, -2.0));
        let scale = rhs.max_abs().max(1.0);
        assert!(lhs.sub(&rhs).unwrap().max_abs() / scale <= 1e-12);
      }
    }
  }

  #[test]
  fn twisted_dc_on_functions_subtracts_i_theta() {
    // d^c_θ f = d^c f − f Iθ, with Iθ = i θ^{1,0} − i θ^{0,1}.
    let th = theta(&[0.4, -1.1]);
    let f = SpectralForm::one(1);
    let out = apply_operator(Operator::DcTheta, &f, &th).unwrap();
    let i = Complex64::i();
    assert!((out.get(&[0, 0], 0b01) + i * th.holomorphic_part(0)).norm() < 1e-15);
    assert!((out.get(&[0, 0], 0b10) - i * th.antiholomorphic_part(0)).norm() < 1e-15);
  }

  #[test]
  fn conjugation_is_an_involution() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let f = random_form(&mut rng, 2, 2, 4, |_| true);
    assert!(f.conjugate().conjugate().sub(&f).unwrap().is_zero(0.0));
    assert!(f.real_part().is_real(1e-15));
    // d commutes with conjugation (real operator).
    let th = ConstantLeeForm::zero(2);
    let lhs = apply_operator(Operator::D, &f.conjugate(), &th).unwrap();
    let rhs = apply_operator(Operator::D, &f, &th).unwrap().conjugate();
    assert!(lhs.sub(&rhs).unwrap().is_zero(1e-12));
  }

  #[test]
  fn averaging() {
    let mut f = SpectralForm::zero(1);
    f.set(&[0, 1], 0, Complex64::new(1.0, 0.0));
    assert!(circle_average(&f, 1).unwrap().is_zero(0.0));
    let mut g = SpectralForm::zero(1);
    g.set(&[0, 0], 0b11, Complex64::new(2.0, 1.0));
    assert_eq!(circle_average(&g, 0).unwrap(), g);
    assert!(circle_average(&g, 2).is_err());
  }

  #[test]
  fn bidegree_helpers() {
    assert_eq!(bidegree(2, 0b0110), (1, 1));
    assert_eq!(basis_of_bidegree(2, 1, 1), vec![0b0101, 0b0110, 0b1001, 0b1010]);
    assert_eq!(basis_of_degree(1, 1), vec![0b01, 0b10]);
    assert_eq!(wedge_generator(0, 0b10), Some((1.0, 0b11)));
    assert_eq!(wedge_generator(1, 0b01), Some((-1.0, 0b11)));
    assert_eq!(wedge_generator(1, 0b10), None);
  }
}
