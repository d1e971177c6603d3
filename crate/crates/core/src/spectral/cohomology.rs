//! Per-mode cohomology dimensions and the Bott–Chern exact-sequence check.
//!
//! Every operator is block diagonal in the Fourier mode, so each dimension is a
//! sum of tiny per-mode linear algebra problems. Ranks come from a complex SVD
//! with threshold `EPS_RANK · max(σ_max, 1)`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{apply_on_mode, basis_of_bidegree, basis_of_degree, ConstantLeeForm, FlatTorus, ModeSymbols, Operator};
use crate::error::{Error, Result};
use crate::linalg::{classify_singular_values, EPS_RANK};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CohomologyKind {
  /// Twisted de Rham, `d_θ`.
  DeRham,
  /// Twisted Dolbeault, `∂̄_θ`.
  Dolbeault,
  /// Conjugate Dolbeault, `∂_θ`.
  ConjugateDolbeault,
  /// `ker ∂_θ ∩ ker ∂̄_θ / im ∂_θ∂̄_θ`.
  BottChern,
}

/// Cutoff-stable dimensions. For de Rham `dims` has one row indexed by degree;
/// otherwise `dims[p][q]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralDims {
  pub kind: CohomologyKind,
  pub n: usize,
  pub cutoff: usize,
  pub checked_cutoff: usize,
  pub dims: Vec<Vec<usize>>,
  pub min_separation: f64,
  pub low_confidence_blocks: usize,
}

impl SpectralDims {
  pub fn get(&self, p: usize, q: usize) -> usize { self.dims[p][q] }

  /// Degree-`k` dimension for de Rham.
  pub fn degree(&self, k: usize) -> usize { self.dims[0][k] }
}

/// Tracks how close any rank decision came to the threshold.
#[derive(Clone, Copy, Debug)]
struct RankLog {
  min_separation: f64,
  low_confidence: usize,
}

impl RankLog {
  fn new() -> Self { Self { min_separation: f64::INFINITY, low_confidence: 0 } }

  fn merge(self, other: Self) -> Self {
    Self {
      min_separation: self.min_separation.min(other.min_separation),
      low_confidence: self.low_confidence + other.low_confidence,
    }
  }
}

type Block = DMatrix<Complex64>;

fn zero() -> Complex64 { Complex64::new(0.0, 0.0) }

/// Columns are the images of the basis masks `source` in the full exterior
/// algebra (length `4ⁿ`); several operators are stacked vertically.
fn operator_block(ops: &[Operator], symbols: &ModeSymbols, source: &[usize]) -> Block {
  let len = 1 << (2 * symbols.n());
  let mut m = Block::from_element(len * ops.len(), source.len(), zero());
  for (col, mask) in source.iter().enumerate() {
    let mut unit = vec![zero(); len];
    unit[*mask] = Complex64::new(1.0, 0.0);
    for (i, op) in ops.iter().enumerate() {
      for (row, v) in apply_on_mode(*op, symbols, &unit).into_iter().enumerate() {
        m[(i * len + row, col)] = v;
      }
    }
  }
  m
}

fn threshold(sigma: &[f64]) -> f64 { EPS_RANK * sigma.first().copied().unwrap_or(0.0).max(1.0) }

fn rank(m: &Block, log: &mut RankLog) -> usize {
  if m.ncols() == 0 || m.nrows() == 0 {
    return 0;
  }
  let sigma: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
  let report = classify_singular_values(&sigma, threshold(&sigma));
  if let Some(c) = report.confidence {
    log.min_separation = log.min_separation.min(c.separation);
    if c.low_confidence {
      log.low_confidence += 1;
    }
  }
  report.rank
}

/// Orthonormal kernel basis, one column per kernel vector.
fn kernel(m: &Block, log: &mut RankLog) -> Block {
  let cols = m.ncols();
  if cols == 0 {
    return Block::zeros(0, 0);
  }
  // Pad to at least square so the thin SVD returns a full right basis.
  let rows = m.nrows().max(cols);
  let mut padded = Block::from_element(rows, cols, zero());
  padded.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
  let svd = padded.svd(false, true);
  let sigma: Vec<f64> = svd.singular_values.iter().copied().collect();
  let report = classify_singular_values(&sigma, threshold(&sigma));
  if let Some(c) = report.confidence {
    log.min_separation = log.min_separation.min(c.separation);
    if c.low_confidence {
      log.low_confidence += 1;
    }
  }
  let v_t = svd.v_t.expect("requested");
  let null = cols - report.rank;
  Block::from_fn(cols, null, |i, j| v_t[(report.rank + j, i)].conj())
}

/// Embeds coordinates over `masks` into the full exterior algebra.
fn embed(coords: &Block, masks: &[usize], len: usize) -> Block {
  let mut out = Block::from_element(len, coords.ncols(), zero());
  for (i, mask) in masks.iter().enumerate() {
    for j in 0..coords.ncols() {
      out[(*mask, j)] = coords[(i, j)];
    }
  }
  out
}

fn hcat(parts: &[&Block]) -> Block {
  let rows = parts.iter().map(|b| b.nrows()).max().unwrap_or(0);
  let cols = parts.iter().map(|b| b.ncols()).sum();
  let mut out = Block::from_element(rows, cols, zero());
  let mut at = 0;
  for b in parts {
    if b.ncols() > 0 {
      out.view_mut((0, at), (b.nrows(), b.ncols())).copy_from(b);
    }
    at += b.ncols();
  }
  out
}

fn binomial(n: usize, k: usize) -> usize { (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1)) }

fn mode_dims(kind: CohomologyKind, symbols: &ModeSymbols, log: &mut RankLog) -> Vec<Vec<usize>> {
  let n = symbols.n();
  match kind {
    CohomologyKind::DeRham => {
      let ranks: Vec<usize> =
        (0..=2 * n).map(|k| rank(&operator_block(&[Operator::DTheta], symbols, &basis_of_degree(n, k)), log)).collect();
      let dims = (0..=2 * n).map(|k| binomial(2 * n, k) - ranks[k] - if k > 0 { ranks[k - 1] } else { 0 }).collect();
      vec![dims]
    }
    CohomologyKind::Dolbeault | CohomologyKind::ConjugateDolbeault => {
      let (op, holomorphic) = if kind == CohomologyKind::Dolbeault {
        (Operator::DelBarTheta, false)
      } else {
        (Operator::DelTheta, true)
      };
      let r = |p: usize, q: usize, log: &mut RankLog| rank(&operator_block(&[op], symbols, &basis_of_bidegree(n, p, q)), log);
      let mut table = vec![vec![0; n + 1]; n + 1];
      for p in 0..=n {
        for q in 0..=n {
          let out = r(p, q, log);
          let incoming = match (holomorphic, p, q) {
            (false, _, 0) | (true, 0, _) => 0,
            (false, p, q) => r(p, q - 1, log),
            (true, p, q) => r(p - 1, q, log),
          };
          table[p][q] = binomial(n, p) * binomial(n, q) - out - incoming;
        }
      }
      table
    }
    CohomologyKind::BottChern => {
      let mut table = vec![vec![0; n + 1]; n + 1];
      for p in 0..=n {
        for q in 0..=n {
          let source = basis_of_bidegree(n, p, q);
          let closed = source.len() - rank(&operator_block(&[Operator::DelTheta, Operator::DelBarTheta], symbols, &source), log);
          let exact = if p > 0 && q > 0 {
            rank(&operator_block(&[Operator::DelDelBarTheta], symbols, &basis_of_bidegree(n, p - 1, q - 1)), log)
          } else {
            0
          };
          table[p][q] = closed - exact;
        }
      }
      table
    }
  }
}

fn add_tables(mut a: Vec<Vec<usize>>, b: &[Vec<usize>]) -> Vec<Vec<usize>> {
  for (ra, rb) in a.iter_mut().zip(b) {
    for (x, y) in ra.iter_mut().zip(rb) {
      *x += y;
    }
  }
  a
}

fn dims_at(torus: &FlatTorus, theta: &ConstantLeeForm, kind: CohomologyKind) -> (Vec<Vec<usize>>, RankLog) {
  let n = torus.n();
  let empty = if kind == CohomologyKind::DeRham { vec![vec![0; 2 * n + 1]] } else { vec![vec![0; n + 1]; n + 1] };
  torus
    .modes()
    .par_iter()
    .map(|k| {
      let mut log = RankLog::new();
      let d = mode_dims(kind, &ModeSymbols::new(k, theta), &mut log);
      (d, log)
    })
    .reduce(|| (empty.clone(), RankLog::new()), |(a, la), (b, lb)| (add_tables(a, &b), la.merge(lb)))
}

fn check_theta(torus: &FlatTorus, theta: &ConstantLeeForm) -> Result<()> {
  if theta.n() != torus.n() {
    return Err(Error::DimensionMismatch);
  }
  Ok(())
}

/// All dimensions of one cohomology theory, verified stable from `N` to `N + 2`.
pub fn harmonic_dims(torus: &FlatTorus, theta: &ConstantLeeForm, kind: CohomologyKind) -> Result<SpectralDims> {
  check_theta(torus, theta)?;
  let (low, log_low) = dims_at(torus, theta, kind);
  let wider = torus.with_cutoff(torus.cutoff() + 2)?;
  let (high, log_high) = dims_at(&wider, theta, kind);
  if low != high {
    return Err(Error::CutoffUnstable {
      low: torus.cutoff(),
      high: wider.cutoff(),
      detail: format!("{kind:?}: {low:?} vs {high:?}"),
    });
  }
  let log = log_low.merge(log_high);
  Ok(SpectralDims {
    kind,
    n: torus.n(),
    cutoff: torus.cutoff(),
    checked_cutoff: wider.cutoff(),
    dims: low,
    min_separation: log.min_separation,
    low_confidence_blocks: log.low_confidence,
  })
}

pub fn de_rham_dims(torus: &FlatTorus, theta: &ConstantLeeForm) -> Result<SpectralDims> {
  harmonic_dims(torus, theta, CohomologyKind::DeRham)
}

pub fn dolbeault_dims(torus: &FlatTorus, theta: &ConstantLeeForm) -> Result<SpectralDims> {
  harmonic_dims(torus, theta, CohomologyKind::Dolbeault)
}

pub fn conjugate_dolbeault_dims(torus: &FlatTorus, theta: &ConstantLeeForm) -> Result<SpectralDims> {
  harmonic_dims(torus, theta, CohomologyKind::ConjugateDolbeault)
}

pub fn bott_chern_dims(torus: &FlatTorus, theta: &ConstantLeeForm) -> Result<SpectralDims> {
  harmonic_dims(torus, theta, CohomologyKind::BottChern)
}

/// A single dimension: de Rham degree `p` (with `q = 0`) or bidegree `(p, q)`.
pub fn harmonic_dim(torus: &FlatTorus, theta: &ConstantLeeForm, kind: CohomologyKind, p: usize, q: usize) -> Result<usize> {
  let n = torus.n();
  let ok = match kind {
    CohomologyKind::DeRham => p <= 2 * n && q == 0,
    _ => p <= n && q <= n,
  };
  if !ok {
    return Err(Error::InvalidArgument(format!("degree ({p}, {q}) out of range for {kind:?} on n = {n}")));
  }
  let dims = harmonic_dims(torus, theta, kind)?;
  Ok(if kind == CohomologyKind::DeRham { dims.degree(p) } else { dims.get(p, q) })
}

/// Dimensions and ranks around `H¹(𝓛) ⊕ H̄¹(𝓛) → H^{1,1}_BC → H²_θ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BcSequenceReport {
  pub n: usize,
  pub theta: Vec<f64>,
  pub cutoff: usize,
  pub checked_cutoff: usize,
  /// `dim H^{0,1}_{∂̄_θ}`.
  pub h1_holomorphic: usize,
  /// `dim H^{1,0}_{∂_θ}`.
  pub h1_conjugate: usize,
  pub h11_bott_chern: usize,
  pub h2_twisted: usize,
  /// Rank of `∂_θ + ∂̄_θ` into Bott–Chern classes.
  pub rank_first_map: usize,
  pub rank_nu: usize,
  pub dim_ker_nu: usize,
  pub exact: bool,
  pub min_separation: f64,
  pub low_confidence_blocks: usize,
  pub pass: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
struct SequenceCounts {
  h01: usize,
  h10: usize,
  bc: usize,
  h2: usize,
  first: usize,
  ker_nu: usize,
}

impl std::ops::Add for SequenceCounts {
  type Output = Self;

  fn add(self, o: Self) -> Self {
    Self {
      h01: self.h01 + o.h01,
      h10: self.h10 + o.h10,
      bc: self.bc + o.bc,
      h2: self.h2 + o.h2,
      first: self.first + o.first,
      ker_nu: self.ker_nu + o.ker_nu,
    }
  }
}

fn mode_sequence(symbols: &ModeSymbols, log: &mut RankLog) -> SequenceCounts {
  let n = symbols.n();
  let len = 1 << (2 * n);
  let l00 = basis_of_bidegree(n, 0, 0);
  let l10 = basis_of_bidegree(n, 1, 0);
  let l01 = basis_of_bidegree(n, 0, 1);
  let l11 = basis_of_bidegree(n, 1, 1);
  let one_forms = basis_of_degree(n, 1);
  let two_forms = basis_of_degree(n, 2);

  let delbar01 = operator_block(&[Operator::DelBarTheta], symbols, &l01);
  let del10 = operator_block(&[Operator::DelTheta], symbols, &l10);
  let k01 = kernel(&delbar01, log);
  let k10 = kernel(&del10, log);
  let h01 = k01.ncols() - rank(&operator_block(&[Operator::DelBarTheta], symbols, &l00), log);
  let h10 = k10.ncols() - rank(&operator_block(&[Operator::DelTheta], symbols, &l00), log);

  let b = operator_block(&[Operator::DelDelBarTheta], symbols, &l00);
  let rank_b = rank(&b, log);
  let z_coords = kernel(&operator_block(&[Operator::DelTheta, Operator::DelBarTheta], symbols, &l11), log);
  let z = embed(&z_coords, &l11, len);
  let bc = z.ncols() - rank_b;

  // Apply ∂_θ to ∂̄_θ-closed (0,1)-forms and ∂̄_θ to ∂_θ-closed (1,0)-forms.
  let u1 = operator_block(&[Operator::DelTheta], symbols, &l01) * &k01;
  let u2 = operator_block(&[Operator::DelBarTheta], symbols, &l10) * &k10;
  let first = rank(&hcat(&[&u1, &u2, &b]), log) - rank_b;

  let e = operator_block(&[Operator::DTheta], symbols, &one_forms);
  let rank_e = rank(&e, log);
  let rank_ze = rank(&hcat(&[&z, &e]), log);
  let ker_nu = z.ncols() + rank_e - rank_ze - rank_b;

  let d3 = operator_block(&[Operator::DTheta], symbols, &two_forms);
  let h2 = two_forms.len() - rank(&d3, log) - rank_e;
  SequenceCounts { h01, h10, bc, h2, first, ker_nu }
}

fn sequence_at(torus: &FlatTorus, theta: &ConstantLeeForm) -> (SequenceCounts, RankLog) {
  torus
    .modes()
    .par_iter()
    .map(|k| {
      let mut log = RankLog::new();
      (mode_sequence(&ModeSymbols::new(k, theta), &mut log), log)
    })
    .reduce(|| (SequenceCounts::default(), RankLog::new()), |(a, la), (b, lb)| (a + b, la.merge(lb)))
}

/// Checks `ker ν = im(∂_θ + ∂̄_θ)` by comparing ranks mode by mode.
pub fn bc_exact_sequence_report(torus: &FlatTorus, theta: &ConstantLeeForm) -> Result<BcSequenceReport> {
  check_theta(torus, theta)?;
  let (low, log_low) = sequence_at(torus, theta);
  let wider = torus.with_cutoff(torus.cutoff() + 2)?;
  let (high, log_high) = sequence_at(&wider, theta);
  if low != high {
    return Err(Error::CutoffUnstable {
      low: torus.cutoff(),
      high: wider.cutoff(),
      detail: format!("{low:?} vs {high:?}"),
    });
  }
  let log = log_low.merge(log_high);
  let exact = low.first == low.ker_nu;
  Ok(BcSequenceReport {
    n: torus.n(),
    theta: theta.coefficients().to_vec(),
    cutoff: torus.cutoff(),
    checked_cutoff: wider.cutoff(),
    h1_holomorphic: low.h01,
    h1_conjugate: low.h10,
    h11_bott_chern: low.bc,
    h2_twisted: low.h2,
    rank_first_map: low.first,
    rank_nu: low.bc - low.ker_nu,
    dim_ker_nu: low.ker_nu,
    exact,
    min_separation: log.min_separation,
    low_confidence_blocks: log.low_confidence,
    pass: exact && log.low_confidence == 0,
  })
}

#[cfg(test)]
mod tests {
  use super::*;

  fn torus(n: usize, cutoff: usize) -> FlatTorus { FlatTorus::new(n, cutoff).unwrap() }

  #[test]
  fn elliptic_curve_dims() {
    let t = torus(1, 2);
    let th = ConstantLeeForm::zero(1);
    assert_eq!(de_rham_dims(&t, &th).unwrap().dims, vec![vec![1, 2, 1]]);
    assert_eq!(dolbeault_dims(&t, &th).unwrap().dims, vec![vec![1, 1], vec![1, 1]]);
    assert_eq!(bott_chern_dims(&t, &th).unwrap().get(1, 1), 1);
    assert_eq!(harmonic_dim(&t, &th, CohomologyKind::ConjugateDolbeault, 1, 0).unwrap(), 1);
    assert!(harmonic_dim(&t, &th, CohomologyKind::DeRham, 3, 0).is_err());
  }

  #[test]
  fn nonzero_constant_lee_form_kills_everything() {
    let t = torus(1, 2);
    let th = ConstantLeeForm::new(vec![1.0, 0.0]).unwrap();
    assert_eq!(de_rham_dims(&t, &th).unwrap().dims, vec![vec![0, 0, 0]]);
    assert_eq!(bott_chern_dims(&t, &th).unwrap().dims, vec![vec![0, 0], vec![0, 0]]);
  }

  #[test]
  fn dolbeault_sees_lattice_shifted_lee_forms() {
    // θ = −2π dx makes the ∂̄_θ symbol vanish on mode (0, 1).
    let t = torus(1, 2);
    let th = ConstantLeeForm::new(vec![-2.0 * std::f64::consts::PI, 0.0]).unwrap();
    let dims = dolbeault_dims(&t, &th).unwrap();
    assert_eq!(dims.get(0, 0), 1);
    assert_eq!(de_rham_dims(&t, &th).unwrap().dims, vec![vec![0, 0, 0]]);
  }

  #[test]
  fn sequence_on_small_tori() {
    let r = bc_exact_sequence_report(&torus(1, 2), &ConstantLeeForm::zero(1)).unwrap();
    assert_eq!((r.h1_holomorphic, r.h1_conjugate, r.h11_bott_chern, r.h2_twisted), (1, 1, 1, 1));
    assert_eq!((r.rank_first_map, r.dim_ker_nu, r.rank_nu), (0, 0, 1));
    assert!(r.pass);
    let r = bc_exact_sequence_report(&torus(2, 2), &ConstantLeeForm::zero(2)).unwrap();
    assert_eq!((r.h1_holomorphic, r.h11_bott_chern, r.h2_twisted), (2, 4, 6));
    assert_eq!(r.dim_ker_nu, 0);
    assert!(r.pass);
  }

  #[test]
  fn kernel_is_orthonormal_null_space() {
    let mut log = RankLog::new();
    let m = Block::from_row_slice(1, 3, &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), zero()]);
    let k = kernel(&m, &mut log);
    assert_eq!(k.ncols(), 2);
    assert!((&m * &k).norm() < 1e-14);
    assert!((k.adjoint() * &k - Block::identity(2, 2)).norm() < 1e-14);
  }
}
