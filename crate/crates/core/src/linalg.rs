//! Sparse matrices and rank computations for both scalar backends.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::scalar::{Rational, Scalar};

/// Relative singular-value threshold for float ranks.
pub const EPS_RANK: f64 = 1e-8;

/// Singular values straddling the rank threshold must differ by at least this
/// factor for a float rank to count as confident.
pub const MIN_SEPARATION: f64 = 1e3;

/// Row-major sparse matrix; each row keeps its entries sorted by column.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix<S> {
  rows: usize,
  cols: usize,
  data: Vec<Vec<(usize, S)>>,
}

impl<S: Scalar> SparseMatrix<S> {
  pub fn zeros(rows: usize, cols: usize) -> Self { Self { rows, cols, data: vec![Vec::new(); rows] } }

  /// Builds from triplets; duplicates are summed and zeros dropped.
  pub fn from_triplets(rows: usize, cols: usize, triplets: impl IntoIterator<Item = (usize, usize, S)>) -> Self {
    let mut acc: Vec<BTreeMap<usize, S>> = vec![BTreeMap::new(); rows];
    for (i, j, v) in triplets {
      assert!(i < rows && j < cols, "triplet ({i},{j}) outside {rows}x{cols}");
      let slot = acc[i].entry(j).or_insert_with(S::zero);
      *slot = slot.clone() + v;
    }
    let data = acc.into_iter().map(|row| row.into_iter().filter(|(_, v)| !v.is_zero()).collect()).collect();
    Self { rows, cols, data }
  }

  pub fn rows(&self) -> usize { self.rows }

  pub fn cols(&self) -> usize { self.cols }

  pub fn shape(&self) -> (usize, usize) { (self.rows, self.cols) }

  pub fn row(&self, i: usize) -> &[(usize, S)] { &self.data[i] }

  pub fn nnz(&self) -> usize { self.data.iter().map(Vec::len).sum() }

  pub fn get(&self, i: usize, j: usize) -> S {
    match self.data[i].binary_search_by_key(&j, |(c, _)| *c) {
      Ok(pos) => self.data[i][pos].1.clone(),
      Err(_) => S::zero(),
    }
  }

  pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &S)> + '_ {
    self.data.iter().enumerate().flat_map(|(i, row)| row.iter().map(move |(j, v)| (i, *j, v)))
  }

  /// `self * other`.
  pub fn mul(&self, other: &SparseMatrix<S>) -> SparseMatrix<S> {
    assert_eq!(self.cols, other.rows, "shape mismatch in sparse product");
    let mut out = Vec::with_capacity(self.rows);
    for row in &self.data {
      let mut acc: BTreeMap<usize, S> = BTreeMap::new();
      for (k, a) in row {
        for (j, b) in &other.data[*k] {
          let slot = acc.entry(*j).or_insert_with(S::zero);
          *slot = slot.clone() + a.clone() * b.clone();
        }
      }
      out.push(acc.into_iter().filter(|(_, v)| !v.is_zero()).collect());
    }
    SparseMatrix { rows: self.rows, cols: other.cols, data: out }
  }

  /// Multiplies row `i` by `left[i]` and column `j` by `right[j]`.
  pub fn scale(&self, left: &[S], right: &[S]) -> SparseMatrix<S> {
    assert_eq!(left.len(), self.rows);
    assert_eq!(right.len(), self.cols);
    let data = self
      .data
      .iter()
      .zip(left)
      .map(|(row, l)| row.iter().map(|(j, v)| (*j, l.clone() * v.clone() * right[*j].clone())).collect())
      .collect();
    SparseMatrix { rows: self.rows, cols: self.cols, data }
  }

  /// True when every entry is negligible in the backend's sense.
  pub fn is_negligible(&self) -> bool { self.data.iter().flatten().all(|(_, v)| v.negligible()) }

  pub fn max_abs(&self) -> f64 { self.data.iter().flatten().map(|(_, v)| v.to_f64().abs()).fold(0.0, f64::max) }

  pub fn to_dense_f64(&self) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(self.rows, self.cols);
    for (i, row) in self.data.iter().enumerate() {
      for (j, v) in row {
        m[(i, *j)] = v.to_f64();
      }
    }
    m
  }

  pub fn rank(&self) -> RankReport { S::rank(self) }
}

/// Singular-value diagnostics attached to a float rank.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RankConfidence {
  /// Ratio of the smallest kept singular value to the largest dropped one
  /// (infinite when nothing is dropped or the dropped values are exactly zero).
  pub separation: f64,
  pub low_confidence: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RankReport {
  pub rank: usize,
  /// `None` for exact ranks.
  pub confidence: Option<RankConfidence>,
}

impl RankReport {
  pub fn exact(rank: usize) -> Self { Self { rank, confidence: None } }

  pub fn is_low_confidence(&self) -> bool { self.confidence.is_some_and(|c| c.low_confidence) }
}

/// Rank over ℚ by fraction-free elimination on integer rows.
pub fn rational_rank(matrix: &SparseMatrix<Rational>) -> RankReport {
  let rows = matrix.data.iter().filter(|r| !r.is_empty()).map(|row| {
    let lcm = row.iter().fold(BigInt::one(), |acc, (_, q)| acc.lcm(q.denom()));
    row.iter().map(|(j, q)| (*j, q.numer() * (&lcm / q.denom()))).collect::<Vec<_>>()
  });
  RankReport::exact(integer_row_rank(rows))
}

/// Incremental echelon reduction keyed on leading column. Each new row is
/// reduced against the stored pivot rows with integer cross-multiplication,
/// then divided by its content so coefficients stay small.
fn integer_row_rank(rows: impl Iterator<Item = Vec<(usize, BigInt)>>) -> usize {
  let mut pivots: BTreeMap<usize, Vec<(usize, BigInt)>> = BTreeMap::new();
  for mut row in rows {
    while let Some(&(lead, _)) = row.first() {
      let Some(pivot) = pivots.get(&lead) else {
        normalize_content(&mut row);
        pivots.insert(lead, row);
        break;
      };
      row = eliminate(&row, pivot);
    }
  }
  pivots.len()
}

/// Returns `(a/g)·row − (b/g)·pivot` where `a`, `b` are the pivot's and row's
/// leading entries; the leading column cancels.
fn eliminate(row: &[(usize, BigInt)], pivot: &[(usize, BigInt)]) -> Vec<(usize, BigInt)> {
  let a = &pivot[0].1;
  let b = &row[0].1;
  let g = a.gcd(b);
  let (ra, rb) = (a / &g, b / &g);
  let mut out = Vec::with_capacity(row.len() + pivot.len());
  let (mut i, mut j) = (1, 1);
  while i < row.len() || j < pivot.len() {
    let ci = row.get(i).map_or(usize::MAX, |e| e.0);
    let cj = pivot.get(j).map_or(usize::MAX, |e| e.0);
    let (col, val) = if ci < cj {
      i += 1;
      (ci, &ra * &row[i - 1].1)
    } else if cj < ci {
      j += 1;
      (cj, -(&rb * &pivot[j - 1].1))
    } else {
      i += 1;
      j += 1;
      (ci, &ra * &row[i - 1].1 - &rb * &pivot[j - 1].1)
    };
    if !val.is_zero() {
      out.push((col, val));
    }
  }
  normalize_content(&mut out);
  out
}

fn normalize_content(row: &mut [(usize, BigInt)]) {
  let g = row.iter().fold(BigInt::zero(), |acc, (_, v)| acc.gcd(v));
  if !g.is_zero() && !g.is_one() {
    for (_, v) in row.iter_mut() {
      *v = &*v / &g;
    }
  }
  if row.first().is_some_and(|(_, v)| v.is_negative()) {
    for (_, v) in row.iter_mut() {
      *v = -&*v;
    }
  }
}

/// Integer basis of the right kernel over ℚ: reduced row echelon form, one
/// vector per free column, denominators cleared.
pub fn integer_kernel_basis(matrix: &SparseMatrix<Rational>) -> Vec<Vec<BigInt>> {
  let cols = matrix.cols;
  let mut dense: Vec<Vec<Rational>> = (0..matrix.rows).map(|i| (0..cols).map(|j| matrix.get(i, j)).collect()).collect();
  let mut pivot_cols = Vec::new();
  let mut r = 0;
  for c in 0..cols {
    let Some(p) = (r..dense.len()).find(|&i| !dense[i][c].is_zero()) else { continue };
    dense.swap(r, p);
    let lead = dense[r][c].clone();
    for v in dense[r].iter_mut() {
      *v = &*v / &lead;
    }
    for i in 0..dense.len() {
      if i != r && !dense[i][c].is_zero() {
        let f = dense[i][c].clone();
        let pivot_row = dense[r].clone();
        for (v, pv) in dense[i].iter_mut().zip(&pivot_row) {
          *v = &*v - &f * pv;
        }
      }
    }
    pivot_cols.push(c);
    r += 1;
  }
  (0..cols)
    .filter(|c| !pivot_cols.contains(c))
    .map(|free| {
      let mut v = vec![Rational::zero(); cols];
      v[free] = Rational::one();
      for (row, &pc) in pivot_cols.iter().enumerate() {
        v[pc] = -dense[row][free].clone();
      }
      let lcm = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
      v.iter().map(|q| q.numer() * (&lcm / q.denom())).collect()
    })
    .collect()
}

/// Float rank: number of singular values above `eps · σ_max`.
pub fn float_rank(matrix: &SparseMatrix<f64>, eps: f64) -> RankReport {
  if matrix.rows == 0 || matrix.cols == 0 {
    return RankReport { rank: 0, confidence: Some(RankConfidence { separation: f64::INFINITY, low_confidence: false }) };
  }
  let sv = matrix.to_dense_f64().singular_values();
  let mut values: Vec<f64> = sv.iter().copied().collect();
  values.sort_by(|a, b| b.total_cmp(a));
  classify_singular_values(&values, eps * values[0])
}

/// Rank and separation diagnostics for descending singular values against an
/// absolute threshold.
pub fn classify_singular_values(descending: &[f64], threshold: f64) -> RankReport {
  let rank = descending.iter().take_while(|s| **s > threshold).count();
  let separation = match (rank.checked_sub(1).map(|i| descending[i]), descending.get(rank)) {
    (Some(kept), Some(&dropped)) if dropped > 0.0 => kept / dropped,
    (None, Some(&dropped)) if dropped > 0.0 => {
      // Nothing kept: compare the largest value against the threshold itself.
      if threshold > 0.0 {
        threshold / dropped
      } else {
        f64::INFINITY
      }
    }
    _ => f64::INFINITY,
  };
  RankReport { rank, confidence: Some(RankConfidence { separation, low_confidence: separation < MIN_SEPARATION }) }
}
