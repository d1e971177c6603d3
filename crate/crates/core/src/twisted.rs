//! Transport-weighted (Morse–Novikov) coboundary on a simplicial complex.
//!
//! Each simplex is based at its minimal vertex. For a k-cochain f and a
//! (k+1)-simplex σ = (v₀ … v_{k+1}),
//!
//! ```text
//! (D f)(σ) = t(v₀v₁) · f(v₁ … v_{k+1}) + Σ_{i≥1} (−1)^i f(σ without v_i)
//! ```
//!
//! so only the face opposite the base vertex is transported. `D² = 0` is then
//! exactly the multiplicative cocycle condition `t(v₀v₂) = t(v₀v₁)·t(v₁v₂)`.

use rayon::prelude::*;
use serde::Serialize;

use crate::complex::{drop_vertex, Cochain, LeeCocycle, SimplicialComplex};
use crate::error::{Error, Result};
use crate::linalg::{RankReport, SparseMatrix};
use crate::scalar::{Backend, Scalar};

/// Relative tolerance for the multiplicative cocycle check on float weights.
const FLOAT_WEIGHT_TOL: f64 = 1e-12;

/// Twisted coboundaries `D_k : C^k → C^{k+1}` for one complex and one character.
#[derive(Clone, Debug)]
pub struct TwistedComplex<'a, S> {
  complex: &'a SimplicialComplex,
  weights: Cochain<S>,
  coboundaries: Vec<SparseMatrix<S>>,
}

/// Twisted Betti numbers with rank diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TwistedBetti {
  pub betti: Vec<usize>,
  pub euler: i64,
  pub backend: Backend,
  /// Smallest singular-value separation over all float ranks (`None` when exact).
  pub min_separation: Option<f64>,
  pub low_confidence: bool,
}

impl TwistedBetti {
  pub fn euler_sum(&self) -> i64 { self.betti.iter().enumerate().map(|(k, b)| if k % 2 == 0 { *b as i64 } else { -(*b as i64) }).sum() }

  pub fn is_zero(&self) -> bool { self.betti.iter().all(|b| *b == 0) }
}

/// Checks positivity and `t(v₀v₂) = t(v₀v₁)·t(v₁v₂)` on every triangle.
pub fn validate_weights<S: Scalar>(complex: &SimplicialComplex, weights: &Cochain<S>) -> Result<()> {
  weights.check(complex, 1)?;
  if let Some(bad) = weights.values().iter().find(|w| !w.is_positive()) {
    return Err(Error::NonPositiveWeight(format!("{bad:?}")));
  }
  let mut violations = Vec::new();
  for tri in complex.simplices(2) {
    let w = |a: usize, b: usize| weights.get(complex.index_of(&[tri[a], tri[b]]).expect("face closure")).clone();
    let through = w(0, 1) * w(1, 2);
    let direct = w(0, 2);
    let ok = match S::BACKEND {
      Backend::Rational => through == direct,
      Backend::Float => (through.to_f64().ln() - direct.to_f64().ln()).abs() <= FLOAT_WEIGHT_TOL * (1.0 + direct.to_f64().ln().abs()),
    };
    if !ok {
      violations.push(crate::complex::CocycleViolation { triangle: tri.clone(), residual: (through - direct).to_f64() });
    }
  }
  if violations.is_empty() {
    Ok(())
  } else {
    Err(Error::NotClosed(violations))
  }
}

impl<'a, S: Scalar> TwistedComplex<'a, S> {
  /// Assembles from edge weights `t(e) > 0` satisfying the multiplicative
  /// cocycle condition. In the rational backend the weights are the exact
  /// character values.
  pub fn assemble(complex: &'a SimplicialComplex, weights: Cochain<S>) -> Result<Self> {
    validate_weights(complex, &weights)?;
    let coboundaries = (0..=complex.dimension()).map(|k| twisted_coboundary(complex, &weights, k)).collect();
    Ok(Self { complex, weights, coboundaries })
  }

  /// Trivial character: `D` is the ordinary coboundary.
  pub fn untwisted(complex: &'a SimplicialComplex) -> Self {
    Self::assemble(complex, Cochain::constant(complex, 1, S::one())).expect("unit weights are a cocycle")
  }

  pub fn complex(&self) -> &'a SimplicialComplex { self.complex }

  pub fn weights(&self) -> &Cochain<S> { &self.weights }

  /// `D_k`, with rows indexed by `(k+1)`-simplices and columns by `k`-simplices.
  pub fn coboundary(&self, k: usize) -> &SparseMatrix<S> { &self.coboundaries[k] }

  pub fn coboundaries(&self) -> &[SparseMatrix<S>] { &self.coboundaries }

  /// Checks `D_{k+1} D_k = 0` for every k; exact for rationals, entrywise
  /// `≤ 1e−12` (scaled by the weight magnitude) for floats.
  pub fn squares_to_zero(&self) -> bool {
    let scale = self.weights.values().iter().map(|w| w.to_f64().abs()).fold(1.0, f64::max);
    self.coboundaries.windows(2).all(|pair| {
      let prod = pair[1].mul(&pair[0]);
      match S::BACKEND {
        Backend::Rational => prod.is_negligible(),
        Backend::Float => prod.max_abs() <= crate::scalar::FLOAT_IDENTITY_TOL * scale * scale,
      }
    })
  }

  /// Applies `D` to a cochain.
  pub fn apply(&self, cochain: &Cochain<S>) -> Result<Cochain<S>> {
    let k = cochain.degree();
    cochain.check(self.complex, k)?;
    let d = &self.coboundaries[k];
    let values = (0..d.rows())
      .map(|i| d.row(i).iter().fold(S::zero(), |acc, (j, v)| acc + v.clone() * cochain.get(*j).clone()))
      .collect();
    Cochain::new(self.complex, k + 1, values)
  }

  /// `b^k = dim ker D_k − rank D_{k−1}`.
  pub fn betti(&self) -> TwistedBetti {
    let ranks: Vec<RankReport> = self.coboundaries.par_iter().map(SparseMatrix::rank).collect();
    let dim = self.complex.dimension();
    let betti: Vec<usize> =
      (0..=dim).map(|k| self.complex.count(k) - ranks[k].rank - if k > 0 { ranks[k - 1].rank } else { 0 }).collect();
    let min_separation = ranks.iter().filter_map(|r| r.confidence).map(|c| c.separation).reduce(f64::min);
    TwistedBetti {
      betti,
      euler: self.complex.euler_characteristic(),
      backend: S::BACKEND,
      min_separation,
      low_confidence: ranks.iter().any(RankReport::is_low_confidence),
    }
  }

  /// Gauge change by positive vertex factors `u = e^f`: weights become
  /// `t(v₀v₁)·u(v₁)/u(v₀)` (i.e. `θ ↦ θ + δf`). Also returns, per degree, the
  /// diagonal `S_k = diag(1/u(base vertex))` with `D'_k S_k = S_{k+1} D_k`.
  pub fn gauge_transform(&self, factors: &Cochain<S>) -> Result<(TwistedComplex<'a, S>, Vec<Vec<S>>)> {
    factors.check(self.complex, 0)?;
    if let Some(bad) = factors.values().iter().find(|u| !u.is_positive()) {
      return Err(Error::NonPositiveWeight(format!("{bad:?}")));
    }
    let u = factors.values();
    let new_weights: Vec<S> = self
      .complex
      .simplices(1)
      .iter()
      .zip(self.weights.values())
      .map(|(e, t)| t.clone() * u[e[1]].clone() / u[e[0]].clone())
      .collect();
    let weights = Cochain::new(self.complex, 1, new_weights)?;
    let diagonals = (0..=self.complex.dimension())
      .map(|k| self.complex.simplices(k).iter().map(|s| S::one() / u[s[0]].clone()).collect())
      .collect();
    Ok((Self::assemble(self.complex, weights)?, diagonals))
  }
}

impl<'a> TwistedComplex<'a, f64> {
  /// Float backend from a Lee cocycle: `t(e) = e^{θ(e)}`.
  pub fn from_lee(complex: &'a SimplicialComplex, theta: &LeeCocycle) -> Result<Self> {
    theta.cochain().check(complex, 1)?;
    Self::assemble(complex, theta.weights())
  }

  /// Gauge change by an additive 0-cochain `f`, i.e. `θ ↦ θ + δf`.
  pub fn gauge_transform_additive(&self, f: &Cochain<f64>) -> Result<(TwistedComplex<'a, f64>, Vec<Vec<f64>>)> {
    self.gauge_transform(&f.map(|x| x.exp()))
  }
}

fn twisted_coboundary<S: Scalar>(complex: &SimplicialComplex, weights: &Cochain<S>, k: usize) -> SparseMatrix<S> {
  let rows = complex.simplices(k + 1);
  let mut triplets = Vec::with_capacity(rows.len() * (k + 2));
  for (row, s) in rows.iter().enumerate() {
    for i in 0..s.len() {
      let col = complex.index_of(&drop_vertex(s, i)).expect("face closure");
      let value = if i == 0 {
        weights.get(complex.index_of(&[s[0], s[1]]).expect("face closure")).clone()
      } else if i % 2 == 0 {
        S::one()
      } else {
        -S::one()
      };
      triplets.push((row, col, value));
    }
  }
  SparseMatrix::from_triplets(rows.len(), complex.count(k), triplets)
}

#[cfg(test)]
mod tests {
  use super::*;
  use crate::scalar::{rat, Rational};

  fn circle3() -> SimplicialComplex { SimplicialComplex::build(3, [[0, 1], [1, 2], [0, 2]]).unwrap() }

  fn tetra() -> SimplicialComplex { SimplicialComplex::build(4, [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]).unwrap() }

  fn loop_weights(k: &SimplicialComplex, t: Rational) -> Cochain<Rational> {
    // Weight t on edge 01 only; edges are ordered 01, 02, 12.
    Cochain::from_pairs(k, 1, [(&[0usize, 1][..], t)], rat(1, 1)).unwrap()
  }

  #[test]
  fn trivial_character_is_untwisted() {
    let k = circle3();
    let tc = TwistedComplex::<Rational>::untwisted(&k);
    assert_eq!(tc.coboundary(0), &k.coboundary_matrix::<Rational>(0));
    assert_eq!(tc.betti().betti, vec![1, 1]);
  }

  #[test]
  fn twisted_circle_ranks() {
    let k = circle3();
    let two = TwistedComplex::assemble(&k, loop_weights(&k, rat(2, 1))).unwrap();
    assert_eq!(two.coboundary(0).shape(), (3, 3));
    assert_eq!(two.coboundary(0).rank().rank, 3);
    assert_eq!(two.betti().betti, vec![0, 0]);
    let one = TwistedComplex::assemble(&k, loop_weights(&k, rat(1, 1))).unwrap();
    assert_eq!(one.coboundary(0).rank().rank, 2);
  }

  #[test]
  fn rejects_bad_weights() {
    let t = tetra();
    let w = Cochain::from_pairs(&t, 1, [(&[0usize, 1][..], rat(2, 1))], rat(1, 1)).unwrap();
    assert!(matches!(TwistedComplex::assemble(&t, w), Err(Error::NotClosed(_))));
    let c = circle3();
    let w = Cochain::from_pairs(&c, 1, [(&[0usize, 1][..], rat(-2, 1))], rat(1, 1)).unwrap();
    assert!(matches!(TwistedComplex::assemble(&c, w), Err(Error::NonPositiveWeight(_))));
    let w = Cochain::<Rational>::constant(&c, 1, rat(1, 1));
    assert!(matches!(TwistedComplex::assemble(&t, w), Err(Error::ComplexMismatch)));
  }

  #[test]
  fn exact_character_is_conjugate_to_untwisted() {
    let t = tetra();
    let f = Cochain::new(&t, 0, vec![0.4, -0.9, 1.3, 0.2]).unwrap();
    let lee = LeeCocycle::exact(&t, &f).unwrap();
    let tc = TwistedComplex::from_lee(&t, &lee).unwrap();
    assert!(tc.squares_to_zero());
    for k in 0..t.dimension() {
      let delta = t.coboundary_matrix::<f64>(k);
      // D_k = S_{k+1} δ_k S_k^{-1} with S = diag(e^{-f(base vertex)}).
      let s = |deg: usize| t.simplices(deg).iter().map(|s| (-f.get(s[0])).exp()).collect::<Vec<_>>();
      let s_inv = |deg: usize| t.simplices(deg).iter().map(|s| f.get(s[0]).exp()).collect::<Vec<_>>();
      let conj = delta.scale(&s(k + 1), &s_inv(k));
      let d = tc.coboundary(k).to_dense_f64();
      assert!((d - conj.to_dense_f64()).abs().max() < 1e-12);
    }
    assert_eq!(tc.betti().betti, vec![1, 0, 1]);
  }

  #[test]
  fn gauge_audit_diagonals_intertwine() {
    let k = circle3();
    let tc = TwistedComplex::assemble(&k, loop_weights(&k, rat(2, 1))).unwrap();
    let u = Cochain::new(&k, 0, vec![rat(3, 1), rat(1, 5), rat(7, 2)]).unwrap();
    let (g, diag) = tc.gauge_transform(&u).unwrap();
    let lhs = g.coboundary(0).scale(&vec![rat(1, 1); 3], &diag[0]);
    let rhs = tc.coboundary(0).scale(&diag[1], &vec![rat(1, 1); 3]);
    assert_eq!(lhs, rhs);
    assert_eq!(g.betti().betti, vec![0, 0]);
    let (same, _) = tc.gauge_transform(&Cochain::constant(&k, 0, rat(1, 1))).unwrap();
    assert_eq!(same.coboundaries(), tc.coboundaries());
  }

  #[test]
  fn float_backend_agrees_and_reports_confidence() {
    let k = circle3();
    let theta = Cochain::new(&k, 1, vec![2f64.ln(), 0.0, 0.0]).unwrap();
    let tc = TwistedComplex::from_lee(&k, &LeeCocycle::new(&k, theta).unwrap()).unwrap();
    let b = tc.betti();
    assert_eq!(b.betti, vec![0, 0]);
    assert!(!b.low_confidence);
    assert!(b.min_separation.is_some());
    let f = Cochain::new(&k, 0, vec![0.5, -2.0, 1.0]).unwrap();
    let (g, _) = tc.gauge_transform_additive(&f).unwrap();
    assert_eq!(g.betti().betti, vec![0, 0]);
  }
}
