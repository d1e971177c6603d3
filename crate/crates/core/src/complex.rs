//! Finite simplicial complexes, cochains, and Lee cocycles.
//!
//! Simplices are strictly increasing vertex tuples; the ascending order is the
//! orientation, and each dimension is stored in lexicographic order so every
//! matrix built from a complex is reproducible bit for bit.

use std::collections::{BTreeSet, HashMap};
use std::hash::{DefaultHasher, Hash, Hasher};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::SparseMatrix;
use crate::scalar::Scalar;

pub type Simplex = Vec<usize>;

/// Immutable simplicial complex with lexicographically ordered simplices.
#[derive(Clone, Debug)]
pub struct SimplicialComplex {
  vertex_count: usize,
  simplices: Vec<Vec<Simplex>>,
  index: Vec<HashMap<Simplex, usize>>,
  fingerprint: u64,
}

impl PartialEq for SimplicialComplex {
  fn eq(&self, other: &Self) -> bool { self.vertex_count == other.vertex_count && self.simplices == other.simplices }
}

impl Eq for SimplicialComplex {}

impl SimplicialComplex {
  /// Generates the face closure of `top_simplices` on `vertex_count` vertices.
  ///
  /// Every vertex becomes a 0-simplex even when no listed simplex uses it.
  /// Tuples may come in any order; they are sorted into canonical orientation.
  pub fn build<I, S>(vertex_count: usize, top_simplices: I) -> Result<Self>
  where
    I: IntoIterator<Item = S>,
    S: AsRef<[usize]>,
  {
    if vertex_count == 0 {
      return Err(Error::EmptyComplex);
    }
    let mut by_dim: Vec<BTreeSet<Simplex>> = vec![(0..vertex_count).map(|v| vec![v]).collect()];
    for raw in top_simplices {
      let raw = raw.as_ref();
      if raw.is_empty() {
        continue;
      }
      let mut s = raw.to_vec();
      if let Some(&v) = s.iter().find(|&&v| v >= vertex_count) {
        return Err(Error::VertexOutOfRange { vertex: v, vertex_count });
      }
      s.sort_unstable();
      if s.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::DuplicateVertex(raw.to_vec()));
      }
      insert_with_faces(&mut by_dim, s);
    }
    let simplices: Vec<Vec<Simplex>> = by_dim.into_iter().map(|set| set.into_iter().collect()).collect();
    Ok(Self::from_sorted(vertex_count, simplices))
  }

  fn from_sorted(vertex_count: usize, simplices: Vec<Vec<Simplex>>) -> Self {
    let index = simplices.iter().map(|list| list.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect()).collect();
    let mut hasher = DefaultHasher::new();
    vertex_count.hash(&mut hasher);
    simplices.hash(&mut hasher);
    Self { vertex_count, simplices, index, fingerprint: hasher.finish() }
  }

  pub fn vertex_count(&self) -> usize { self.vertex_count }

  pub fn dimension(&self) -> usize { self.simplices.len() - 1 }

  /// The `k`-simplices in lexicographic order (empty above the dimension).
  pub fn simplices(&self, k: usize) -> &[Simplex] { self.simplices.get(k).map_or(&[], Vec::as_slice) }

  pub fn count(&self, k: usize) -> usize { self.simplices(k).len() }

  pub fn f_vector(&self) -> Vec<usize> { self.simplices.iter().map(Vec::len).collect() }

  pub fn euler_characteristic(&self) -> i64 {
    self.simplices.iter().enumerate().map(|(k, s)| if k % 2 == 0 { s.len() as i64 } else { -(s.len() as i64) }).sum()
  }

  pub fn index_of(&self, simplex: &[usize]) -> Option<usize> { self.index.get(simplex.len().checked_sub(1)?)?.get(simplex).copied() }

  pub fn contains(&self, simplex: &[usize]) -> bool { self.index_of(simplex).is_some() }

  /// Index of the edge `{a, b}` together with the sign of traversing it from `a` to `b`.
  pub fn oriented_edge(&self, a: usize, b: usize) -> Option<(usize, bool)> {
    if a < b {
      self.index_of(&[a, b]).map(|i| (i, true))
    } else {
      self.index_of(&[b, a]).map(|i| (i, false))
    }
  }

  /// Maximal simplices (not a proper face of any other), in dimension order.
  pub fn maximal_simplices(&self) -> Vec<Simplex> {
    let faces: BTreeSet<Simplex> =
      self.simplices.iter().skip(1).flatten().flat_map(|s| (0..s.len()).map(move |i| drop_vertex(s, i))).collect();
    self.simplices.iter().flatten().filter(|s| !faces.contains(*s)).cloned().collect()
  }

  pub(crate) fn fingerprint(&self) -> u64 { self.fingerprint }

  /// Untwisted simplicial boundary `∂_k` (rows: `(k−1)`-simplices, columns: `k`-simplices).
  pub fn boundary_matrix<S: Scalar>(&self, k: usize) -> Result<SparseMatrix<S>> {
    if k == 0 || k > self.dimension() {
      return Err(Error::DegreeOutOfRange { degree: k, max: self.dimension() });
    }
    let triplets = self.simplices(k).iter().enumerate().flat_map(|(col, s)| {
      (0..s.len()).map(move |i| {
        let face = drop_vertex(s, i);
        let sign = if i % 2 == 0 { S::one() } else { -S::one() };
        (face, col, sign)
      })
    });
    let triplets: Vec<_> = triplets.map(|(face, col, sign)| (self.index_of(&face).expect("face closure"), col, sign)).collect();
    Ok(SparseMatrix::from_triplets(self.count(k - 1), self.count(k), triplets))
  }

  /// Untwisted coboundary `δ_k : C^k → C^{k+1}`, the transpose of `∂_{k+1}`.
  /// Returns a `0 × n_k` matrix at the top dimension.
  pub fn coboundary_matrix<S: Scalar>(&self, k: usize) -> SparseMatrix<S> {
    let triplets = self.simplices(k + 1).iter().enumerate().flat_map(|(row, s)| {
      (0..s.len()).map(move |i| (row, drop_vertex(s, i), if i % 2 == 0 { S::one() } else { -S::one() }))
    });
    let triplets: Vec<_> = triplets.map(|(row, face, sign)| (row, self.index_of(&face).expect("face closure"), sign)).collect();
    SparseMatrix::from_triplets(self.count(k + 1), self.count(k), triplets)
  }

  /// Untwisted Betti numbers over ℚ.
  pub fn betti_numbers(&self) -> Vec<usize> {
    let ranks: Vec<usize> =
      (0..=self.dimension()).map(|k| self.coboundary_matrix::<crate::scalar::Rational>(k).rank().rank).collect();
    (0..=self.dimension()).map(|k| self.count(k) - ranks[k] - if k > 0 { ranks[k - 1] } else { 0 }).collect()
  }
}

fn insert_with_faces(by_dim: &mut Vec<BTreeSet<Simplex>>, s: Simplex) {
  let k = s.len() - 1;
  while by_dim.len() <= k {
    by_dim.push(BTreeSet::new());
  }
  if k == 0 || by_dim[k].contains(&s) {
    return;
  }
  for i in 0..s.len() {
    insert_with_faces(by_dim, drop_vertex(&s, i));
  }
  by_dim[k].insert(s);
}

pub(crate) fn drop_vertex(s: &[usize], i: usize) -> Simplex {
  s.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| *v).collect()
}

/// Scalar values on the `k`-simplices of one complex.
#[derive(Clone, Debug, PartialEq)]
pub struct Cochain<S> {
  degree: usize,
  values: Vec<S>,
  complex: u64,
}

impl<S: Scalar> Cochain<S> {
  pub fn new(complex: &SimplicialComplex, degree: usize, values: Vec<S>) -> Result<Self> {
    let expected = complex.count(degree);
    if values.len() != expected {
      return Err(Error::WrongLength { expected, found: values.len() });
    }
    Ok(Self { degree, values, complex: complex.fingerprint() })
  }

  pub fn zero(complex: &SimplicialComplex, degree: usize) -> Self {
    Self { degree, values: vec![S::zero(); complex.count(degree)], complex: complex.fingerprint() }
  }

  pub fn constant(complex: &SimplicialComplex, degree: usize, value: S) -> Self {
    Self { degree, values: vec![value; complex.count(degree)], complex: complex.fingerprint() }
  }

  /// Builds from `(simplex, value)` pairs; simplices not listed get `default`.
  pub fn from_pairs<'a>(
    complex: &SimplicialComplex,
    degree: usize,
    pairs: impl IntoIterator<Item = (&'a [usize], S)>,
    default: S,
  ) -> Result<Self> {
    let mut values = vec![default; complex.count(degree)];
    for (simplex, value) in pairs {
      let mut sorted = simplex.to_vec();
      sorted.sort_unstable();
      if sorted.len() != degree + 1 {
        return Err(Error::WrongDegree { expected: degree, found: sorted.len().saturating_sub(1) });
      }
      let i = complex.index_of(&sorted).ok_or_else(|| Error::MissingSimplex(sorted.clone()))?;
      values[i] = value;
    }
    Ok(Self { degree, values, complex: complex.fingerprint() })
  }

  pub fn degree(&self) -> usize { self.degree }

  pub fn values(&self) -> &[S] { &self.values }

  pub fn into_values(self) -> Vec<S> { self.values }

  pub fn get(&self, i: usize) -> &S { &self.values[i] }

  pub fn belongs_to(&self, complex: &SimplicialComplex) -> bool { self.complex == complex.fingerprint() }

  pub(crate) fn check(&self, complex: &SimplicialComplex, degree: usize) -> Result<()> {
    if !self.belongs_to(complex) {
      return Err(Error::ComplexMismatch);
    }
    if self.degree != degree {
      return Err(Error::WrongDegree { expected: degree, found: self.degree });
    }
    Ok(())
  }

  /// Untwisted coboundary `δ` of this cochain.
  pub fn coboundary(&self, complex: &SimplicialComplex) -> Result<Cochain<S>> {
    self.check(complex, self.degree)?;
    let d = complex.coboundary_matrix::<S>(self.degree);
    let values = (0..d.rows())
      .map(|i| d.row(i).iter().fold(S::zero(), |acc, (j, v)| acc + v.clone() * self.values[*j].clone()))
      .collect();
    Ok(Cochain { degree: self.degree + 1, values, complex: self.complex })
  }

  pub fn add(&self, other: &Cochain<S>) -> Result<Cochain<S>> {
    if self.complex != other.complex {
      return Err(Error::ComplexMismatch);
    }
    if self.degree != other.degree {
      return Err(Error::WrongDegree { expected: self.degree, found: other.degree });
    }
    let values = self.values.iter().zip(&other.values).map(|(a, b)| a.clone() + b.clone()).collect();
    Ok(Cochain { degree: self.degree, values, complex: self.complex })
  }

  pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Cochain<T> {
    Cochain { degree: self.degree, values: self.values.iter().map(f).collect(), complex: self.complex }
  }
}

/// A 2-simplex where the closedness identity fails.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CocycleViolation {
  pub triangle: Simplex,
  pub residual: f64,
}

/// Real 1-cocycle θ; its exponential `e^θ` gives the positive edge weights of
/// the rank-one local system.
#[derive(Clone, Debug, PartialEq)]
pub struct LeeCocycle {
  theta: Cochain<f64>,
}

/// Closedness tolerance for float cocycles, relative to the largest |θ|.
pub const COCYCLE_TOL: f64 = 1e-12;

impl LeeCocycle {
  /// Validates closedness and finiteness.
  pub fn new(complex: &SimplicialComplex, theta: Cochain<f64>) -> Result<Self> {
    theta.check(complex, 1)?;
    if let Some(bad) = theta.values().iter().find(|t| !t.is_finite()) {
      return Err(Error::NonPositiveWeight(format!("exp({bad})")));
    }
    let violations = validate_cocycle(complex, &theta)?;
    if !violations.is_empty() {
      return Err(Error::NotClosed(violations));
    }
    Ok(Self { theta })
  }

  /// `θ = δf`, always closed.
  pub fn exact(complex: &SimplicialComplex, f: &Cochain<f64>) -> Result<Self> {
    f.check(complex, 0)?;
    Self::new(complex, f.coboundary(complex)?)
  }

  pub fn zero(complex: &SimplicialComplex) -> Self { Self { theta: Cochain::zero(complex, 1) } }

  pub fn cochain(&self) -> &Cochain<f64> { &self.theta }

  /// Transport weights `t(e) = e^{θ(e)}`.
  pub fn weights(&self) -> Cochain<f64> { self.theta.map(|t| t.exp()) }

  pub fn holonomy(&self, complex: &SimplicialComplex, edge_loop: &[usize]) -> Result<f64> {
    holonomy(complex, &self.theta, edge_loop)
  }
}

/// Lists the triangles where `θ(v₁v₂) − θ(v₀v₂) + θ(v₀v₁) ≠ 0`.
///
/// Float cochains use the tolerance [`COCYCLE_TOL`] scaled by the largest |θ|;
/// rational cochains are checked exactly.
pub fn validate_cocycle<S: Scalar>(complex: &SimplicialComplex, theta: &Cochain<S>) -> Result<Vec<CocycleViolation>> {
  theta.check(complex, 1)?;
  let scale = theta.values().iter().map(|t| t.to_f64().abs()).fold(1.0, f64::max);
  let mut out = Vec::new();
  for tri in complex.simplices(2) {
    let e = |a: usize, b: usize| theta.get(complex.index_of(&[tri[a], tri[b]]).expect("face closure")).clone();
    let residual = e(1, 2) - e(0, 2) + e(0, 1);
    let bad = match S::BACKEND {
      crate::scalar::Backend::Rational => !residual.is_zero(),
      crate::scalar::Backend::Float => residual.to_f64().abs() > COCYCLE_TOL * scale,
    };
    if bad {
      out.push(CocycleViolation { triangle: tri.clone(), residual: residual.to_f64() });
    }
  }
  Ok(out)
}

/// `exp` of the signed sum of θ along a closed edge path given as a vertex
/// sequence whose first and last entries agree.
pub fn holonomy(complex: &SimplicialComplex, theta: &Cochain<f64>, edge_loop: &[usize]) -> Result<f64> {
  theta.check(complex, 1)?;
  let sum = signed_path_sum(complex, edge_loop, |i, forward| if forward { theta.values[i] } else { -theta.values[i] }, 0.0, |a, b| a + b)?;
  Ok(sum.exp())
}

/// Product of transport weights along a closed edge path (`t(e)` forwards,
/// `1/t(e)` backwards).
pub fn weight_holonomy<S: Scalar>(complex: &SimplicialComplex, weights: &Cochain<S>, edge_loop: &[usize]) -> Result<S> {
  weights.check(complex, 1)?;
  signed_path_sum(
    complex,
    edge_loop,
    |i, forward| if forward { weights.values[i].clone() } else { S::one() / weights.values[i].clone() },
    S::one(),
    |a, b| a * b,
  )
}

fn signed_path_sum<T>(
  complex: &SimplicialComplex,
  path: &[usize],
  value: impl Fn(usize, bool) -> T,
  init: T,
  combine: impl Fn(T, T) -> T,
) -> Result<T> {
  if path.len() < 2 {
    return Err(Error::EmptyPath);
  }
  if path.first() != path.last() {
    return Err(Error::OpenPath);
  }
  let mut acc = init;
  for w in path.windows(2) {
    let (i, forward) = complex.oriented_edge(w[0], w[1]).ok_or_else(|| Error::MissingSimplex(vec![w[0].min(w[1]), w[0].max(w[1])]))?;
    acc = combine(acc, value(i, forward));
  }
  Ok(acc)
}
