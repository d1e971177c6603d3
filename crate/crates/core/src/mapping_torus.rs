//! Mapping tori `W ×_φ S¹` triangulated by stacked staircase prisms, and the
//! vanishing of twisted cohomology for characters pulled back from the base circle.

use std::collections::VecDeque;

use serde::Serialize;

use crate::complex::{weight_holonomy, Cochain, LeeCocycle, SimplicialComplex};
use crate::error::{Error, Result};
use crate::scalar::{format_rational, Rational, Scalar};
use crate::twisted::{TwistedBetti, TwistedComplex};

/// A vertex permutation of `W` that maps simplices to simplices.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplicialAutomorphism {
  perm: Vec<usize>,
}

impl SimplicialAutomorphism {
  pub fn new(complex: &SimplicialComplex, perm: Vec<usize>) -> Result<Self> {
    let n = complex.vertex_count();
    if perm.len() != n {
      return Err(Error::NotAutomorphism(format!("permutation has {} entries for {n} vertices", perm.len())));
    }
    let mut seen = vec![false; n];
    for &v in &perm {
      if v >= n || std::mem::replace(&mut seen[v], true) {
        return Err(Error::NotAutomorphism(format!("{perm:?} is not a bijection")));
      }
    }
    for k in 1..=complex.dimension() {
      for s in complex.simplices(k) {
        let mut image: Vec<usize> = s.iter().map(|v| perm[*v]).collect();
        image.sort_unstable();
        if !complex.contains(&image) {
          return Err(Error::NotAutomorphism(format!("{s:?} maps to non-simplex {image:?}")));
        }
      }
    }
    Ok(Self { perm })
  }

  pub fn identity(complex: &SimplicialComplex) -> Self { Self { perm: (0..complex.vertex_count()).collect() } }

  pub fn apply(&self, v: usize) -> usize { self.perm[v] }

  pub fn permutation(&self) -> &[usize] { &self.perm }
}

/// Triangulated mapping torus with its projection data.
#[derive(Clone, Debug)]
pub struct SuspensionComplex {
  complex: SimplicialComplex,
  fiber_vertices: usize,
  layers: usize,
  base_loop: Vec<usize>,
  base_windings: usize,
}

impl SuspensionComplex {
  pub fn complex(&self) -> &SimplicialComplex { &self.complex }

  pub fn layers(&self) -> usize { self.layers }

  /// Closed vertex path projecting onto the base circle.
  pub fn base_loop(&self) -> &[usize] { &self.base_loop }

  /// How many times the base loop wraps around the circle (1 unless the
  /// fiber is disconnected and φ moves vertex 0 to another component).
  pub fn base_windings(&self) -> usize { self.base_windings }

  /// Fiber inclusion `W → M` onto layer 0.
  pub fn fiber_vertex(&self, w: usize) -> usize { w }

  /// Layer of a vertex of the suspension.
  pub fn layer_of(&self, v: usize) -> usize { v / self.fiber_vertices }

  pub fn vertex(&self, w: usize, layer: usize) -> usize { layer * self.fiber_vertices + w }

  /// Fundamental cycles of the fiber's 1-skeleton, included into layer 0.
  pub fn fiber_loops(&self, fiber: &SimplicialComplex) -> Vec<Vec<usize>> {
    fundamental_cycles(fiber).into_iter().map(|c| c.into_iter().map(|w| self.fiber_vertex(w)).collect()).collect()
  }
}

/// Stacks `layers` copies of `W × [0,1]`, each prism `σ × I` cut into the
/// staircase simplices `(w₀ … w_j at the bottom, w_j … w_k at the top)`, and
/// glues the top of the last layer to the bottom of the first through φ.
pub fn mapping_torus(fiber: &SimplicialComplex, phi: &SimplicialAutomorphism, layers: usize) -> Result<SuspensionComplex> {
  if layers < 3 {
    return Err(Error::TooFewLayers(layers));
  }
  SimplicialAutomorphism::new(fiber, phi.perm.clone())?;
  let m = fiber.vertex_count();
  let vertex = |w: usize, layer: usize| if layer == layers { phi.apply(w) } else { layer * m + w };
  let mut tops = Vec::new();
  for k in 0..=fiber.dimension() {
    for s in fiber.simplices(k) {
      for layer in 0..layers {
        for j in 0..=k {
          let mut simplex: Vec<usize> = s[..=j].iter().map(|&w| vertex(w, layer)).collect();
          simplex.extend(s[j..].iter().map(|&w| vertex(w, layer + 1)));
          tops.push(simplex);
        }
      }
    }
  }
  let complex = SimplicialComplex::build(m * layers, tops)?;

  // Base loop: climb the layers from vertex 0, cross the gluing, then return
  // to vertex 0 inside the fiber.
  let mut base_loop = vec![0];
  let mut current = 0;
  let mut windings = 0;
  loop {
    windings += 1;
    base_loop.extend((1..layers).map(|l| l * m + current));
    let next = phi.apply(current);
    base_loop.push(next);
    if let Some(path) = fiber_path(fiber, next, 0) {
      base_loop.extend(path.into_iter().skip(1));
      break;
    }
    current = next;
  }
  Ok(SuspensionComplex { complex, fiber_vertices: m, layers, base_loop, base_windings: windings })
}

fn fiber_path(fiber: &SimplicialComplex, from: usize, to: usize) -> Option<Vec<usize>> {
  let n = fiber.vertex_count();
  let mut adj = vec![Vec::new(); n];
  for e in fiber.simplices(1) {
    adj[e[0]].push(e[1]);
    adj[e[1]].push(e[0]);
  }
  let mut prev = vec![usize::MAX; n];
  prev[from] = from;
  let mut queue = VecDeque::from([from]);
  while let Some(v) = queue.pop_front() {
    if v == to {
      let mut path = vec![to];
      let mut cur = to;
      while cur != from {
        cur = prev[cur];
        path.push(cur);
      }
      path.reverse();
      return Some(path);
    }
    for &u in &adj[v] {
      if prev[u] == usize::MAX {
        prev[u] = v;
        queue.push_back(u);
      }
    }
  }
  None
}

/// One closed vertex path per non-tree edge of a BFS spanning forest.
pub fn fundamental_cycles(complex: &SimplicialComplex) -> Vec<Vec<usize>> {
  let n = complex.vertex_count();
  let mut parent = vec![usize::MAX; n];
  let mut depth = vec![0usize; n];
  let mut adj = vec![Vec::new(); n];
  for e in complex.simplices(1) {
    adj[e[0]].push(e[1]);
    adj[e[1]].push(e[0]);
  }
  let mut tree = std::collections::HashSet::new();
  for root in 0..n {
    if parent[root] != usize::MAX {
      continue;
    }
    parent[root] = root;
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
      for &u in &adj[v] {
        if parent[u] == usize::MAX {
          parent[u] = v;
          depth[u] = depth[v] + 1;
          tree.insert((v.min(u), v.max(u)));
          queue.push_back(u);
        }
      }
    }
  }
  let to_root = |mut v: usize| {
    let mut path = vec![v];
    while parent[v] != v {
      v = parent[v];
      path.push(v);
    }
    path
  };
  let mut cycles = Vec::new();
  for e in complex.simplices(1) {
    if tree.contains(&(e[0], e[1])) {
      continue;
    }
    // a → … → lca → … → b → a
    let (pa, pb) = (to_root(e[0]), to_root(e[1]));
    let lca = *pa.iter().find(|v| pb.contains(v)).expect("same component");
    let mut cycle: Vec<usize> = pa.iter().copied().take_while(|v| *v != lca).collect();
    cycle.push(lca);
    let back: Vec<usize> = pb.iter().copied().take_while(|v| *v != lca).collect();
    cycle.extend(back.into_iter().rev());
    cycle.push(e[0]);
    cycles.push(cycle);
  }
  cycles
}

fn layer_step(m: &SuspensionComplex, edge: &[usize]) -> i8 {
  let (la, lb) = (m.layer_of(edge[0]), m.layer_of(edge[1]));
  if la == lb {
    0
  } else if lb == la + 1 {
    1
  } else {
    debug_assert!(la == 0 && lb == m.layers - 1);
    -1
  }
}

/// Rational pullback character: weight `t` on the gluing edges crossed from the
/// last layer into layer 0, 1 elsewhere. With canonical (ascending) orientation
/// a gluing edge runs from layer 0 to the last layer, so it carries `1/t`.
pub fn base_character_rational(m: &SuspensionComplex, t: &Rational) -> Result<Cochain<Rational>> {
  if !Scalar::is_positive(t) {
    return Err(Error::NonPositiveWeight(format_rational(t)));
  }
  let one = Rational::from_integer(1.into());
  let inv = one.clone() / t.clone();
  let values = m.complex.simplices(1).iter().map(|e| if layer_step(m, e) == -1 { inv.clone() } else { one.clone() }).collect();
  Cochain::new(&m.complex, 1, values)
}

/// Float pullback character: `θ = log(t)/layers` on every edge climbing one
/// layer, so each of the `layers` vertical steps carries weight `t^{1/layers}`.
pub fn base_character_float(m: &SuspensionComplex, t: f64) -> Result<LeeCocycle> {
  if !(t > 0.0 && t.is_finite()) {
    return Err(Error::NonPositiveWeight(t.to_string()));
  }
  let step = t.ln() / m.layers as f64;
  let values = m.complex.simplices(1).iter().map(|e| f64::from(layer_step(m, e)) * step).collect();
  LeeCocycle::new(&m.complex, Cochain::new(&m.complex, 1, values)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct VanishingReport {
  pub f_vector: Vec<usize>,
  pub euler: i64,
  pub layers: usize,
  pub t: String,
  pub base_holonomy: String,
  pub fiber_holonomies: Vec<String>,
  pub betti: TwistedBetti,
  pub pass: bool,
}

/// Exact twisted Betti numbers of the suspension for the base character `t`;
/// passes iff they all vanish (for `t ≠ 1`).
pub fn vanishing_check(fiber: &SimplicialComplex, phi: &SimplicialAutomorphism, t: &Rational, layers: usize) -> Result<VanishingReport> {
  let m = mapping_torus(fiber, phi, layers)?;
  let weights = base_character_rational(&m, t)?;
  let base = weight_holonomy(&m.complex, &weights, &m.base_loop)?;
  let fiber_holonomies = m
    .fiber_loops(fiber)
    .iter()
    .map(|lp| weight_holonomy(&m.complex, &weights, lp).map(|h| format_rational(&h)))
    .collect::<Result<Vec<_>>>()?;
  let tc = TwistedComplex::assemble(&m.complex, weights)?;
  let betti = tc.betti();
  let one = Rational::from_integer(1.into());
  let pass = *t != one && betti.is_zero();
  Ok(VanishingReport {
    f_vector: m.complex.f_vector(),
    euler: m.complex.euler_characteristic(),
    layers,
    t: format_rational(t),
    base_holonomy: format_rational(&base),
    fiber_holonomies,
    betti,
    pass,
  })
}

#[cfg(test)]
mod tests {
  use super::*;
  use crate::complex::holonomy;
  use crate::scalar::rat;
  use crate::triangulations::{self, automorphism};

  fn auto(fiber: &str, name: &str) -> (SimplicialComplex, SimplicialAutomorphism) {
    let w = triangulations::by_name(fiber).unwrap();
    let p = SimplicialAutomorphism::new(&w, automorphism(fiber, name).unwrap()).unwrap();
    (w, p)
  }

  #[test]
  fn point_suspension_is_a_circle() {
    let (w, id) = auto("point", "id");
    let m = mapping_torus(&w, &id, 3).unwrap();
    assert_eq!(m.complex().f_vector(), vec![3, 3]);
    assert_eq!(m.base_loop(), &[0, 1, 2, 0]);
  }

  #[test]
  fn circle_suspensions_are_tori() {
    for name in ["id", "rot"] {
      let (w, p) = auto("circle3", name);
      let m = mapping_torus(&w, &p, 3).unwrap();
      assert_eq!(m.complex().euler_characteristic(), 0);
      let tc = TwistedComplex::<Rational>::untwisted(m.complex());
      assert_eq!(tc.betti().betti, vec![1, 2, 1], "{name}");
    }
  }

  #[test]
  fn too_few_layers_and_bad_maps() {
    let (w, id) = auto("circle3", "id");
    assert!(matches!(mapping_torus(&w, &id, 2), Err(Error::TooFewLayers(2))));
    let t = triangulations::torus9();
    assert!(SimplicialAutomorphism::new(&t, vec![1, 0, 2, 3, 4, 5, 6, 7, 8]).is_err());
    assert!(SimplicialAutomorphism::new(&w, vec![0, 0, 1]).is_err());
  }

  #[test]
  fn base_character_holonomies() {
    let (w, id) = auto("point", "id");
    let m = mapping_torus(&w, &id, 3).unwrap();
    let weights = base_character_rational(&m, &rat(2, 1)).unwrap();
    assert_eq!(weight_holonomy(m.complex(), &weights, m.base_loop()).unwrap(), rat(2, 1));

    let (w, id) = auto("circle3", "id");
    let m = mapping_torus(&w, &id, 3).unwrap();
    let weights = base_character_rational(&m, &rat(2, 1)).unwrap();
    assert_eq!(weight_holonomy(m.complex(), &weights, m.base_loop()).unwrap(), rat(2, 1));
    for lp in m.fiber_loops(&w) {
      assert_eq!(weight_holonomy(m.complex(), &weights, &lp).unwrap(), rat(1, 1));
    }
    let lee = base_character_float(&m, 2.0).unwrap();
    assert!((holonomy(m.complex(), lee.cochain(), m.base_loop()).unwrap() - 2.0).abs() < 1e-12);
    assert!(base_character_rational(&m, &rat(0, 1)).is_err());
    assert!(base_character_float(&m, -1.0).is_err());
    let unit = base_character_rational(&m, &rat(1, 1)).unwrap();
    assert!(unit.values().iter().all(|w| *w == rat(1, 1)));
  }

  #[test]
  fn vanishing_on_small_fibers() {
    let (w, id) = auto("point", "id");
    let r = vanishing_check(&w, &id, &rat(2, 1), 3).unwrap();
    assert_eq!(r.betti.betti, vec![0, 0]);
    assert!(r.pass);
    let (w, id) = auto("tetra", "id");
    let r = vanishing_check(&w, &id, &rat(3, 1), 3).unwrap();
    assert_eq!(r.betti.betti, vec![0, 0, 0, 0]);
    assert!(r.pass);
    assert_eq!(r.base_holonomy, "3/1");
    let r = vanishing_check(&w, &id, &rat(1, 1), 3).unwrap();
    assert!(!r.pass);
    assert_eq!(r.betti.betti, vec![1, 1, 1, 1]);
  }

  #[test]
  fn fundamental_cycles_of_torus() {
    let t = triangulations::torus9();
    // 27 − 9 + 1 non-tree edges.
    let cycles = fundamental_cycles(&t);
    assert_eq!(cycles.len(), 19);
    for c in cycles {
      assert_eq!(c.first(), c.last());
      for w in c.windows(2) {
        assert!(t.oriented_edge(w[0], w[1]).is_some());
      }
    }
  }
}
