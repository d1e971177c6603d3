//! Built-in triangulations addressable by name, with a few simplicial
//! automorphisms for each.

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};

/// Names accepted by [`by_name`].
pub const NAMES: [&str; 6] = ["point", "circle3", "circle4", "tetra", "torus9", "rp2_6"];

pub fn point() -> SimplicialComplex { SimplicialComplex::build(1, Vec::<Vec<usize>>::new()).expect("point") }

/// Boundary of an n-gon, n ≥ 3.
pub fn circle(n: usize) -> SimplicialComplex {
  assert!(n >= 3, "a simplicial circle needs at least 3 vertices");
  SimplicialComplex::build(n, (0..n).map(|i| [i, (i + 1) % n])).expect("circle")
}

/// ∂Δ³, a 2-sphere.
pub fn tetra() -> SimplicialComplex {
  SimplicialComplex::build(4, [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]).expect("tetra")
}

/// 3×3 grid torus with one diagonal per square; vertex `(i, j)` is `3i + j`.
pub fn torus9() -> SimplicialComplex {
  let v = |i: usize, j: usize| 3 * (i % 3) + (j % 3);
  let mut tris = Vec::new();
  for i in 0..3 {
    for j in 0..3 {
      tris.push([v(i, j), v(i + 1, j), v(i + 1, j + 1)]);
      tris.push([v(i, j), v(i, j + 1), v(i + 1, j + 1)]);
    }
  }
  SimplicialComplex::build(9, tris).expect("torus9")
}

/// Six-vertex real projective plane (the hemi-icosahedron).
pub fn rp2_6() -> SimplicialComplex {
  SimplicialComplex::build(
    6,
    [
      [0, 1, 2],
      [0, 2, 3],
      [0, 3, 4],
      [0, 4, 5],
      [0, 1, 5],
      [1, 2, 4],
      [2, 3, 5],
      [1, 3, 4],
      [2, 4, 5],
      [1, 3, 5],
    ],
  )
  .expect("rp2_6")
}

pub fn by_name(name: &str) -> Result<SimplicialComplex> {
  Ok(match name {
    "point" => point(),
    "circle3" => circle(3),
    "circle4" => circle(4),
    "tetra" => tetra(),
    "torus9" => torus9(),
    "rp2_6" => rp2_6(),
    other => return Err(Error::UnknownTriangulation(other.to_string())),
  })
}

/// A named vertex permutation for a built-in fiber: `"id"` always exists,
/// `"rot"` where the fiber has a non-trivial symmetry isotopic to the identity
/// on rational cohomology.
pub fn automorphism(fiber: &str, name: &str) -> Result<Vec<usize>> {
  let complex = by_name(fiber)?;
  let n = complex.vertex_count();
  match name {
    "id" => Ok((0..n).collect()),
    "rot" => match fiber {
      "circle3" | "circle4" => Ok((0..n).map(|i| (i + 1) % n).collect()),
      // Even permutation: orientation-preserving on S².
      "tetra" => Ok(vec![1, 2, 0, 3]),
      // Translation (i, j) ↦ (i + 1, j).
      "torus9" => Ok((0..9).map(|v| (v + 3) % 9).collect()),
      // Order-5 rotation of the hemi-icosahedron fixing vertex 0.
      "rp2_6" => Ok(vec![0, 2, 3, 4, 5, 1]),
      _ => Err(Error::UnknownAutomorphism(format!("{fiber}:{name}"))),
    },
    _ => Err(Error::UnknownAutomorphism(format!("{fiber}:{name}"))),
  }
}

/// Automorphism names available for a fiber.
pub fn automorphism_names(fiber: &str) -> Vec<&'static str> {
  if fiber == "point" {
    vec!["id"]
  } else {
    vec!["id", "rot"]
  }
}

#[cfg(test)]
mod tests {
  use super::*;

  #[test]
  fn library_f_vectors_and_betti() {
    let cases: [(&str, Vec<usize>, Vec<usize>); 6] = [
      ("point", vec![1], vec![1]),
      ("circle3", vec![3, 3], vec![1, 1]),
      ("circle4", vec![4, 4], vec![1, 1]),
      ("tetra", vec![4, 6, 4], vec![1, 0, 1]),
      ("torus9", vec![9, 27, 18], vec![1, 2, 1]),
      ("rp2_6", vec![6, 15, 10], vec![1, 0, 0]),
    ];
    for (name, f, b) in cases {
      let k = by_name(name).unwrap();
      assert_eq!(k.f_vector(), f, "{name}");
      assert_eq!(k.betti_numbers(), b, "{name}");
    }
  }

  #[test]
  fn closed_surfaces_are_pseudomanifolds() {
    for name in ["tetra", "torus9", "rp2_6"] {
      let k = by_name(name).unwrap();
      for e in k.simplices(1) {
        let n = k.simplices(2).iter().filter(|t| e.iter().all(|v| t.contains(v))).count();
        assert_eq!(n, 2, "{name} edge {e:?}");
      }
    }
  }

  #[test]
  fn rotations_are_simplicial() {
    for name in NAMES {
      let k = by_name(name).unwrap();
      for auto in automorphism_names(name) {
        let p = automorphism(name, auto).unwrap();
        for d in 0..=k.dimension() {
          for s in k.simplices(d) {
            let image: Vec<usize> = s.iter().map(|v| p[*v]).collect();
            let mut sorted = image.clone();
            sorted.sort_unstable();
            assert!(k.contains(&sorted), "{name}/{auto}: {s:?} ↦ {image:?}");
          }
        }
      }
    }
    assert!(automorphism("point", "rot").is_err());
    assert!(by_name("klein").is_err());
  }
}
