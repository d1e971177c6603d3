//! Suspends each built-in fiber and pulls back a character of the base
//! circle. Twisted cohomology vanishes for t ≠ 1; at t = 1 it is that of
//! the product with a circle.

use novikov::mapping_torus::{vanishing_check, SimplicialAutomorphism};
use novikov::scalar::rat;
use novikov::triangulations;

fn main() -> novikov::Result<()> {
  for fiber in ["point", "circle3", "tetra", "torus9", "rp2_6"] {
    let w = triangulations::by_name(fiber)?;
    for auto in triangulations::automorphism_names(fiber) {
      let phi = SimplicialAutomorphism::new(&w, triangulations::automorphism(fiber, auto)?)?;
      for t in [rat(1, 1), rat(2, 1), rat(1, 2)] {
        let r = vanishing_check(&w, &phi, &t, 3)?;
        println!(
          "{fiber:<8} {auto:<4} t={:<4} f={:?} betti={:?}",
          r.t, r.f_vector, r.betti.betti
        );
      }
    }
  }
  Ok(())
}
