//! Twisted Betti numbers of triangulated circles: (1, 1) when the loop has
//! holonomy 1, (0, 0) otherwise, independent of the triangulation.

use novikov::scalar::{format_rational, rat};
use novikov::selftest::weighted_circle;
use novikov::TwistedComplex;

fn main() -> novikov::Result<()> {
  for edges in [3, 4, 12] {
    for t in [rat(1, 1), rat(2, 1), rat(3, 5)] {
      let (k, w) = weighted_circle(edges, &t)?;
      let b = TwistedComplex::assemble(&k, w)?.betti();
      println!("{edges:>2} edges  t = {:<4} betti {:?}", format_rational(&t), b.betti);
    }
  }

  // Same character through the float backend, from the additive cocycle θ.
  let (k, w) = weighted_circle(4, &rat(2, 1))?;
  let theta = novikov::LeeCocycle::new(&k, w.map(|t| novikov::Scalar::to_f64(t).ln()))?;
  let b = TwistedComplex::from_lee(&k, &theta)?.betti();
  println!("float backend: betti {:?}, min separation {:.1e}", b.betti, b.min_separation.unwrap_or(f64::INFINITY));
  Ok(())
}
