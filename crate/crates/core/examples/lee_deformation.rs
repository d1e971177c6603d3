//! Rational approximation of Lee periods, then how far a Lee form can be
//! perturbed before the metric stops being positive.

use novikov::hopf::{annulus_points, deformation_threshold, rational_lee_deformation, BumpPerturbation, HopfData};

fn main() -> novikov::Result<()> {
  let d = rational_lee_deformation(&[1.0, 2f64.sqrt()], 1e-2, 100)?;
  println!("ratios {:?}  error {:.2e}", d.ratios.iter().map(|r| format!("{}/{}", r.numer(), r.denom())).collect::<Vec<_>>(), d.error);

  let h = HopfData::from_moduli(&[0.5, 0.6], 4.0)?;
  let template = BumpPerturbation::new(h, 0, 0.5, 0.0)?;
  let points = annulus_points(4, 500, 0.1, 10.0, 1);
  let t = deformation_threshold(&template, &points, 20.0, 40)?;
  println!("threshold ε = {:.4} (reached: {})", t.threshold, t.reached);
  println!("min eigenvalue at ε = 0: {:.3e}, at threshold/2: {:.3e}", t.base_min_eigenvalue, t.half_threshold_min_eigenvalue);
  Ok(())
}
