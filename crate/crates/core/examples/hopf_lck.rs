//! LCK data of a diagonal Hopf manifold at one point, then the full sampled
//! verification.

use nalgebra::DVector;
use novikov::hopf::{hopf_verify, HopfData, VerifyConfig};

fn main() -> novikov::Result<()> {
  let h = HopfData::from_moduli(&[0.5, 0.6], 4.0)?;
  println!("β = {:?}", h.beta());

  let z = DVector::from_column_slice(&[0.8, -0.3, 1.1, 0.4]);
  let f = h.frame(&z)?;
  println!("φ(z) = {:.6}", f.phi);
  println!("θ(z) = {:.6?}", f.theta);
  println!("min eigenvalue of g = {:.6}", f.min_eigenvalue);
  println!("|φ(Az) − φ(z)/C| / φ(z) = {:.1e}", h.automorphy_residual(&z)?);

  let report = hopf_verify(&h, &VerifyConfig { points: 500, ..VerifyConfig::default() })?;
  for c in &report.checks {
    println!("{:?}: {}", c.check, if c.pass { "pass" } else { "FAIL" });
  }
  Ok(())
}
