//! Averaging spectral forms over a circle action on the torus.

use num_complex::Complex64;
use novikov::spectral::{apply_operator, circle_average, ConstantLeeForm, Operator, SpectralForm};

fn main() -> novikov::Result<()> {
  // f = e^{iπx} + 2 e^{iπ(x+y)} + 3 on the elliptic curve.
  let mut f = SpectralForm::zero(1);
  f.set(&[1, 0], 0, Complex64::new(1.0, 0.0));
  f.set(&[1, 1], 0, Complex64::new(2.0, 0.0));
  f.set(&[0, 0], 0, Complex64::new(3.0, 0.0));
  let eta = apply_operator(Operator::D, &f, &ConstantLeeForm::zero(1))?;

  for dir in 0..2 {
    let avg = circle_average(&eta, dir)?;
    let modes: Vec<_> = avg.modes().map(|(k, _)| k.clone()).collect();
    println!("direction {dir}: surviving modes {modes:?}, idempotent {}", circle_average(&avg, dir)? == avg);
  }
  let avg = circle_average(&f, 1)?;
  println!("average of f along y keeps {:?}", avg.modes().map(|(k, _)| k.clone()).collect::<Vec<_>>());
  Ok(())
}
