//! Fourier-truncated twisted cohomology of flat tori, and the Bott–Chern
//! exact-sequence check.

use novikov::spectral::{bc_exact_sequence_report, bott_chern_dims, de_rham_dims, dolbeault_dims, ConstantLeeForm, FlatTorus};

fn main() -> novikov::Result<()> {
  let torus = FlatTorus::new(1, 8)?;
  for theta in [vec![0.0, 0.0], vec![1.0, 0.0], vec![-2.0 * std::f64::consts::PI, 0.0]] {
    let th = ConstantLeeForm::new(theta.clone())?;
    let dr = de_rham_dims(&torus, &th)?;
    let dol = dolbeault_dims(&torus, &th)?;
    let bc = bott_chern_dims(&torus, &th)?;
    println!("θ = {theta:?}: de Rham {:?}  Dolbeault {:?}  Bott–Chern {:?}", dr.dims[0], dol.dims, bc.dims);
  }

  let torus = FlatTorus::new(2, 6)?;
  let r = bc_exact_sequence_report(&torus, &ConstantLeeForm::zero(2))?;
  println!(
    "n = 2, θ = 0: h01 {} h10 {} h11_BC {} h2 {}  rank {} = dim ker ν {}  pass {}",
    r.h1_holomorphic, r.h1_conjugate, r.h11_bott_chern, r.h2_twisted, r.rank_first_map, r.dim_ker_nu, r.pass
  );
  Ok(())
}
