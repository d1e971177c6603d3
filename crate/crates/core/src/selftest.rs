//! The ten acceptance checks, each returning values plus a pass flag derived
//! from them. Used by the `selftest` subcommand.

use num_bigint::BigInt;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::complex::{Cochain, SimplicialComplex};
use crate::error::Result;
use crate::hopf::{
  annulus_points, deformation_threshold, hopf_verify, rational_lee_deformation, BumpPerturbation, Check, HopfData, VerifyConfig,
};
use crate::linalg::integer_kernel_basis;
use crate::mapping_torus::{vanishing_check, SimplicialAutomorphism};
use crate::scalar::{format_rational, rat, Rational};
use crate::spectral::{
  apply_operator, bc_exact_sequence_report, bott_chern_dims, circle_average, conjugate_dolbeault_dims, de_rham_dims, dolbeault_dims,
  random_form, ConstantLeeForm, FlatTorus, Operator, SpectralForm,
};
use crate::triangulations;
use crate::twisted::TwistedComplex;

pub const SEED: u64 = 42;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionResult {
  pub id: usize,
  pub name: &'static str,
  pub pass: bool,
  pub details: Value,
}

impl CriterionResult {
  fn new(id: usize, name: &'static str, pass: bool, details: Value) -> Self { Self { id, name, pass, details } }

  fn errored(id: usize, name: &'static str, e: &crate::Error) -> Self { Self::new(id, name, false, json!({ "error": e.to_string() })) }
}

pub const NAMES: [&str; 10] = [
  "twisted circle",
  "mapping torus vanishing",
  "algebraic identities",
  "spectral torus",
  "exact sequence",
  "hopf automorphy",
  "hopf positivity and structure equation",
  "potential identity",
  "rational lee deformation",
  "averaging",
];

/// Runs criterion `id` (1-based); evaluation errors count as failures.
pub fn criterion(id: usize) -> CriterionResult {
  let name = NAMES.get(id.wrapping_sub(1)).copied().unwrap_or("unknown");
  let r = match id {
    1 => twisted_circle(),
    2 => mapping_torus_vanishing(),
    3 => algebraic_identities(100, 50, SEED),
    4 => spectral_torus(6),
    5 => exact_sequence(6),
    6 => hopf_automorphy(),
    7 => hopf_positivity_structure(),
    8 => potential_identity(),
    9 => lee_deformation(),
    10 => averaging(50, SEED),
    _ => return CriterionResult::new(id, name, false, json!({ "error": "no such criterion" })),
  };
  r.unwrap_or_else(|e| CriterionResult::errored(id, name, &e))
}

pub fn run_all() -> Vec<CriterionResult> { (1..=10).map(criterion).collect() }

/// Circle on `edges` vertices whose closing edge `(0, edges-1)` carries `1/t`,
/// so the loop `0 → 1 → … → 0` has holonomy `t`.
pub fn weighted_circle(edges: usize, t: &Rational) -> Result<(SimplicialComplex, Cochain<Rational>)> {
  let k = triangulations::circle(edges);
  let closing = [0, edges - 1];
  let w = Cochain::from_pairs(&k, 1, [(&closing[..], rat(1, 1) / t.clone())], rat(1, 1))?;
  Ok((k, w))
}

pub fn twisted_circle() -> Result<CriterionResult> {
  let mut rows = Vec::new();
  let mut pass = true;
  for edges in [3, 4, 12] {
    for (t, expected) in [(rat(1, 1), vec![1, 1]), (rat(2, 1), vec![0, 0])] {
      let (k, w) = weighted_circle(edges, &t)?;
      let b = TwistedComplex::assemble(&k, w)?.betti();
      let ok = b.betti == expected;
      pass &= ok;
      rows.push(json!({ "edges": edges, "t": format_rational(&t), "betti": b.betti, "expected": expected, "pass": ok }));
    }
  }
  Ok(CriterionResult::new(1, NAMES[0], pass, json!({ "cases": rows })))
}

/// Betti numbers of `W × S¹` from those of `W`.
pub fn kunneth_with_circle(fiber_betti: &[usize]) -> Vec<usize> {
  (0..=fiber_betti.len()).map(|k| fiber_betti.get(k).copied().unwrap_or(0) + if k > 0 { fiber_betti[k - 1] } else { 0 }).collect()
}

pub const VANISHING_FIBERS: [&str; 5] = ["point", "circle3", "tetra", "torus9", "rp2_6"];

pub fn mapping_torus_vanishing() -> Result<CriterionResult> {
  let mut rows = Vec::new();
  let mut pass = true;
  for fiber in VANISHING_FIBERS {
    let w = triangulations::by_name(fiber)?;
    let kunneth = kunneth_with_circle(&w.betti_numbers());
    for auto in triangulations::automorphism_names(fiber) {
      let phi = SimplicialAutomorphism::new(&w, triangulations::automorphism(fiber, auto)?)?;
      for t in [rat(2, 1), rat(3, 1), rat(1, 2)] {
        let r = vanishing_check(&w, &phi, &t, 3)?;
        pass &= r.pass;
        rows.push(json!({ "fiber": fiber, "auto": auto, "t": r.t, "betti": r.betti.betti, "pass": r.pass }));
      }
      let r = vanishing_check(&w, &phi, &rat(1, 1), 3)?;
      let ok = r.betti.betti == kunneth;
      pass &= ok;
      rows.push(json!({ "fiber": fiber, "auto": auto, "t": "1/1", "betti": r.betti.betti, "kunneth": kunneth, "pass": ok }));
    }
  }
  Ok(CriterionResult::new(2, NAMES[1], pass, json!({ "cases": rows })))
}

/// Random subcomplex of Δ⁶ (1 to 8 random simplices of dimension ≤ 3) with
/// an exact rational character `2^{z(e)}` where `z = δf + h`, `h` a random
/// integer cocycle (usually not a coboundary).
pub fn random_instance<R: Rng + ?Sized>(rng: &mut R) -> Result<(SimplicialComplex, Cochain<Rational>)> {
  let count = rng.random_range(1..=8);
  let tops: Vec<Vec<usize>> = (0..count)
    .map(|_| {
      let dim = rng.random_range(1..=3);
      let mut verts: Vec<usize> = (0..7).collect();
      for i in 0..=dim {
        let j = rng.random_range(i..7);
        verts.swap(i, j);
      }
      verts.truncate(dim + 1);
      verts
    })
    .collect();
  let k = SimplicialComplex::build(7, tops)?;
  let f: Vec<i64> = (0..7).map(|_| rng.random_range(-3..=3)).collect();
  let mut z: Vec<BigInt> = k.simplices(1).iter().map(|e| BigInt::from(f[e[1]] - f[e[0]])).collect();
  for v in integer_kernel_basis(&k.coboundary_matrix::<Rational>(1)) {
    let c = BigInt::from(rng.random_range(-1i64..=1));
    for (zi, vi) in z.iter_mut().zip(&v) {
      *zi += &c * vi;
    }
  }
  let two = Rational::from_integer(BigInt::from(2));
  let weights = z
    .iter()
    .map(|e| {
      let e = i32::try_from(e).map_err(|_| crate::Error::InvalidArgument(format!("exponent {e} too large")))?;
      Ok(num_traits::pow::Pow::pow(&two, e))
    })
    .collect::<Result<Vec<_>>>()?;
  let w = Cochain::new(&k, 1, weights)?;
  Ok((k, w))
}

pub fn algebraic_identities(instances: usize, gauges: usize, seed: u64) -> Result<CriterionResult> {
  let mut rng = ChaCha8Rng::seed_from_u64(seed);
  let mut d2_failures = 0;
  let mut gauge_failures = 0;
  let mut euler_failures = 0;
  let mut non_exact = 0;
  for _ in 0..instances {
    let (k, w) = random_instance(&mut rng)?;
    let tc = TwistedComplex::assemble(&k, w)?;
    if !tc.squares_to_zero() {
      d2_failures += 1;
    }
    let b = tc.betti();
    if b.euler_sum() != k.euler_characteristic() {
      euler_failures += 1;
    }
    if b.betti.first() == Some(&0) && k.betti_numbers()[0] > 0 {
      non_exact += 1;
    }
    for _ in 0..gauges {
      let u: Vec<Rational> = (0..k.vertex_count()).map(|_| rat(rng.random_range(1..=9), rng.random_range(1..=9))).collect();
      let (g, _) = tc.gauge_transform(&Cochain::new(&k, 0, u)?)?;
      if g.betti().betti != b.betti || !g.squares_to_zero() {
        gauge_failures += 1;
      }
    }
  }
  let pass = d2_failures == 0 && gauge_failures == 0 && euler_failures == 0;
  Ok(CriterionResult::new(
    3,
    NAMES[2],
    pass,
    json!({
      "instances": instances, "gauges_per_instance": gauges, "seed": seed,
      "d_squared_failures": d2_failures, "gauge_failures": gauge_failures, "euler_failures": euler_failures,
      "instances_with_nontrivial_character": non_exact,
    }),
  ))
}

pub fn spectral_torus(cutoff: usize) -> Result<CriterionResult> {
  let torus = FlatTorus::new(1, cutoff)?;
  let zero = ConstantLeeForm::zero(1);
  let dr = de_rham_dims(&torus, &zero)?;
  let dol = dolbeault_dims(&torus, &zero)?;
  let bc = bott_chern_dims(&torus, &zero)?;
  let untwisted_ok = dr.dims[0] == vec![1, 2, 1] && dol.get(0, 1) == 1 && bc.get(1, 1) == 1;
  let theta = ConstantLeeForm::new(vec![1.0, 0.0])?;
  let twisted = [
    de_rham_dims(&torus, &theta)?,
    dolbeault_dims(&torus, &theta)?,
    conjugate_dolbeault_dims(&torus, &theta)?,
    bott_chern_dims(&torus, &theta)?,
  ];
  let twisted_ok = twisted.iter().all(|d| d.dims.iter().flatten().all(|x| *x == 0));
  let low = [&dr, &dol, &bc].iter().map(|d| d.low_confidence_blocks).sum::<usize>()
    + twisted.iter().map(|d| d.low_confidence_blocks).sum::<usize>();
  Ok(CriterionResult::new(
    4,
    NAMES[3],
    untwisted_ok && twisted_ok,
    json!({
      "cutoff": cutoff, "checked_cutoff": dr.checked_cutoff,
      "de_rham": dr.dims[0], "dolbeault_01": dol.get(0, 1), "bott_chern_11": bc.get(1, 1),
      "twisted": twisted, "low_confidence_blocks": low,
    }),
  ))
}

pub fn exact_sequence(cutoff: usize) -> Result<CriterionResult> {
  let mut reports = Vec::new();
  for n in [1, 2] {
    let torus = FlatTorus::new(n, cutoff)?;
    let mut shifted = vec![0.0; 2 * n];
    shifted[0] = 1.0;
    for theta in [ConstantLeeForm::zero(n), ConstantLeeForm::new(shifted.clone())?] {
      reports.push(bc_exact_sequence_report(&torus, &theta)?);
    }
  }
  let pass = reports.iter().all(|r| r.pass);
  Ok(CriterionResult::new(5, NAMES[4], pass, json!({ "reports": reports })))
}

/// Five diagonal Hopf configurations: `n = 1` with `β = 2` and `β = 3`,
/// `n = 2` with equal and mixed exponents, and one `n = 3`.
pub fn hopf_configs() -> Vec<HopfData> {
  let e = std::f64::consts::E;
  let polar = |m: f64, a: f64| Complex64::from_polar(m, a);
  vec![
    HopfData::from_moduli(&[1.0 / e], e * e),
    HopfData::from_moduli(&[0.5], 8.0),
    HopfData::from_moduli(&[1.0 / e, 1.0 / e], e * e),
    HopfData::new(vec![polar(0.5, 0.7), polar(0.6, -1.3)], 4.0),
    HopfData::new(vec![polar(0.5, 0.0), polar(0.55, 2.1), polar(0.6, 0.4)], 5.0),
  ]
  .into_iter()
  .map(|h| h.expect("valid configuration"))
  .collect()
}

fn hopf_criterion(id: usize, checks: &[Check]) -> Result<CriterionResult> {
  let cfg = VerifyConfig { checks: checks.to_vec(), ..VerifyConfig::default() };
  let reports = hopf_configs().iter().map(|h| hopf_verify(h, &cfg)).collect::<Result<Vec<_>>>()?;
  let pass = reports.iter().all(|r| r.pass);
  let summary: Vec<Value> = reports
    .iter()
    .map(|r| json!({ "hopf": r.hopf, "checks": r.checks.iter().map(|c| json!({ "check": c.check, "pass": c.pass, "metrics": c.metrics, "error": c.error })).collect::<Vec<_>>() }))
    .collect();
  Ok(CriterionResult::new(id, NAMES[id - 1], pass, json!({ "points": cfg.points, "seed": cfg.seed, "configs": summary })))
}

pub fn hopf_automorphy() -> Result<CriterionResult> { hopf_criterion(6, &[Check::Automorphy]) }

pub fn hopf_positivity_structure() -> Result<CriterionResult> {
  let mut r = hopf_criterion(7, &[Check::Positivity, Check::Structure])?;
  // The structure equation is vacuous in complex dimension 1; require at
  // least one configuration where it is tested.
  let tested = hopf_configs().iter().filter(|h| h.n() >= 2).count();
  r.pass &= tested > 0;
  r.details["structure_tested_configs"] = json!(tested);
  Ok(r)
}

/// Relative error of `d_θ d^c_θ = −2i ∂_θ∂̄_θ` over random forms.
pub fn spectral_ddc_error(samples: usize, seed: u64) -> Result<f64> {
  let mut rng = ChaCha8Rng::seed_from_u64(seed);
  let mut worst: f64 = 0.0;
  for _ in 0..samples {
    let n = rng.random_range(1..=3);
    let theta = ConstantLeeForm::new((0..2 * n).map(|_| rng.random_range(-2.0..2.0)).collect())?;
    let f = random_form(&mut rng, n, 6, 4, |_| true);
    let lhs = apply_operator(Operator::DTheta, &apply_operator(Operator::DcTheta, &f, &theta)?, &theta)?;
    let rhs = apply_operator(Operator::DelDelBarTheta, &f, &theta)?.scale(Complex64::new(0.0, -2.0));
    worst = worst.max(lhs.sub(&rhs)?.max_abs() / rhs.max_abs().max(1.0));
  }
  Ok(worst)
}

pub fn potential_identity() -> Result<CriterionResult> {
  let mut r = hopf_criterion(8, &[Check::Identity])?;
  let spectral = spectral_ddc_error(50, SEED)?;
  r.pass &= spectral <= 1e-12;
  r.details["spectral_ddc_relative_error"] = json!(spectral);
  Ok(r)
}

pub fn lee_deformation() -> Result<CriterionResult> {
  let d = rational_lee_deformation(&[1.0, 2f64.sqrt()], 1e-2, 100)?;
  let ratio_ok = d.ratios == vec![num_rational::Ratio::from_integer(1), num_rational::Ratio::new(99, 70)] && d.error <= 1e-4;
  let h = hopf_configs()[3].clone();
  let template = BumpPerturbation::new(h, 0, 0.5, 0.0)?;
  let points = annulus_points(template.hopf.real_dim(), 1000, 0.1, 10.0, SEED);
  let t = deformation_threshold(&template, &points, 20.0, 40)?;
  let pass = ratio_ok && t.base_min_eigenvalue > 0.0 && t.positive_at_half;
  Ok(CriterionResult::new(9, NAMES[8], pass, json!({ "deformation": d, "threshold": t })))
}

/// Closed random form: `d α` plus a constant-coefficient part.
fn random_closed_form<R: Rng + ?Sized>(rng: &mut R, n: usize, cutoff: usize) -> Result<SpectralForm> {
  let theta = ConstantLeeForm::zero(n);
  let alpha = random_form(rng, n, cutoff, 5, |m| m.count_ones() == 1);
  let mut harmonic = SpectralForm::zero(n);
  for mask in 0..1usize << (2 * n) {
    if mask.count_ones() == 2 {
      harmonic.set(&vec![0; 2 * n], mask, Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    }
  }
  apply_operator(Operator::D, &alpha, &theta)?.add(&harmonic)
}

pub fn averaging(samples: usize, seed: u64) -> Result<CriterionResult> {
  let mut rng = ChaCha8Rng::seed_from_u64(seed);
  let tol = 1e-12;
  let (mut idempotent, mut killed, mut closed, mut zero_mode) = (0, 0, 0, 0);
  for _ in 0..samples {
    let n = rng.random_range(1..=2);
    let eta = random_closed_form(&mut rng, n, 4)?;
    let dir = rng.random_range(0..2 * n);
    let avg = circle_average(&eta, dir)?;
    if circle_average(&avg, dir)? == avg {
      idempotent += 1;
    }
    if avg.modes().all(|(k, _)| k[dir] == 0) {
      killed += 1;
    }
    if apply_operator(Operator::D, &avg, &ConstantLeeForm::zero(n))?.is_zero(tol) {
      closed += 1;
    }
    let origin = vec![0; 2 * n];
    if (0..1usize << (2 * n)).all(|m| avg.get(&origin, m) == eta.get(&origin, m)) {
      zero_mode += 1;
    }
  }
  let pass = [idempotent, killed, closed, zero_mode].iter().all(|c| *c == samples);
  Ok(CriterionResult::new(
    10,
    NAMES[9],
    pass,
    json!({ "samples": samples, "seed": seed, "idempotent": idempotent, "non_invariant_modes_removed": killed, "closed": closed, "zero_mode_preserved": zero_mode }),
  ))
}

#[cfg(test)]
mod tests {
  use super::*;

  #[test]
  fn kunneth_of_a_point_and_a_torus() {
    assert_eq!(kunneth_with_circle(&[1]), vec![1, 1]);
    assert_eq!(kunneth_with_circle(&[1, 2, 1]), vec![1, 3, 3, 1]);
  }

  #[test]
  fn random_instances_carry_valid_characters() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
      let (k, w) = random_instance(&mut rng).unwrap();
      assert!(TwistedComplex::assemble(&k, w).is_ok());
    }
  }

  #[test]
  fn unknown_criterion_fails() { assert!(!criterion(11).pass); }
}
