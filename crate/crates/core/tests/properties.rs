//! Property tests over random complexes, characters, spectral forms and Hopf
//! data.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use novikov::complex::holonomy;
use novikov::hopf::{rational_lee_deformation, HopfData};
use novikov::mapping_torus::fundamental_cycles;
use novikov::spectral::{apply_operator, circle_average, random_form, ConstantLeeForm, Operator};
use novikov::{triangulations, Cochain, LeeCocycle, SimplicialComplex, TwistedComplex};

type Q = BigRational;

fn q(n: i64, d: i64) -> Q { Q::new(BigInt::from(n), BigInt::from(d)) }

/// Up to 8 simplices of dimension 1..=3 on 7 vertices.
fn complex_strategy() -> impl Strategy<Value = SimplicialComplex> {
  prop::collection::vec(prop::collection::btree_set(0usize..7, 2..=4), 1..=8)
    .prop_map(|tops| SimplicialComplex::build(7, tops.into_iter().map(|s| s.into_iter().collect::<Vec<_>>())).unwrap())
}

proptest! {
  #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

  #[test]
  fn every_face_is_present(k in complex_strategy()) {
    for d in 1..=k.dimension() {
      for s in k.simplices(d) {
        for i in 0..s.len() {
          let face: Vec<usize> = s.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| *v).collect();
          prop_assert!(k.contains(&face));
        }
      }
    }
  }

  #[test]
  fn boundary_squares_to_zero(k in complex_strategy()) {
    for d in 2..=k.dimension() {
      let prod = k.boundary_matrix::<Q>(d - 1).unwrap().mul(&k.boundary_matrix::<Q>(d).unwrap());
      prop_assert_eq!(prod.nnz(), 0);
    }
  }

  #[test]
  fn exact_characters_are_gauge_trivial(k in complex_strategy(), f in prop::collection::vec(-3i64..=3, 7)) {
    // t = 2^{δf}: equivalent to the untwisted complex.
    let pow = |e: i64| if e >= 0 { Q::from_integer(BigInt::one() << e) } else { Q::one() / Q::from_integer(BigInt::one() << -e) };
    let w: Vec<Q> = k.simplices(1).iter().map(|e| pow(f[e[1]] - f[e[0]])).collect();
    let tc = TwistedComplex::assemble(&k, Cochain::new(&k, 1, w).unwrap()).unwrap();
    prop_assert!(tc.squares_to_zero());
    prop_assert_eq!(tc.betti().betti, k.betti_numbers());
  }

  #[test]
  fn holonomy_is_gauge_invariant(f in prop::collection::vec(-2.0f64..2.0, 9), h in prop::collection::vec(-1.0f64..1.0, 2)) {
    let k = triangulations::torus9();
    // A closed θ that is not exact: pull back coordinate 1-forms of the torus
    // (vertex (i, j) = 3i + j).
    let theta: Vec<f64> = k.simplices(1).iter().map(|e| {
      let (a, b) = (e[0], e[1]);
      let di = ((b / 3) as i64 - (a / 3) as i64 + 3).rem_euclid(3) as f64;
      let dj = ((b % 3) as i64 - (a % 3) as i64 + 3).rem_euclid(3) as f64;
      let wrap = |d: f64| if d == 2.0 { -1.0 } else { d };
      h[0] * wrap(di) + h[1] * wrap(dj)
    }).collect();
    let theta = LeeCocycle::new(&k, Cochain::new(&k, 1, theta).unwrap()).unwrap();
    let df = Cochain::new(&k, 0, f).unwrap().coboundary(&k).unwrap();
    let shifted = Cochain::new(&k, 1, theta.cochain().values().iter().zip(df.values()).map(|(a, b)| a + b).collect()).unwrap();
    for lp in fundamental_cycles(&k) {
      let a = holonomy(&k, theta.cochain(), &lp).unwrap();
      let b = holonomy(&k, &shifted, &lp).unwrap();
      prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
    }
  }

  #[test]
  fn circle_cohomology_depends_only_on_holonomy(m in 3usize..=15, parts in prop::collection::vec((1i64..=5, 1i64..=5), 15)) {
    let k = triangulations::circle(m);
    // Arbitrary positive weights; the holonomy around the loop is their
    // oriented product.
    let w: Vec<Q> = (0..k.count(1)).map(|i| q(parts[i].0, parts[i].1)).collect();
    let mut hol = Q::one();
    for e in k.simplices(1) {
      let wi = w[k.index_of(e).unwrap()].clone();
      // Edges (i, i+1) run along the loop, (0, m−1) against it.
      hol = if e[1] == e[0] + 1 { hol * wi } else { hol / wi };
    }
    let b = TwistedComplex::assemble(&k, Cochain::new(&k, 1, w).unwrap()).unwrap().betti();
    let expected = if hol.is_one() { vec![1, 1] } else { vec![0, 0] };
    prop_assert_eq!(b.betti, expected);
  }

  #[test]
  fn float_backend_agrees_with_rational(k in complex_strategy(), f in prop::collection::vec(-3i64..=3, 7), bump in 1i64..=4) {
    // Exact character on the graph part plus a non-trivial scalar on edges
    // not in any triangle, which keeps the cocycle condition.
    let in_triangle: std::collections::BTreeSet<Vec<usize>> =
      k.simplices(2).iter().flat_map(|t| [vec![t[0], t[1]], vec![t[0], t[2]], vec![t[1], t[2]]]).collect();
    let w: Vec<Q> = k.simplices(1).iter().map(|e| {
      let base = q(1 << (f[e[1]] + 3), 1 << (f[e[0]] + 3));
      if in_triangle.contains(e) { base } else { base * q(bump + 1, 1) }
    }).collect();
    let rational = TwistedComplex::assemble(&k, Cochain::new(&k, 1, w.clone()).unwrap()).unwrap().betti();
    let wf: Vec<f64> = w.iter().map(novikov::Scalar::to_f64).collect();
    let float = TwistedComplex::assemble(&k, Cochain::new(&k, 1, wf).unwrap()).unwrap().betti();
    prop_assert_eq!(&rational.betti, &float.betti);
    prop_assert!(!float.low_confidence);
  }

  #[test]
  fn twisted_differentials_square_to_zero(seed in any::<u64>(), n in 1usize..=3) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let theta = ConstantLeeForm::new((0..2 * n).map(|i| ((seed >> i) % 7) as f64 * 0.3 - 0.9).collect()).unwrap();
    let f = random_form(&mut rng, n, 4, 3, |_| true);
    for op in [Operator::DTheta, Operator::DelTheta, Operator::DelBarTheta] {
      let twice = apply_operator(op, &apply_operator(op, &f, &theta).unwrap(), &theta).unwrap();
      prop_assert!(twice.max_abs() <= 1e-12 * f.max_abs().max(1.0) * 100.0);
    }
  }

  #[test]
  fn averaging_commutes_with_twisted_d(seed in any::<u64>(), n in 1usize..=2, dir in 0usize..4) {
    let dir = dir % (2 * n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let theta = ConstantLeeForm::new((0..2 * n).map(|i| ((seed >> (3 * i)) % 5) as f64 * 0.4).collect()).unwrap();
    let f = random_form(&mut rng, n, 4, 4, |_| true);
    let a = circle_average(&apply_operator(Operator::DTheta, &f, &theta).unwrap(), dir).unwrap();
    let b = apply_operator(Operator::DTheta, &circle_average(&f, dir).unwrap(), &theta).unwrap();
    prop_assert!(a.sub(&b).unwrap().max_abs() <= 1e-12);
  }

  #[test]
  fn hopf_potential_is_automorphic_and_metric_positive(
    moduli in prop::collection::vec(0.2f64..0.8, 1..=3),
    phases in prop::collection::vec(-3.0f64..3.0, 3),
    log_c in 0.5f64..3.0,
    z in prop::collection::vec(-5.0f64..5.0, 6),
  ) {
    let alpha: Vec<Complex64> = moduli.iter().zip(&phases).map(|(m, p)| Complex64::from_polar(*m, *p)).collect();
    let h = HopfData::new(alpha, log_c.exp()).unwrap();
    // Stay off the hyperplanes where β < 2 is not smooth.
    let mut p = nalgebra::DVector::from_column_slice(&z[..h.real_dim()]);
    for j in 0..h.n() {
      if p[2 * j].hypot(p[2 * j + 1]) < 0.1 {
        p[2 * j] += 0.5;
      }
    }
    prop_assert!(h.automorphy_residual(&p).unwrap() <= 1e-12);
    prop_assert!(h.frame(&p).unwrap().min_eigenvalue > 0.0);
  }

  #[test]
  fn deformation_respects_tolerance(periods in prop::collection::vec(-5.0f64..5.0, 1..=4), tol_exp in 1i32..=6) {
    let tol = 10f64.powi(-tol_exp);
    if let Ok(d) = rational_lee_deformation(&periods, tol, 1000) {
      prop_assert!(d.error <= tol);
      for ((p, dp), r) in periods.iter().zip(&d.deformed).zip(&d.ratios) {
        prop_assert!((p - dp).abs() <= tol);
        prop_assert!((dp - d.scale * *r.numer() as f64 / *r.denom() as f64).abs() <= 1e-12 * dp.abs().max(1.0));
      }
    }
  }
}

#[test]
fn zero_rational_is_not_a_weight() {
  let k = triangulations::circle(3);
  assert!(TwistedComplex::assemble(&k, Cochain::new(&k, 1, vec![Q::zero(), Q::one(), Q::one()]).unwrap()).is_err());
}
