//! Command-line front end. Every run produces a JSON report with sorted keys,
//! the parsed configuration, the result, a pass flag, the crate version and
//! wall-clock timing.
//!
//! Exit codes: 0 when every requested check passes, 1 when a check fails or a
//! computation cannot complete, 2 for unparseable arguments or malformed input.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::complex::{Cochain, LeeCocycle, SimplicialComplex};
use crate::error::{Error, Result};
use crate::hopf::{annulus_points, deformation_threshold, hopf_verify, rational_lee_deformation, BumpPerturbation, Check, HopfData, VerifyConfig};
use crate::io;
use crate::mapping_torus::{vanishing_check, SimplicialAutomorphism};
use crate::scalar::{parse_rational, Backend, Rational};
use crate::selftest;
use crate::spectral::{bc_exact_sequence_report, bott_chern_dims, conjugate_dolbeault_dims, de_rham_dims, dolbeault_dims, ConstantLeeForm, FlatTorus};
use crate::triangulations;
use crate::twisted::{TwistedBetti, TwistedComplex};

/// Environment variable fixing the worker thread count.
pub const THREADS_ENV: &str = "NOVIKOV_THREADS";

#[derive(Debug, Parser)]
#[command(name = "novikov", version, about = "Morse-Novikov cohomology, spectral torus models and Hopf LCK checks")]
pub struct Cli {
  /// Write the JSON report here instead of stdout.
  #[arg(long, global = true)]
  pub output: Option<PathBuf>,
  /// Suppress the human-readable summary on stderr.
  #[arg(long, global = true)]
  pub quiet: bool,
  #[command(subcommand)]
  pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
  /// Untwisted Betti numbers over the rationals.
  Betti(BettiArgs),
  /// Twisted Betti numbers for a character given by edge weights.
  MnBetti(MnBettiArgs),
  /// Mapping torus of a built-in fiber with the pulled-back base character.
  Suspend(SuspendArgs),
  /// Twisted cohomology dimensions on a flat torus by Fourier truncation.
  TorusSpectral(TorusArgs),
  /// Pointwise checks on a diagonal Hopf manifold.
  HopfVerify(HopfArgs),
  /// Rational approximation of Lee-class periods.
  DeformLee(DeformArgs),
  /// Runs the acceptance checks.
  Selftest(SelftestArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct BettiArgs {
  /// JSON file or built-in name (point, circle3, circle4, tetra, torus9, rp2_6).
  #[arg(long)]
  pub complex: String,
}

#[derive(Debug, Args, Serialize)]
pub struct MnBettiArgs {
  /// JSON file or built-in name.
  #[arg(long)]
  pub complex: String,
  /// Edge weights `t(e)` as a 1-cochain file; unlisted edges get 1.
  #[arg(long, conflicts_with = "theta")]
  pub weights: Option<PathBuf>,
  /// Additive Lee cocycle `θ` as a 1-cochain file (float backend only).
  #[arg(long)]
  pub theta: Option<PathBuf>,
  #[arg(long, default_value = "rational")]
  pub backend: String,
}

#[derive(Debug, Args, Serialize)]
pub struct SuspendArgs {
  #[arg(long)]
  pub fiber: String,
  /// Automorphism name: `id` or `rot`.
  #[arg(long, default_value = "id")]
  pub auto: String,
  #[arg(long, default_value_t = 3)]
  pub layers: usize,
  /// Holonomy of the base loop, `p/q`.
  #[arg(long, default_value = "2/1")]
  pub t: String,
  /// Fail unless every twisted Betti number vanishes.
  #[arg(long)]
  pub check_vanishing: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct TorusArgs {
  /// Complex dimension, 1 to 3.
  #[arg(long)]
  pub n: usize,
  /// Constant Lee form coefficients `c_1,…,c_{2n}`; missing entries are 0.
  #[arg(long, default_value = "0", allow_hyphen_values = true)]
  pub theta: String,
  #[arg(long, default_value_t = 8)]
  pub cutoff: usize,
  /// `dims` (all four cohomologies) or `bc-sequence`.
  #[arg(long, default_value = "dims")]
  pub report: String,
}

#[derive(Debug, Args, Serialize)]
pub struct HopfArgs {
  /// Eigenvalues, comma-separated; each `re` or `re:im`.
  #[arg(long, allow_hyphen_values = true)]
  pub alpha: String,
  #[arg(long = "C")]
  pub c: f64,
  #[arg(long, default_value_t = 1000)]
  pub points: usize,
  #[arg(long, default_value_t = 42)]
  pub seed: u64,
  #[arg(long, default_value = "automorphy,positivity,structure,identity")]
  pub checks: String,
  /// Finite-difference step.
  #[arg(long, default_value_t = 1e-3)]
  pub step: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct DeformArgs {
  #[arg(long, allow_hyphen_values = true)]
  pub periods: String,
  #[arg(long)]
  pub tol: f64,
  #[arg(long, default_value_t = 100)]
  pub dmax: i64,
  /// Also sweep a Lee perturbation on this Hopf manifold (needs `--C`).
  #[arg(long, allow_hyphen_values = true, requires = "c")]
  pub alpha: Option<String>,
  #[arg(long = "C")]
  pub c: Option<f64>,
  #[arg(long, default_value_t = 1000)]
  pub points: usize,
  #[arg(long, default_value_t = 42)]
  pub seed: u64,
  #[arg(long, default_value_t = 20.0)]
  pub epsilon_max: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct SelftestArgs {
  /// Comma-separated criterion numbers; default all.
  #[arg(long)]
  pub criteria: Option<String>,
}

/// Outcome of one invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
  pub code: i32,
  pub report: Value,
  /// Human-readable lines, empty with `--quiet`.
  pub summary: Vec<String>,
  pub output: Option<PathBuf>,
}

fn is_input_error(e: &Error) -> bool { !matches!(e, Error::CutoffUnstable { .. } | Error::NoApproximation { .. } | Error::SingularPoint { .. } | Error::ZeroPoint) }

struct Computed {
  config: Value,
  result: Value,
  pass: bool,
  summary: Vec<String>,
}

fn split_list(s: &str) -> impl Iterator<Item = &str> { s.split(',').map(str::trim).filter(|x| !x.is_empty()) }

fn parse_f64_list(s: &str) -> Result<Vec<f64>> {
  split_list(s).map(|x| x.parse::<f64>().map_err(|_| Error::InvalidArgument(format!("not a number: {x:?}")))).collect()
}

pub fn parse_alpha(s: &str) -> Result<Vec<Complex64>> {
  split_list(s)
    .map(|x| {
      let bad = || Error::InvalidArgument(format!("bad eigenvalue {x:?}"));
      match x.split_once(':') {
        Some((re, im)) => Ok(Complex64::new(re.parse().map_err(|_| bad())?, im.parse().map_err(|_| bad())?)),
        None => Ok(Complex64::new(x.parse().map_err(|_| bad())?, 0.0)),
      }
    })
    .collect()
}

/// A path when one exists, otherwise a built-in triangulation name.
pub fn load_complex(spec: &str) -> Result<SimplicialComplex> {
  let path = Path::new(spec);
  if path.exists() {
    io::read_complex(path)
  } else {
    triangulations::by_name(spec)
  }
}

fn confidence(b: &TwistedBetti) -> &'static str {
  match (b.backend, b.low_confidence) {
    (Backend::Rational, _) => "exact",
    (Backend::Float, false) => "high",
    (Backend::Float, true) => "low",
  }
}

fn betti(a: &BettiArgs) -> Result<Computed> {
  let k = load_complex(&a.complex)?;
  let b = k.betti_numbers();
  Ok(Computed {
    config: json!(a),
    summary: vec![format!("betti {b:?}  f-vector {:?}", k.f_vector())],
    result: json!({ "betti": b, "euler": k.euler_characteristic(), "f_vector": k.f_vector() }),
    pass: true,
  })
}

fn mn_betti(a: &MnBettiArgs) -> Result<Computed> {
  let k = load_complex(&a.complex)?;
  let backend: Backend = a.backend.parse()?;
  let b = match (backend, &a.weights, &a.theta) {
    (Backend::Rational, _, Some(_)) => {
      return Err(Error::InvalidArgument("--theta needs the float backend; give exact weights with --weights".into()))
    }
    (Backend::Rational, w, None) => {
      let w = match w {
        Some(p) => io::read_cochain::<Rational>(&k, p, Rational::from_integer(1.into()))?,
        None => Cochain::constant(&k, 1, Rational::from_integer(1.into())),
      };
      TwistedComplex::assemble(&k, w)?.betti()
    }
    (Backend::Float, Some(p), None) => TwistedComplex::assemble(&k, io::read_cochain::<f64>(&k, p, 1.0)?)?.betti(),
    (Backend::Float, None, Some(p)) => {
      let theta = LeeCocycle::new(&k, io::read_cochain::<f64>(&k, p, 0.0)?)?;
      TwistedComplex::from_lee(&k, &theta)?.betti()
    }
    (Backend::Float, None, None) => TwistedComplex::<f64>::untwisted(&k).betti(),
    (Backend::Float, Some(_), Some(_)) => unreachable!("clap rejects both"),
  };
  let conf = confidence(&b);
  Ok(Computed {
    config: json!(a),
    summary: vec![format!("twisted betti {:?}  euler {}  backend {}  confidence {conf}", b.betti, b.euler, b.backend)],
    result: json!({
      "betti": b.betti, "euler": b.euler, "backend": b.backend, "confidence": conf,
      "min_separation": b.min_separation, "euler_identity": b.euler_sum() == b.euler,
    }),
    pass: b.euler_sum() == b.euler,
  })
}

fn suspend(a: &SuspendArgs) -> Result<Computed> {
  let w = triangulations::by_name(&a.fiber)?;
  let phi = SimplicialAutomorphism::new(&w, triangulations::automorphism(&a.fiber, &a.auto)?)?;
  let t = parse_rational(&a.t)?;
  let r = vanishing_check(&w, &phi, &t, a.layers)?;
  let pass = !a.check_vanishing || r.pass;
  Ok(Computed {
    config: json!(a),
    summary: vec![format!(
      "f-vector {:?}  base holonomy {}  twisted betti {:?}  vanishing {}",
      r.f_vector, r.base_holonomy, r.betti.betti, r.pass
    )],
    result: json!(r),
    pass,
  })
}

fn torus_spectral(a: &TorusArgs) -> Result<Computed> {
  let torus = FlatTorus::new(a.n, a.cutoff)?;
  let mut coeffs = parse_f64_list(&a.theta)?;
  if coeffs.len() > 2 * a.n {
    return Err(Error::InvalidArgument(format!("theta has {} coefficients, at most {} allowed", coeffs.len(), 2 * a.n)));
  }
  coeffs.resize(2 * a.n, 0.0);
  let theta = ConstantLeeForm::new(coeffs)?;
  match a.report.as_str() {
    "dims" => {
      let dr = de_rham_dims(&torus, &theta)?;
      let dol = dolbeault_dims(&torus, &theta)?;
      let conj = conjugate_dolbeault_dims(&torus, &theta)?;
      let bc = bott_chern_dims(&torus, &theta)?;
      let min_sep = [dr.min_separation, dol.min_separation, conj.min_separation, bc.min_separation].into_iter().fold(f64::INFINITY, f64::min);
      let low = dr.low_confidence_blocks + dol.low_confidence_blocks + conj.low_confidence_blocks + bc.low_confidence_blocks;
      Ok(Computed {
        config: json!(a),
        summary: vec![
          format!("de rham {:?}", dr.dims[0]),
          format!("dolbeault {:?}", dol.dims),
          format!("conjugate dolbeault {:?}", conj.dims),
          format!("bott-chern {:?}", bc.dims),
        ],
        result: json!({
          "theta": theta.coefficients(), "de_rham": dr.dims[0], "dolbeault": dol.dims, "conjugate_dolbeault": conj.dims,
          "bott_chern": bc.dims, "checked_cutoff": dr.checked_cutoff, "low_confidence_blocks": low,
          "min_separation": min_sep,
        }),
        pass: low == 0,
      })
    }
    "bc-sequence" => {
      let r = bc_exact_sequence_report(&torus, &theta)?;
      Ok(Computed {
        config: json!(a),
        summary: vec![format!(
          "h01 {} h10 {} h11_bc {} h2 {}  rank(first) {}  dim ker(nu) {}  exact {}",
          r.h1_holomorphic, r.h1_conjugate, r.h11_bott_chern, r.h2_twisted, r.rank_first_map, r.dim_ker_nu, r.exact
        )],
        pass: r.pass,
        result: json!(r),
      })
    }
    other => Err(Error::InvalidArgument(format!("unknown report {other:?} (dims or bc-sequence)"))),
  }
}

fn hopf(a: &HopfArgs) -> Result<Computed> {
  let h = HopfData::new(parse_alpha(&a.alpha)?, a.c)?;
  let checks = split_list(&a.checks).map(str::parse::<Check>).collect::<Result<Vec<_>>>()?;
  let cfg = VerifyConfig { points: a.points, seed: a.seed, checks, step: a.step, ..VerifyConfig::default() };
  let r = hopf_verify(&h, &cfg)?;
  let summary = r.checks.iter().map(|c| format!("{:<11} {}", format!("{:?}", c.check).to_lowercase(), if c.pass { "PASS" } else { "FAIL" })).collect();
  Ok(Computed { config: json!(a), summary, pass: r.pass, result: json!(r) })
}

fn deform(a: &DeformArgs) -> Result<Computed> {
  let periods = parse_f64_list(&a.periods)?;
  let d = rational_lee_deformation(&periods, a.tol, a.dmax)?;
  let ratios: Vec<String> = d.ratios.iter().map(|r| format!("{}/{}", r.numer(), r.denom())).collect();
  let mut summary = vec![format!("scale {}  ratios {:?}  error {:e}", d.scale, ratios, d.error)];
  let mut result = json!({ "deformation": d });
  let mut pass = true;
  if let (Some(alpha), Some(c)) = (&a.alpha, a.c) {
    let h = HopfData::new(parse_alpha(alpha)?, c)?;
    let template = BumpPerturbation::new(h, 0, 0.5, 0.0)?;
    let points = annulus_points(template.hopf.real_dim(), a.points, 0.1, 10.0, a.seed);
    let t = deformation_threshold(&template, &points, a.epsilon_max, 40)?;
    summary.push(format!("threshold {:e} (reached {})  min eigenvalue at half {:e}", t.threshold, t.reached, t.half_threshold_min_eigenvalue));
    pass = t.base_min_eigenvalue > 0.0 && t.positive_at_half;
    result["threshold"] = json!(t);
  }
  Ok(Computed { config: json!(a), summary, result, pass })
}

fn self_test(a: &SelftestArgs) -> Result<Computed> {
  let ids: Vec<usize> = match &a.criteria {
    None => (1..=10).collect(),
    Some(s) => split_list(s)
      .map(|x| match x.parse::<usize>() {
        Ok(i) if (1..=10).contains(&i) => Ok(i),
        _ => Err(Error::InvalidArgument(format!("criterion {x:?} not in 1..=10"))),
      })
      .collect::<Result<_>>()?,
  };
  let results: Vec<_> = ids.into_iter().map(selftest::criterion).collect();
  let summary = results.iter().map(|r| format!("{} {:>2} {}", if r.pass { "PASS" } else { "FAIL" }, r.id, r.name)).collect();
  Ok(Computed { config: json!(a), summary, pass: results.iter().all(|r| r.pass), result: json!({ "criteria": results }) })
}

fn dispatch(command: &Command) -> (&'static str, Result<Computed>) {
  match command {
    Command::Betti(a) => ("betti", betti(a)),
    Command::MnBetti(a) => ("mn-betti", mn_betti(a)),
    Command::Suspend(a) => ("suspend", suspend(a)),
    Command::TorusSpectral(a) => ("torus-spectral", torus_spectral(a)),
    Command::HopfVerify(a) => ("hopf-verify", hopf(a)),
    Command::DeformLee(a) => ("deform-lee", deform(a)),
    Command::Selftest(a) => ("selftest", self_test(a)),
  }
}

fn threads_from_env() -> std::result::Result<Option<usize>, String> {
  match std::env::var(THREADS_ENV) {
    Err(_) => Ok(None),
    Ok(v) => match v.trim().parse::<usize>() {
      Ok(n) if n > 0 => Ok(Some(n)),
      _ => Err(format!("{THREADS_ENV}={v:?} is not a positive integer")),
    },
  }
}

fn versions() -> Value {
  json!({ "novikov": env!("CARGO_PKG_VERSION"), "report_format": 1 })
}

/// Parses `argv` (including the program name), runs the subcommand and writes
/// the report to `--output` when given. Never panics on bad input.
pub fn run<I, T>(argv: I) -> Outcome
where
  I: IntoIterator<Item = T>,
  T: Into<OsString> + Clone,
{
  let start = Instant::now();
  let cli = match Cli::try_parse_from(argv) {
    Ok(c) => c,
    Err(e) => {
      let code = if e.use_stderr() { 2 } else { 0 };
      return Outcome {
        code,
        report: json!({ "pass": code == 0, "error": e.to_string(), "version": versions() }),
        summary: vec![e.to_string()],
        output: None,
      };
    }
  };
  let threads = threads_from_env();
  let (command, computed) = match &threads {
    Err(msg) => ("invalid", Err(Error::InvalidArgument(msg.clone()))),
    Ok(n) => {
      let pool = rayon::ThreadPoolBuilder::new().num_threads(n.unwrap_or(0)).build();
      match pool {
        Ok(pool) => pool.install(|| dispatch(&cli.command)),
        Err(e) => ("invalid", Err(Error::InvalidArgument(e.to_string()))),
      }
    }
  };
  let thread_info = json!({
    "env": THREADS_ENV,
    "requested": threads.as_ref().ok().copied().flatten(),
  });
  let elapsed = start.elapsed().as_secs_f64();
  let (code, mut report, summary) = match computed {
    Ok(c) => (
      if c.pass { 0 } else { 1 },
      json!({ "command": command, "config": c.config, "result": c.result, "pass": c.pass }),
      c.summary,
    ),
    Err(e) => {
      let code = if is_input_error(&e) { 2 } else { 1 };
      (code, json!({ "command": command, "pass": false, "error": e.to_string() }), vec![format!("error: {e}")])
    }
  };
  report["version"] = versions();
  report["threads"] = thread_info;
  report["timing"] = json!({ "wall_seconds": elapsed });
  let mut outcome = Outcome { code, report, summary: if cli.quiet { Vec::new() } else { summary }, output: cli.output.clone() };
  if let Some(path) = &cli.output {
    let text = serde_json::to_string_pretty(&outcome.report).expect("json value");
    if let Err(e) = std::fs::write(path, text + "\n") {
      outcome.summary.push(format!("error: cannot write {}: {e}", path.display()));
      outcome.code = 2;
    }
  }
  outcome
}

/// Runs and emits: the report to stdout unless `--output` was given, the
/// summary to stderr. Returns the exit code.
pub fn main<I, T>(argv: I) -> i32
where
  I: IntoIterator<Item = T>,
  T: Into<OsString> + Clone,
{
  let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
  // --help and --version print plain text.
  if let Err(e) = Cli::try_parse_from(&argv) {
    if !e.use_stderr() {
      print!("{e}");
      return 0;
    }
  }
  let outcome = run(argv);
  if outcome.output.is_none() {
    println!("{}", serde_json::to_string_pretty(&outcome.report).expect("json value"));
  }
  for line in &outcome.summary {
    eprintln!("{line}");
  }
  outcome.code
}

/// Report with the timing field removed, for reproducibility comparisons.
pub fn without_timing(report: &Value) -> Value {
  let mut r = report.clone();
  if let Some(m) = r.as_object_mut() {
    m.remove("timing");
  }
  r
}

#[cfg(test)]
mod tests {
  use super::*;

  fn run_quiet(args: &[&str]) -> Outcome {
    let mut argv = vec!["novikov", "--quiet"];
    argv.extend_from_slice(args);
    run(argv)
  }

  #[test]
  fn parse_helpers() {
    assert_eq!(parse_alpha("0.5, 0.1:-0.2").unwrap(), vec![Complex64::new(0.5, 0.0), Complex64::new(0.1, -0.2)]);
    assert!(parse_alpha("x").is_err());
    assert_eq!(parse_f64_list("1,-2.5").unwrap(), vec![1.0, -2.5]);
  }

  #[test]
  fn builtin_betti_and_twisted_betti() {
    let o = run_quiet(&["betti", "--complex", "torus9"]);
    assert_eq!(o.code, 0);
    assert_eq!(o.report["result"]["betti"], json!([1, 2, 1]));
    let o = run_quiet(&["mn-betti", "--complex", "circle4", "--backend", "float"]);
    assert_eq!(o.report["result"]["betti"], json!([1, 1]));
    assert_eq!(o.report["result"]["confidence"], json!("high"));
  }

  #[test]
  fn exit_codes() {
    assert_eq!(run_quiet(&["frobnicate"]).code, 2);
    assert_eq!(run_quiet(&["betti", "--complex", "klein_bottle"]).code, 2);
    assert_eq!(run_quiet(&["suspend", "--fiber", "circle3", "--t", "1/1", "--check-vanishing"]).code, 1);
    assert_eq!(run_quiet(&["suspend", "--fiber", "circle3", "--t", "2/1", "--check-vanishing"]).code, 0);
    assert_eq!(run_quiet(&["deform-lee", "--periods", "1,1.41421356", "--tol", "1e-6", "--dmax", "10"]).code, 1);
    assert_eq!(run_quiet(&["torus-spectral", "--n", "1", "--theta", "1,0,0"]).code, 2);
    assert_eq!(run_quiet(&["hopf-verify", "--alpha", "1.5", "--C", "2"]).code, 2);
  }
}
