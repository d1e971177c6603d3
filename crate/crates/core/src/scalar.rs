//! Scalar backends: exact rationals and 64-bit floats.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, RankReport, SparseMatrix};

pub type Rational = BigRational;

/// Which arithmetic a computation runs in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
  Rational,
  Float,
}

impl FromStr for Backend {
  type Err = Error;

  fn from_str(s: &str) -> Result<Self> {
    match s {
      "rational" => Ok(Backend::Rational),
      "float" => Ok(Backend::Float),
      other => Err(Error::InvalidArgument(format!("unknown backend {other:?}"))),
    }
  }
}

impl std::fmt::Display for Backend {
  fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
    f.write_str(match self {
      Backend::Rational => "rational",
      Backend::Float => "float",
    })
  }
}

/// Field arithmetic shared by both backends.
pub trait Scalar:
  Clone
  + Debug
  + PartialEq
  + Zero
  + One
  + Neg<Output = Self>
  + Add<Output = Self>
  + Sub<Output = Self>
  + Mul<Output = Self>
  + Div<Output = Self>
  + Send
  + Sync
  + 'static {
  const BACKEND: Backend;

  fn rank(matrix: &SparseMatrix<Self>) -> RankReport;

  /// Zero for rationals; `|x| <= 1e-12` for floats.
  fn negligible(&self) -> bool;

  fn is_positive(&self) -> bool;

  fn to_f64(&self) -> f64;

  fn from_f64(x: f64) -> Option<Self>;

  /// JSON encoding: `"p/q"` strings for rationals, numbers for floats.
  fn to_json(&self) -> serde_json::Value;

  fn from_json(value: &serde_json::Value) -> Result<Self>;
}

/// Entrywise tolerance used for float identities such as `D² = 0`.
pub const FLOAT_IDENTITY_TOL: f64 = 1e-12;

impl Scalar for f64 {
  const BACKEND: Backend = Backend::Float;

  fn rank(matrix: &SparseMatrix<Self>) -> RankReport { linalg::float_rank(matrix, linalg::EPS_RANK) }

  fn negligible(&self) -> bool { self.abs() <= FLOAT_IDENTITY_TOL }

  fn is_positive(&self) -> bool { *self > 0.0 && self.is_finite() }

  fn to_f64(&self) -> f64 { *self }

  fn from_f64(x: f64) -> Option<Self> { Some(x) }

  fn to_json(&self) -> serde_json::Value { serde_json::json!(*self) }

  fn from_json(value: &serde_json::Value) -> Result<Self> {
    match value {
      serde_json::Value::Number(n) => n.as_f64().ok_or_else(|| Error::BadScalar(n.to_string())),
      serde_json::Value::String(s) => {
        // Accept "p/q" literals too so rational inputs can drive the float backend.
        if let Ok(q) = parse_rational(s) {
          Ok(Scalar::to_f64(&q))
        } else {
          s.trim().parse::<f64>().map_err(|_| Error::BadScalar(s.clone()))
        }
      }
      other => Err(Error::BadScalar(other.to_string())),
    }
  }
}

impl Scalar for Rational {
  const BACKEND: Backend = Backend::Rational;

  fn rank(matrix: &SparseMatrix<Self>) -> RankReport { linalg::rational_rank(matrix) }

  fn negligible(&self) -> bool { self.is_zero() }

  fn is_positive(&self) -> bool { Signed::is_positive(self) }

  fn to_f64(&self) -> f64 {
    ToPrimitive::to_f64(self).unwrap_or_else(|| {
      let n = self.numer().to_f64().unwrap_or(f64::NAN);
      let d = self.denom().to_f64().unwrap_or(f64::NAN);
      n / d
    })
  }

  fn from_f64(x: f64) -> Option<Self> { BigRational::from_float(x) }

  fn to_json(&self) -> serde_json::Value { serde_json::Value::String(format_rational(self)) }

  fn from_json(value: &serde_json::Value) -> Result<Self> {
    match value {
      serde_json::Value::String(s) => parse_rational(s),
      serde_json::Value::Number(n) => {
        if let Some(i) = n.as_i64() {
          Ok(Rational::from_integer(BigInt::from(i)))
        } else {
          Err(Error::BadScalar(format!("{n} (non-integer rationals must be \"p/q\" strings)")))
        }
      }
      other => Err(Error::BadScalar(other.to_string())),
    }
  }
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
  let s = s.trim();
  let bad = || Error::BadScalar(s.to_string());
  let (num, den) = match s.split_once('/') {
    Some((n, d)) => (n.trim(), d.trim()),
    None => (s, "1"),
  };
  let num: BigInt = num.parse().map_err(|_| bad())?;
  let den: BigInt = den.parse().map_err(|_| bad())?;
  if den.is_zero() {
    return Err(bad());
  }
  Ok(Rational::new(num, den))
}

pub fn format_rational(q: &Rational) -> String { format!("{}/{}", q.numer(), q.denom()) }

/// Shorthand for small rational literals.
pub fn rat(num: i64, den: i64) -> Rational { Rational::new(BigInt::from(num), BigInt::from(den)) }

#[cfg(test)]
mod tests {
  use super::*;

  #[test]
  fn rational_literals() {
    assert_eq!(parse_rational("6/4").unwrap(), rat(3, 2));
    assert_eq!(parse_rational(" -2 ").unwrap(), rat(-2, 1));
    assert!(parse_rational("1/0").is_err());
    assert!(parse_rational("x").is_err());
    assert_eq!(format_rational(&rat(2, 1)), "2/1");
  }

  #[test]
  fn json_scalars() {
    let q = Rational::from_json(&serde_json::json!("1/2")).unwrap();
    assert_eq!(q, rat(1, 2));
    assert!(Rational::from_json(&serde_json::json!(0.5)).is_err());
    assert_eq!(f64::from_json(&serde_json::json!("1/4")).unwrap(), 0.25);
    assert_eq!(f64::from_json(&serde_json::json!(2.5)).unwrap(), 2.5);
  }
}
