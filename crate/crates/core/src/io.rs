//! JSON formats for complexes and cochains.
//!
//! Complex: `{"vertices": 3, "simplices": [[0,1],[1,2],[0,2]]}` (maximal
//! simplices suffice; faces are added).
//!
//! Cochain: `{"degree": 1, "values": {"0,1": "2/1", "1,2": 1, "0,2": "2"}}`.
//! Unlisted simplices take `default` (1 for weights). Rationals are `"p/q"`
//! strings, floats are numbers.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::complex::{Cochain, SimplicialComplex};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
  pub vertices: usize,
  pub simplices: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CochainFile {
  pub degree: usize,
  pub values: BTreeMap<String, Value>,
}

pub fn parse_complex(text: &str) -> Result<SimplicialComplex> {
  let f: ComplexFile = serde_json::from_str(text)?;
  SimplicialComplex::build(f.vertices, f.simplices)
}

pub fn complex_to_json(complex: &SimplicialComplex) -> Value {
  serde_json::to_value(ComplexFile { vertices: complex.vertex_count(), simplices: complex.maximal_simplices() }).expect("plain data")
}

fn parse_key(key: &str) -> Result<Vec<usize>> {
  key
    .split(',')
    .map(|v| v.trim().parse::<usize>().map_err(|_| Error::InvalidArgument(format!("bad simplex key {key:?}"))))
    .collect()
}

pub fn parse_cochain<S: Scalar>(complex: &SimplicialComplex, text: &str, default: S) -> Result<Cochain<S>> {
  let f: CochainFile = serde_json::from_str(text)?;
  let pairs = f.values.iter().map(|(k, v)| Ok((parse_key(k)?, S::from_json(v)?))).collect::<Result<Vec<_>>>()?;
  Cochain::from_pairs(complex, f.degree, pairs.iter().map(|(s, v)| (s.as_slice(), v.clone())), default)
}

pub fn cochain_to_json<S: Scalar>(complex: &SimplicialComplex, cochain: &Cochain<S>) -> Value {
  let values: BTreeMap<String, Value> = complex
    .simplices(cochain.degree())
    .iter()
    .zip(cochain.values())
    .map(|(s, v)| (s.iter().map(usize::to_string).collect::<Vec<_>>().join(","), v.to_json()))
    .collect();
  serde_json::json!({ "degree": cochain.degree(), "values": values })
}

pub fn read_complex(path: &Path) -> Result<SimplicialComplex> { parse_complex(&std::fs::read_to_string(path)?) }

pub fn read_cochain<S: Scalar>(complex: &SimplicialComplex, path: &Path, default: S) -> Result<Cochain<S>> {
  parse_cochain(complex, &std::fs::read_to_string(path)?, default)
}

#[cfg(test)]
mod tests {
  use super::*;
  use crate::scalar::{rat, Rational};
  use crate::triangulations;

  #[test]
  fn round_trip_complex_and_cochain() {
    let k = triangulations::torus9();
    let back = parse_complex(&complex_to_json(&k).to_string()).unwrap();
    assert_eq!(back.f_vector(), k.f_vector());
    let c = Cochain::new(&k, 1, (0..k.count(1)).map(|i| rat(i as i64 + 1, 3)).collect()).unwrap();
    let back = parse_cochain::<Rational>(&k, &cochain_to_json(&k, &c).to_string(), rat(1, 1)).unwrap();
    assert_eq!(back, c);
  }

  #[test]
  fn defaults_and_errors() {
    let k = triangulations::circle(3);
    let w = parse_cochain::<Rational>(&k, r#"{"degree":1,"values":{"2,0":"2"}}"#, rat(1, 1)).unwrap();
    assert_eq!(w.values(), &[rat(1, 1), rat(2, 1), rat(1, 1)]);
    let f = parse_cochain::<f64>(&k, r#"{"degree":1,"values":{"0,1":0.5}}"#, 1.0).unwrap();
    assert_eq!(f.values()[0], 0.5);
    assert!(parse_complex("{\"vertices\":2}").is_err());
    assert!(parse_complex(r#"{"vertices":2,"simplices":[[0,5]]}"#).is_err());
    assert!(parse_cochain::<Rational>(&k, r#"{"degree":1,"values":{"0,x":"1"}}"#, rat(1, 1)).is_err());
    assert!(parse_cochain::<Rational>(&k, r#"{"degree":1,"values":{"0,1":0.5}}"#, rat(1, 1)).is_err());
    assert!(parse_cochain::<Rational>(&k, r#"{"degree":2,"values":{"0,1,2":"1"}}"#, rat(1, 1)).is_err());
  }
}
