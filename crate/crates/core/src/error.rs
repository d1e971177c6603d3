use thiserror::Error;

/// Errors raised by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
  #[error("vertex {vertex} out of range (complex has {vertex_count} vertices)")]
  VertexOutOfRange { vertex: usize, vertex_count: usize },
  #[error("simplex {0:?} repeats a vertex")]
  DuplicateVertex(Vec<usize>),
  #[error("a complex needs at least one vertex")]
  EmptyComplex,
  #[error("degree {degree} out of range 1..={max}")]
  DegreeOutOfRange { degree: usize, max: usize },
  #[error("cochain belongs to a different complex")]
  ComplexMismatch,
  #[error("cochain of degree {found} where degree {expected} was required")]
  WrongDegree { expected: usize, found: usize },
  #[error("cochain has {found} values, complex has {expected} simplices in that degree")]
  WrongLength { expected: usize, found: usize },
  #[error("{0:?} is not a simplex of the complex")]
  MissingSimplex(Vec<usize>),
  #[error("edge path is not closed")]
  OpenPath,
  #[error("edge path is empty")]
  EmptyPath,
  #[error("cocycle condition fails on {} triangle(s)", .0.len())]
  NotClosed(Vec<crate::complex::CocycleViolation>),
  #[error("edge weight {0} is not a positive number")]
  NonPositiveWeight(String),
  #[error("invalid scalar literal {0:?}")]
  BadScalar(String),
  #[error("vertex map is not a simplicial automorphism: {0}")]
  NotAutomorphism(String),
  #[error("mapping torus needs at least 3 layers, got {0}")]
  TooFewLayers(usize),
  #[error("unknown built-in triangulation {0:?}")]
  UnknownTriangulation(String),
  #[error("unknown automorphism {0:?} for this fiber")]
  UnknownAutomorphism(String),
  #[error("invalid torus parameters: {0}")]
  InvalidTorus(String),
  #[error("spectral dimensions changed between cutoff {low} and {high}: {detail}")]
  CutoffUnstable { low: usize, high: usize, detail: String },
  #[error("form and operator live on tori of different dimension")]
  DimensionMismatch,
  #[error("invalid Hopf data: {0}")]
  InvalidHopf(String),
  #[error("point is the origin")]
  ZeroPoint,
  #[error("point lies on the hyperplane z_{coordinate} = 0 where the exponent {beta} < 2 makes the potential non-smooth")]
  SingularPoint { coordinate: usize, beta: f64 },
  #[error("no rational approximation within tolerance {tol} with denominators <= {max_denominator} (best error {best})")]
  NoApproximation { tol: f64, max_denominator: i64, best: f64 },
  #[error("invalid argument: {0}")]
  InvalidArgument(String),
  #[error("json: {0}")]
  Json(#[from] serde_json::Error),
  #[error("io: {0}")]
  Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
