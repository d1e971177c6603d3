//! Twisted (Morse–Novikov) cohomology of finite simplicial complexes with
//! positive real characters, spectral twisted de Rham and Bott–Chern
//! computations on flat complex tori, and pointwise checks of locally
//! conformally Kähler structure equations on diagonal Hopf manifolds.

pub mod cli;
pub mod complex;
pub mod error;
pub mod hopf;
pub mod io;
pub mod linalg;
pub mod mapping_torus;
pub mod scalar;
pub mod selftest;
pub mod spectral;
pub mod triangulations;
pub mod twisted;

pub use complex::{Cochain, LeeCocycle, SimplicialComplex};
pub use error::{Error, Result};
pub use scalar::{Backend, Rational, Scalar};
pub use twisted::{TwistedBetti, TwistedComplex};
