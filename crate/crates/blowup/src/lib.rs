//! Complex-time analysis of finite-time blow-up in planar polynomial ODEs.
//!
//! The crate compactifies a polynomial field `(f, g)` into three projective
//! charts, integrates along arbitrary paths in complex time, measures the
//! holonomy of the solution foliation and the closure discrepancy of loops
//! around blow-up times, and classifies the spectra of the equilibria at
//! infinity that govern blow-up.

pub mod algebra;
pub mod cli;
pub mod error;
pub mod equilibria;
pub mod flow;
pub mod hamiltonian;
pub mod holonomy;
pub mod normalform;
pub mod scenarios;

pub use error::{Error, Result};
pub use num_complex::Complex64;
