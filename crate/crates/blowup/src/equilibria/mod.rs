//! Equilibria at finite points and at infinity, and their spectral classification.

mod classify;
mod rational;
mod roots;

pub use classify::{
    classify_spectrum, eigenvalues, find_equilibria, finite_equilibria, polish, spectrum_of, Domain,
    EquilibriumRecord, Resonance, SearchRegion, Spectrum, DEFAULT_DENOMINATOR_BOUND, DEFAULT_TOL,
};
pub use rational::{rational_spectral_quotient, small_divisor_scan, SmallDivisor};
pub use roots::{dedupe, horner, poly_roots};
