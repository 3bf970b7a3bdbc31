use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default endpoint gap accepted as closed.
pub const CLOSED_TOL: f64 = 1e-9;

/// Signed number of turns of a closed sampled curve around `center`.
pub fn winding_number(curve: &[Complex64], center: Complex64) -> Result<i64> {
    winding_number_with_gap(curve, center, CLOSED_TOL)
}

/// As [`winding_number`] with an explicit closure tolerance.
///
/// Sampling too sparse for the 10:1 distance-to-spacing rule is reported as
/// `TooCoarse` with residual 1.
pub fn winding_number_with_gap(curve: &[Complex64], center: Complex64, gap_tol: f64) -> Result<i64> {
    if curve.len() < 3 {
        return Err(Error::TooCoarse { residual: 1.0 });
    }
    let gap = (curve[curve.len() - 1] - curve[0]).norm();
    if gap > gap_tol {
        return Err(Error::NotClosed { gap });
    }
    let min_dist = curve.iter().map(|p| (p - center).norm()).fold(f64::INFINITY, f64::min);
    let max_step = curve.windows(2).map(|w| (w[1] - w[0]).norm()).fold(0.0, f64::max);
    if !(min_dist > 10.0 * max_step) {
        return Err(Error::TooCoarse { residual: 1.0 });
    }
    let turns = accumulated_turns(curve, center);
    let n = turns.round();
    let residual = (turns - n).abs();
    if residual >= 0.05 {
        return Err(Error::TooCoarse { residual });
    }
    Ok(n as i64)
}

/// Continuous argument increment along the samples, in turns.
pub fn accumulated_turns(curve: &[Complex64], center: Complex64) -> f64 {
    curve
        .windows(2)
        .map(|w| ((w[1] - center) / (w[0] - center)).arg())
        .sum::<f64>()
        / TAU
}
