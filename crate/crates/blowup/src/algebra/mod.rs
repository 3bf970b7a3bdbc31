//! Complex polynomial algebra and the projective chart construction.

mod charts;
mod poly;

pub use charts::{
    homogenize, jacobian, map_point, to_charts, velocity_in_xy, C2, Chart, ChartSystem, Mat2,
    PlanarField, TrivariatePolynomial,
};
pub use poly::{parse_term, BivariatePolynomial, PRUNE};

use num_complex::Complex64;

/// `p(x, y)`
pub fn evaluate(p: &BivariatePolynomial, x: Complex64, y: Complex64) -> Complex64 {
    p.evaluate(x, y)
}
