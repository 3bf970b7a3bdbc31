//! The Riccati flow `x' = x² − 1` is periodic in imaginary time with period `iπ`.

use std::f64::consts::PI;

use blowup::algebra::{map_point, to_charts, Chart};
use blowup::flow::{integrate_path, IntegrationConfig, TimePath};
use blowup::scenarios::catalog_get;
use blowup::Complex64;

fn main() -> blowup::Result<()> {
    let p = [("a", 1.0), ("e1", 1.0), ("e2", -1.0)].map(|(k, v)| (k.to_string(), v)).into();
    let sys = to_charts(&catalog_get("riccati", &p)?.field())?;
    for x0 in [Complex64::new(0.5, 0.0), Complex64::new(3.0, 0.0), Complex64::new(0.1, -0.8)] {
        for span in [PI / 2.0, PI] {
            let path = TimePath::line(Complex64::new(0.0, 0.0), Complex64::new(0.0, span));
            let tr = integrate_path(&sys, Chart::XY, [x0, Complex64::new(0.0, 0.0)], &path, &IntegrationConfig::default(), None)?;
            match map_point(tr.last().chart, Chart::XY, tr.last().coords) {
                Some(p) => println!("x0 = {x0:.2}  t = {span:.4}i  |x - x0| = {:.3e}", (p[0] - x0).norm()),
                None => println!("x0 = {x0:.2}  t = {span:.4}i  ends at infinity"),
            }
        }
    }
    Ok(())
}
