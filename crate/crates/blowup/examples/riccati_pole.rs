//! `x' = x²` has a simple pole at `T = 1/x₀`. Integrating around it in
//! complex time passes through the `uz` chart and comes out on the other
//! side of the pole with the meromorphic continuation.

use blowup::algebra::{map_point, to_charts, Chart};
use blowup::flow::{integrate_path, IntegrationConfig, Segment, TimePath};
use blowup::scenarios::catalog_get;
use blowup::Complex64;

fn main() -> blowup::Result<()> {
    let entry = catalog_get("scalar_poly", &[("m".to_string(), 2.0)].into())?;
    let sys = to_charts(&entry.field())?;
    let x0 = Complex64::new(1.0, 0.0);

    // straight through the pole on the real axis, then around it on a semicircle
    let through = TimePath::line(Complex64::new(0.0, 0.0), Complex64::new(2.0, 0.0));
    let around = TimePath::new(vec![
        Segment::Line { from: Complex64::new(0.0, 0.0), to: Complex64::new(0.5, 0.0) },
        Segment::Arc { center: Complex64::new(1.0, 0.0), radius: 0.5, angle_from: std::f64::consts::PI, angle_to: 0.0 },
        Segment::Line { from: Complex64::new(1.5, 0.0), to: Complex64::new(2.0, 0.0) },
    ]);
    for (name, path) in [("real axis", through), ("semicircle", around)] {
        let tr = integrate_path(&sys, Chart::XY, [x0, Complex64::new(0.0, 0.0)], &path, &IntegrationConfig::default(), None)?;
        let charts: std::collections::BTreeSet<String> = tr.samples.iter().map(|s| s.chart.to_string()).collect();
        let end = map_point(tr.last().chart, Chart::XY, tr.last().coords).expect("finite end");
        println!("{name:>10}: x(2) = {:.12}  exact -1  charts {charts:?}", end[0]);
    }
    Ok(())
}
