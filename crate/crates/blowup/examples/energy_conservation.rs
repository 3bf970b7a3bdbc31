//! Energy drift of the Weierstrass pendulum `ẍ = 6x² − 6` along complex
//! rectangles and along the real axis through a pole.

use blowup::algebra::{to_charts, Chart};
use blowup::flow::{integrate_path, IntegrationConfig, Segment, TimePath};
use blowup::hamiltonian::{energy_drift, PolynomialHamiltonian};
use blowup::scenarios::catalog_get;
use blowup::Complex64;

fn rectangle(w: f64, h: f64) -> TimePath {
    let p = [Complex64::new(0.0, 0.0), Complex64::new(w, 0.0), Complex64::new(w, h), Complex64::new(0.0, h)];
    TimePath::new((0..4).map(|i| Segment::Line { from: p[i], to: p[(i + 1) % 4] }).collect())
}

fn main() -> blowup::Result<()> {
    let entry = catalog_get("weierstrass", &Default::default())?;
    let sys = to_charts(&entry.field())?;
    let h = entry.hamiltonian().expect("weierstrass is Hamiltonian").h.clone();

    let start = [Complex64::new(-1.0, 0.0), Complex64::new(0.5, 0.0)];
    let ham = PolynomialHamiltonian::new(h.clone(), h.evaluate(start[0], start[1]));
    for (w, ht) in [(1.5, 0.5), (0.8, 0.8), (1.2, 0.8)] {
        for tol in [1e-8, 1e-10] {
            let cfg = IntegrationConfig::default().with_tolerances(tol, tol * 1e-2);
            let tr = integrate_path(&sys, Chart::XY, start, &rectangle(w, ht), &cfg, None)?;
            println!("rectangle {w}x{ht}  rel_tol {tol:.0e}  drift {:.2e}", energy_drift(&ham, &tr));
        }
    }

    // x(0) = 2 reaches a pole in real time; the uz chart energy stays on its level
    let start = [Complex64::new(2.0, 0.0), Complex64::new(1.0, 0.0)];
    let ham = PolynomialHamiltonian::new(h.clone(), h.evaluate(start[0], start[1]));
    let tr = integrate_path(&sys, Chart::XY, start, &TimePath::line(Complex64::new(0.0, 0.0), Complex64::new(1.5, 0.0)), &IntegrationConfig::default(), None)?;
    let off_chart = tr.samples.iter().filter(|s| s.chart != Chart::XY).count();
    println!("through the pole: {off_chart} samples outside xy, drift {:.2e}", energy_drift(&ham, &tr));
    Ok(())
}
