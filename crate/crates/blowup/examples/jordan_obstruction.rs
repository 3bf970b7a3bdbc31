//! A Jordan block at the blow-up equilibrium brings a `log` term into the
//! leaves, so no number of turns around the blow-up time closes the loop.

use blowup::algebra::{to_charts, Chart};
use blowup::equilibria::{classify_spectrum, EquilibriumRecord, DEFAULT_DENOMINATOR_BOUND, DEFAULT_TOL};
use blowup::flow::IntegrationConfig;
use blowup::holonomy::{approach_blowup, masuda_detour};
use blowup::scenarios::catalog_get;
use blowup::Complex64;

fn main() -> blowup::Result<()> {
    let zero = Complex64::new(0.0, 0.0);
    let sys = to_charts(&catalog_get("jordan_block", &Default::default())?.field())?;
    let eq = classify_spectrum(&sys, &EquilibriumRecord::new(Chart::UZ, [zero, zero]), DEFAULT_TOL, DEFAULT_DENOMINATOR_BOUND);
    let s = eq.spectrum.as_ref().expect("classified");
    println!("eigenvalues {:?}, semisimple {}", s.eigenvalues, s.semisimple);

    let cfg = IntegrationConfig { singularity_radius: 0.05, ..Default::default() };
    let approach = approach_blowup(&sys, &eq, [Complex64::new(0.5, 0.0), Complex64::new(0.2, 0.0)], &cfg)?;
    let r = masuda_detour(&sys, &eq, &approach, 0.01, 20, None)?;
    for (k, d) in r.per_cycle.iter().enumerate() {
        println!("{:>3} cycles: relative discrepancy {d:.4}", k + 1);
    }
    println!("closed: {}", r.closed);
    Ok(())
}
