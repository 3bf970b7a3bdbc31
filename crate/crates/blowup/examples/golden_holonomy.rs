//! Iterating the holonomy of `x' = gx, y' = y` with `g` the golden mean.
//! The rotation `exp(2πig)` never closes but comes back close at Fibonacci counts.

use blowup::algebra::{to_charts, Chart};
use blowup::equilibria::EquilibriumRecord;
use blowup::holonomy::holonomy_iterates;
use blowup::scenarios::catalog_get;
use blowup::Complex64;

fn main() -> blowup::Result<()> {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let sys = to_charts(&catalog_get("linear_diag", &[("l1".to_string(), g), ("l2".to_string(), 1.0)].into())?.field())?;
    let eq = EquilibriumRecord::new(Chart::XY, [Complex64::new(0.0, 0.0); 2]);
    let it = holonomy_iterates(&sys, &eq, 0.1, Complex64::new(1e-2, 0.0), 100)?;

    let mut best = f64::INFINITY;
    for (k, d) in it.iter().enumerate() {
        if *d < best {
            best = *d;
            println!("new closest return at k = {:>3}: relative discrepancy {d:.5}", k + 1);
        }
    }
    Ok(())
}
