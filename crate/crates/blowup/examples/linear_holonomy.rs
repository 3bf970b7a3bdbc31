//! Holonomy of `x' = λx, y' = y` around `y = 0`: the leaf `x = C y^λ`
//! returns multiplied by `exp(2πiλ)`.

use std::f64::consts::TAU;

use blowup::algebra::{to_charts, Chart};
use blowup::equilibria::{classify_spectrum, EquilibriumRecord, DEFAULT_DENOMINATOR_BOUND, DEFAULT_TOL};
use blowup::holonomy::{default_fiber_radii, holonomy_multiplier};
use blowup::scenarios::catalog_get;
use blowup::Complex64;

fn main() -> blowup::Result<()> {
    for lam in [0.5, 2.0 / 3.0, -1.0, (5f64.sqrt() - 1.0) / 2.0] {
        let p = [("l1".to_string(), lam), ("l2".to_string(), 1.0)].into();
        let sys = to_charts(&catalog_get("linear_diag", &p)?.field())?;
        let origin = EquilibriumRecord::new(Chart::XY, [Complex64::new(0.0, 0.0); 2]);
        let eq = classify_spectrum(&sys, &origin, DEFAULT_TOL, DEFAULT_DENOMINATOR_BOUND);
        let h = holonomy_multiplier(&sys, &eq, 0.1, &default_fiber_radii(1e-2))?;
        let exact = (Complex64::i() * TAU * lam).exp();
        println!("λ = {lam:>8.5}  h = {:.10}  |h - exp(2πiλ)| = {:.1e}", h.multiplier, (h.multiplier - exact).norm());
    }
    Ok(())
}
