//! Poincaré linearization at the blow-up node of the symmetric caricature.
//!
//! At `a = −1/2` the ratio is `λ = 2/3` and the formal transform exists to
//! any order; the conjugacy residual then shrinks like `r^{N+1}`. At `a = 1/2`
//! the ratio is 2 and elimination stops at the first resonant monomial.

use blowup::algebra::{to_charts, Chart};
use blowup::equilibria::{classify_spectrum, EquilibriumRecord, DEFAULT_DENOMINATOR_BOUND, DEFAULT_TOL};
use blowup::normalform::{conjugacy_residual, poincare_linearize};
use blowup::scenarios::catalog_get;
use blowup::Complex64;

fn main() -> blowup::Result<()> {
    let zero = Complex64::new(0.0, 0.0);
    for a in [-0.5, 0.5] {
        let sys = to_charts(&catalog_get("galerkin_symmetric", &[("a".to_string(), a)].into())?.field())?;
        let eq = classify_spectrum(&sys, &EquilibriumRecord::new(Chart::UZ, [zero, zero]), DEFAULT_TOL, DEFAULT_DENOMINATOR_BOUND);
        println!("a = {a}");
        for n in [2, 4, 6, 8] {
            match poincare_linearize(&sys, &eq, n) {
                Ok(tf) => {
                    let r = conjugacy_residual(&sys, &eq, &tf, 0.1, 64)?;
                    let table: Vec<String> = r.table.iter().map(|(rad, e)| format!("{rad}:{e:.2e}")).collect();
                    println!("  N = {n}: residual {}  fitted order {:.2?}", table.join(" "), r.fitted_order);
                }
                Err(e) => println!("  N = {n}: {e}"),
            }
        }
    }
    Ok(())
}
