//! Detours around the blow-up time of `x' = x^m`.
//!
//! Near `T` the solution behaves like `(T − t)^{-1/(m−1)}`, so a small loop
//! around `T` has to be traversed `m − 1` times before the leaf closes. The
//! closed loop carries a star of `2(m − 1)` alternating branches.

use blowup::algebra::{to_charts, Chart};
use blowup::equilibria::{classify_spectrum, EquilibriumRecord, DEFAULT_DENOMINATOR_BOUND, DEFAULT_TOL};
use blowup::flow::IntegrationConfig;
use blowup::holonomy::{approach_blowup, blowup_star, fit_blowup_time, masuda_detour};
use blowup::scenarios::catalog_get;
use blowup::Complex64;

fn main() -> blowup::Result<()> {
    let zero = Complex64::new(0.0, 0.0);
    for m in 2..=4u32 {
        let sys = to_charts(&catalog_get("scalar_poly", &[("m".to_string(), m as f64)].into())?.field())?;
        let eq = classify_spectrum(&sys, &EquilibriumRecord::new(Chart::UZ, [zero, zero]), DEFAULT_TOL, DEFAULT_DENOMINATOR_BOUND);
        let cfg = IntegrationConfig { singularity_radius: 0.05, ..Default::default() };
        let approach = approach_blowup(&sys, &eq, [Complex64::new(0.5, 0.0), zero], &cfg)?;
        let fit = fit_blowup_time(&sys, &eq, &approach)?;
        let radius = 0.5 * (approach.last().t - fit.t_estimate).norm();
        println!("m = {m}: T ≈ {:.10}", fit.t_estimate);
        for k in 1..=m - 1 {
            let r = masuda_detour(&sys, &eq, &approach, radius, k, None)?;
            let w = r.windings.map(|w| format!("(w_t, w_u) = ({}, {:?})", w.w_t, w.w_u)).unwrap_or_default();
            println!("  {k} cycle(s): closed {:<5} discrepancy {:.2e} {w}", r.closed, r.relative_discrepancy);
            if r.closed {
                let star = blowup_star(&sys, &eq, &r)?;
                let kinds: Vec<String> = star.iter().map(|b| format!("{:?}", b.kind)).collect();
                println!("  star: {}", kinds.join(" "));
            }
        }
    }
    Ok(())
}
