//! Blow-up node `u' = λ_u u, z' = λ_z z` at infinity with a rational ratio.
//!
//! On a leaf `u ~ θ^{n1}` and `z ~ θ^{n2}`, so the detour closes once the
//! loop has wound `n1` times around the blow-up time.

use blowup::algebra::{to_charts, Chart};
use blowup::equilibria::{classify_spectrum, EquilibriumRecord, DEFAULT_DENOMINATOR_BOUND, DEFAULT_TOL};
use blowup::flow::IntegrationConfig;
use blowup::holonomy::{approach_blowup, masuda_detour};
use blowup::scenarios::catalog_get;
use blowup::Complex64;

fn main() -> blowup::Result<()> {
    let zero = Complex64::new(0.0, 0.0);
    for (lu, lz) in [(-2.0, -3.0), (-3.0, -2.0), (-1.0, -1.0)] {
        let p = [("lu".to_string(), lu), ("lz".to_string(), lz)].into();
        let sys = to_charts(&catalog_get("blowup_node", &p)?.field())?;
        let eq = classify_spectrum(&sys, &EquilibriumRecord::new(Chart::UZ, [zero, zero]), DEFAULT_TOL, DEFAULT_DENOMINATOR_BOUND);
        let cfg = IntegrationConfig { singularity_radius: 0.05, ..Default::default() };
        let approach = approach_blowup(&sys, &eq, [Complex64::new(0.5, 0.0), Complex64::new(0.3, 0.0)], &cfg)?;
        let scan = masuda_detour(&sys, &eq, &approach, 1e-3, 6, None)?;
        let per: Vec<String> = scan.per_cycle.iter().map(|d| format!("{d:.1e}")).collect();
        println!("λ_u/λ_z = {lu}/{lz}: per-cycle discrepancy [{}]", per.join(", "));
        let Some(k) = scan.per_cycle.iter().position(|d| *d < scan.closure_threshold) else { continue };
        let r = masuda_detour(&sys, &eq, &approach, 1e-3, k as u32 + 1, None)?;
        if let Some(w) = r.windings {
            println!("  closes after {} cycles, windings (w_t, w_u, w_z) = ({}, {:?}, {:?})", r.cycles, w.w_t, w.w_u, w.w_z);
        }
    }
    Ok(())
}
