mod common;

use std::f64::consts::TAU;

use blowup::algebra::Chart;
use blowup::flow::dopri::{self, StepControl, Verdict};
use blowup::flow::{winding_number, IntegrationConfig};
use blowup::holonomy::{approach_blowup, blowup_star, fit_blowup_time, masuda_detour, BranchKind, DetourReport};
use blowup::scenarios::Quantity;
use blowup::{Complex64, Error};
use common::*;

fn node_detour(lu: f64, lz: f64, cycles: u32) -> DetourReport {
    node_detour_with(&[("lu", lu), ("lz", lz)], cycles)
}

fn node_detour_with(kv: &[(&str, f64)], cycles: u32) -> DetourReport {
    let sys = system("blowup_node", kv);
    let eq = classified(&sys, Chart::UZ, [c(0.0), c(0.0)]);
    let cfg = IntegrationConfig { singularity_radius: 0.05, ..Default::default() };
    let approach = approach_blowup(&sys, &eq, [c(0.5), c(0.3)], &cfg).unwrap();
    masuda_detour(&sys, &eq, &approach, 1e-3, cycles, None).unwrap()
}

fn windings(r: &DetourReport) -> (i64, Option<i64>, Option<i64>) {
    let w = r.windings.expect("closed report carries windings");
    (w.w_t, w.w_u, w.w_z)
}

#[test]
fn scalar_blowup_loops_wind_once_in_u() {
    for m in 2..=4u32 {
        let sys = system("scalar_poly", &[("m", m as f64)]);
        let eq = classified(&sys, Chart::UZ, [c(0.0), c(0.0)]);
        let cfg = IntegrationConfig { singularity_radius: 0.05, ..Default::default() };
        let approach = approach_blowup(&sys, &eq, [c(0.5), c(0.0)], &cfg).unwrap();
        let fit = fit_blowup_time(&sys, &eq, &approach).unwrap();
        // x(t) = ((m-1)(T - t))^{-1/(m-1)} with x(0) = 2
        let exact_t = 1.0 / ((m - 1) as f64 * 2f64.powi(m as i32 - 1));
        assert!((fit.t_estimate - exact_t).norm() < 1e-8, "m={m}: T {}", fit.t_estimate);
        let radius = 0.5 * (approach.last().t - fit.t_estimate).norm();
        for k in 1..m - 1 {
            let r = masuda_detour(&sys, &eq, &approach, radius, k, None).unwrap();
            assert!(!r.closed, "m={m} closed early after {k}");
        }
        let r = masuda_detour(&sys, &eq, &approach, radius, m - 1, None).unwrap();
        assert!(r.closed && r.discrepancy < 1e-7 * r.start_state[0].norm(), "m={m}: {:e}", r.discrepancy);
        assert_eq!(windings(&r).0, (m - 1) as i64);
        assert_eq!(windings(&r).1, Some(1));
    }
}

#[test]
fn blowup_star_alternates() {
    let sys = system("scalar_poly", &[("m", 4.0)]);
    let eq = classified(&sys, Chart::UZ, [c(0.0), c(0.0)]);
    let cfg = IntegrationConfig { singularity_radius: 0.05, ..Default::default() };
    let approach = approach_blowup(&sys, &eq, [c(0.5), c(0.0)], &cfg).unwrap();
    let r = masuda_detour(&sys, &eq, &approach, 1e-5, 3, None).unwrap();
    let star = blowup_star(&sys, &eq, &r).unwrap();
    assert_eq!(star.len(), 6);
    let ups = star.iter().filter(|b| b.kind == BranchKind::BlowUp).count();
    assert_eq!(ups, 3);
    // the real approach direction u > 0 is one of the blow-up branches
    assert!(star.iter().any(|b| b.kind == BranchKind::BlowUp && (b.direction - c(1.0)).norm() < 1e-6));
    // a loop that does not close carries no star
    let open = masuda_detour(&sys, &eq, &approach, 1e-5, 1, None).unwrap();
    assert!(matches!(blowup_star(&sys, &eq, &open), Err(Error::ReportNotClosed)));
}

#[test]
fn rational_node_closures_follow_the_leaf_parametrization() {
    // u ~ θ^n1, z ~ θ^n2 with λ_z/λ_u = n2/n1 and t - T ~ u^{m-1}
    let r = node_detour(-1.0, -1.0, 1);
    assert!(r.closed);
    assert_eq!(windings(&r), (1, Some(1), Some(1)));

    let r = node_detour(-3.0, -2.0, 3);
    assert!(r.per_cycle[0] > 0.1 && r.per_cycle[1] > 0.1 && r.closed);
    assert_eq!(windings(&r), (3, Some(3), Some(2)));

    let r = node_detour(-2.0, -3.0, 4);
    assert!(r.per_cycle[0] > 1e-2 && r.per_cycle[1] < 1e-6 && r.per_cycle[2] > 1e-2 && r.closed);
    assert_eq!(windings(&r), (4, Some(4), Some(6)));
    let r = node_detour(-2.0, -3.0, 2);
    assert_eq!(windings(&r), (2, Some(2), Some(3)));
}

#[test]
fn catalog_node_expectation_matches_measurement() {
    let e = entry("blowup_node", &[("lu", -3.0), ("lz", -2.0)]);
    let want = e
        .expected
        .iter()
        .find_map(|x| match x.quantity {
            Quantity::Windings { w_t, w_u, w_z, cycles, .. } => Some((w_t, w_u, w_z, cycles)),
            _ => None,
        })
        .unwrap();
    let r = node_detour(-3.0, -2.0, want.3);
    assert_eq!(windings(&r), (want.0, Some(want.1), want.2));
}

#[test]
fn resonant_node_never_closes() {
    // λ_z = 2 λ_u with the resonant monomial u² present: z carries a u² log u term
    let r = node_detour_with(&[("lu", -1.0), ("lz", -2.0), ("c2", 1.0)], 4);
    assert!(!r.closed);
    let d = &r.per_cycle;
    assert!(d.iter().all(|x| *x > 1e-3), "{d:?}");
    assert!(d[3] > 1.5 * d[1], "drift should grow: {d:?}");
}

#[test]
fn jordan_block_has_no_blowup_loop() {
    let sys = system("jordan_block", &[]);
    let eq = classified(&sys, Chart::UZ, [c(0.0), c(0.0)]);
    assert!(!eq.spectrum().unwrap().semisimple);
    let cfg = IntegrationConfig { singularity_radius: 0.05, ..Default::default() };
    let approach = approach_blowup(&sys, &eq, [c(0.5), c(0.2)], &cfg).unwrap();
    let r = masuda_detour(&sys, &eq, &approach, 0.01, 20, None).unwrap();
    assert!(!r.closed);
    assert!(r.per_cycle.iter().all(|d| *d > 1e-3), "{:?}", r.per_cycle);
}

/// `(x, y, t)` along `τ(s) = τ₀ + dir·s` for the linear field with `dt = ρ dτ`.
fn reciprocal_run(
    n: (f64, f64),
    rho: impl Fn(Complex64, Complex64) -> Complex64,
    start: [Complex64; 3],
    dir: Complex64,
    len: f64,
) -> Vec<[Complex64; 3]> {
    let ctl = StepControl { rel_tol: 1e-12, abs_tol: 1e-16, max_step: 0.01, min_step: 1e-14 };
    let mut trace = vec![start];
    let rhs = |_s: f64, y: &[Complex64; 3]| Some([-n.0 * y[0] * dir, -n.1 * y[1] * dir, rho(y[0], y[1]) * dir]);
    dopri::integrate(rhs, 0.0, len, start, 1e-3, &ctl, |_, y| {
        trace.push(*y);
        Verdict::Continue
    })
    .unwrap();
    trace
}

#[test]
fn reciprocally_linear_loop_windings() {
    let (a, b, n1, n2) = (1.0, -1.0, 2.0, 3.0);
    let e = entry("reciprocal_linear", &[("a", a), ("b", b), ("n1", n1), ("n2", n2)]);
    let rho_poly = e.euler_multiplier.clone().unwrap();
    let rho = |x: Complex64, y: Complex64| rho_poly.evaluate(x, y);
    assert!((rho(c(2.0), c(0.5)) - (2.0 - a * 0.5) * (2.0 - b * 0.5)).norm() < 1e-14);

    let start: [Complex64; 3] = [ci(0.3, 0.1), ci(0.2, -0.1), c(0.0)];
    // blow-up time: the leaf reaches the origin at τ = ∞
    let big_t = reciprocal_run((n1, n2), rho, start, c(1.0), 30.0).last().unwrap()[2];
    // one turn of θ = e^{-τ}
    let lp = reciprocal_run((n1, n2), rho, start, ci(0.0, -1.0), TAU);
    let end = lp.last().unwrap();
    assert!((0..3).all(|i| (end[i] - start[i]).norm() < 1e-9), "loop must close: {end:?}");
    let col = |i: usize| lp.iter().map(|p| p[i]).collect::<Vec<_>>();
    let w_t = winding_number(&col(2), big_t).unwrap();
    let w_x = winding_number(&col(0), c(0.0)).unwrap();
    let w_y = winding_number(&col(1), c(0.0)).unwrap();
    let want = e
        .expected
        .iter()
        .find_map(|x| match x.quantity {
            Quantity::Windings { w_t, w_u, w_z, .. } => Some((w_t, w_u, w_z)),
            _ => None,
        })
        .unwrap();
    assert_eq!((w_t.abs(), w_x.abs(), Some(w_y.abs())), want);
    assert_eq!(want, (4, 2, Some(3)));
}

#[test]
fn detour_needs_an_equilibrium_at_infinity() {
    let sys = system("scalar_poly", &[("m", 2.0)]);
    let origin = classified(&sys, Chart::XY, [c(0.0), c(0.0)]);
    let eq = classified(&sys, Chart::UZ, [c(0.0), c(0.0)]);
    let cfg = IntegrationConfig { singularity_radius: 0.05, ..Default::default() };
    let approach = approach_blowup(&sys, &eq, [c(0.5), c(0.0)], &cfg).unwrap();
    assert!(matches!(masuda_detour(&sys, &origin, &approach, 0.01, 1, None), Err(Error::Invalid(_))));
    assert!(matches!(masuda_detour(&sys, &eq, &approach, 0.01, 0, None), Err(Error::Invalid(_))));
}
