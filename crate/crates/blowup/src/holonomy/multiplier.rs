use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{ChartSystem, C2};
use crate::equilibria::{classify_spectrum, EquilibriumRecord, DEFAULT_DENOMINATOR_BOUND, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::flow::{continue_leaf_with, integrate_path, IntegrationConfig, TerminationReason, TimePath};
use crate::normalform::TruncatedTransform;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HolonomyEstimate {
    pub multiplier: Complex64,
    pub fiber_radii: Vec<f64>,
    pub richardson_order: u32,
    pub predicted: Option<Complex64>,
    pub deviation: Option<f64>,
    /// raw ratios `h(r)/r` per fiber radius
    pub ratios: Vec<Complex64>,
}

#[derive(Debug, Clone, Default)]
pub struct HolonomyOptions<'a> {
    pub clockwise: bool,
    /// normal-form straightening used when the fiber line is not invariant
    pub straightening: Option<&'a TruncatedTransform>,
    pub config: IntegrationConfig,
}

/// Default fiber radii: three values in geometric ratio 2.
pub fn default_fiber_radii(base: f64) -> Vec<f64> {
    vec![base, base / 2.0, base / 4.0]
}

/// Whether `{fiber = e₀}` is invariant, coefficientwise.
pub fn has_invariant_fiber(system: &ChartSystem, eq: &EquilibriumRecord) -> bool {
    let f = &system.field(eq.chart).f;
    let restricted = f.restrict_x(eq.location[0]);
    let scale = f.max_abs_coeff().max(1e-300) * (1.0 + eq.location[0].norm()).powi(f.degree() as i32);
    restricted.iter().all(|c| c.norm() <= 1e-12 * scale)
}

pub fn holonomy_multiplier(
    system: &ChartSystem,
    eq: &EquilibriumRecord,
    base_radius: f64,
    fiber_radii: &[f64],
) -> Result<HolonomyEstimate> {
    holonomy_multiplier_with(system, eq, base_radius, fiber_radii, &HolonomyOptions::default())
}

/// Holonomy multiplier over a circle of `base_radius` around the equilibrium,
/// extrapolated to zero fiber radius.
pub fn holonomy_multiplier_with(
    system: &ChartSystem,
    eq: &EquilibriumRecord,
    base_radius: f64,
    fiber_radii: &[f64],
    opts: &HolonomyOptions,
) -> Result<HolonomyEstimate> {
    if fiber_radii.is_empty() || fiber_radii.iter().any(|r| !(*r > 0.0)) || !(base_radius > 0.0) {
        return Err(Error::Invalid("fiber radii and base radius must be positive".into()));
    }
    let spectrum = classify_spectrum(system, eq, DEFAULT_TOL, DEFAULT_DENOMINATOR_BOUND).spectrum.expect("classified");
    let lam = spectrum.eigenvalues;
    let sign = if opts.clockwise { -1.0 } else { 1.0 };
    let predicted = (lam[1].norm() > 0.0).then(|| (Complex64::new(0.0, TAU * sign) * lam[0] / lam[1]).exp());

    let ratios: Vec<Complex64> = if has_invariant_fiber(system, eq) {
        let turns = if opts.clockwise { -1 } else { 1 };
        let base_loop = TimePath::circle(eq.location[1], base_radius, 0.0, turns);
        fiber_radii
            .iter()
            .map(|&r| {
                let start = eq.location[0] + r;
                let leaf = continue_leaf_with(system, eq.chart, &base_loop, start, &opts.config)?;
                Ok((leaf.fiber_end - eq.location[0]) / r)
            })
            .collect::<Result<_>>()?
    } else if let Some(tf) = opts.straightening {
        fiber_radii
            .iter()
            .map(|&r| straightened_ratio(system, eq, tf, lam, base_radius, r, sign, &opts.config))
            .collect::<Result<_>>()?
    } else {
        return Err(Error::NoInvariantFiber);
    };

    let (multiplier, order) = richardson(fiber_radii, &ratios);
    Ok(HolonomyEstimate {
        multiplier,
        fiber_radii: fiber_radii.to_vec(),
        richardson_order: order,
        predicted,
        deviation: predicted.map(|p| (multiplier - p).norm()),
        ratios,
    })
}

/// In linearizing coordinates the base circles once during chart time
/// `2πi/λ₂`; integrate that time in the original chart and read the fiber back.
#[allow(clippy::too_many_arguments)]
fn straightened_ratio(
    system: &ChartSystem,
    eq: &EquilibriumRecord,
    tf: &TruncatedTransform,
    lam: C2,
    base_radius: f64,
    r: f64,
    sign: f64,
    cfg: &IntegrationConfig,
) -> Result<Complex64> {
    let xi0 = [Complex64::new(r, 0.0), Complex64::new(base_radius, 0.0)];
    let p0 = tf.to_chart(xi0);
    let span = Complex64::new(0.0, TAU * sign) / lam[1];
    let path = TimePath::line(Complex64::new(0.0, 0.0), span);
    let run_cfg = IntegrationConfig { chart_switch_threshold: f64::INFINITY, ..cfg.in_chart_time(Complex64::new(0.0, 0.0)) };
    let tr = integrate_path(system, eq.chart, p0, &path, &run_cfg, None)?;
    if tr.terminated_reason != TerminationReason::Completed {
        return Err(Error::StepUnderflow { at: tr.last().s });
    }
    let xi1 = tf.from_chart(tr.last().coords);
    Ok(xi1[0] / r)
}

/// Richardson extrapolation to `r → 0` assuming errors in integer powers of `r`.
pub fn richardson(radii: &[f64], values: &[Complex64]) -> (Complex64, u32) {
    // Neville table for the interpolating polynomial in r evaluated at 0
    let n = values.len();
    let mut p: Vec<Complex64> = values.to_vec();
    for level in 1..n {
        for i in 0..n - level {
            let (ri, rj) = (radii[i], radii[i + level]);
            p[i] = (p[i + 1] * ri - p[i] * rj) / (ri - rj);
        }
    }
    (p[0], (n - 1) as u32)
}

/// Relative return discrepancy `|h^k(u₀) − u₀| / |u₀|` for `k = 1..=cycles`.
pub fn holonomy_iterates(
    system: &ChartSystem,
    eq: &EquilibriumRecord,
    base_radius: f64,
    fiber_start: Complex64,
    cycles: u32,
) -> Result<Vec<f64>> {
    if !has_invariant_fiber(system, eq) {
        return Err(Error::NoInvariantFiber);
    }
    let base_loop = TimePath::circle(eq.location[1], base_radius, 0.0, 1);
    let cfg = IntegrationConfig::default();
    let mut u = fiber_start;
    let d0 = fiber_start - eq.location[0];
    let mut out = Vec::with_capacity(cycles as usize);
    for _ in 0..cycles {
        u = continue_leaf_with(system, eq.chart, &base_loop, u, &cfg)?.fiber_end;
        out.push((u - fiber_start).norm() / d0.norm());
    }
    Ok(out)
}
