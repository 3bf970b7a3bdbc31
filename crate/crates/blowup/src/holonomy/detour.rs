use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{map_point, Chart, ChartSystem, C2};
use crate::equilibria::{classify_spectrum, Domain, EquilibriumRecord, DEFAULT_DENOMINATOR_BOUND, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::flow::{
    integrate_path, winding_number_with_gap, IntegrationConfig, Segment, Target, TerminationReason, TimePath,
    Trajectory,
};

/// Samples used for the blow-up time fit.
pub const FIT_SAMPLES: usize = 20;
/// Default closure threshold relative to the fiber start magnitude.
pub const DEFAULT_CLOSURE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Windings {
    pub w_t: i64,
    /// winding of the fiber coordinate (`u`, or `v` in the vw chart) around the equilibrium
    pub w_u: Option<i64>,
    /// winding of the base coordinate (`z`, or `w`); absent when the trace sits on the equilibrium value
    pub w_z: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetourReport {
    pub cycles: u32,
    pub t_loop: TimePath,
    pub start_state: C2,
    pub end_state: C2,
    pub discrepancy: f64,
    pub relative_discrepancy: f64,
    pub closure_threshold: f64,
    pub windings: Option<Windings>,
    pub closed: bool,
    pub chart: Chart,
    pub t_estimate: Complex64,
    pub a_u: Complex64,
    pub fit_coefficient: Complex64,
    /// relative discrepancy after each completed cycle
    pub per_cycle: Vec<f64>,
}

/// Chart-time direction in which the fiber eigenvalue contracts.
fn contracting_direction(system: &ChartSystem, eq: &EquilibriumRecord) -> Result<Complex64> {
    let lam = system.field(eq.chart).jacobian(eq.location)[0][0];
    if lam.norm() < 1e-12 {
        return Err(Error::DegenerateSystem("fiber eigenvalue vanishes at the blow-up equilibrium".into()));
    }
    Ok(-lam.conj() / lam.norm())
}

/// Integrate in chart time from `start` toward the blow-up equilibrium until
/// the singularity ball of `cfg` is entered.
pub fn approach_blowup(
    system: &ChartSystem,
    eq: &EquilibriumRecord,
    start: C2,
    cfg: &IntegrationConfig,
) -> Result<Trajectory> {
    let dir = contracting_direction(system, eq)?;
    let lam = system.field(eq.chart).jacobian(eq.location)[0][0];
    let span = 80.0 / lam.norm();
    let path = TimePath::line(Complex64::new(0.0, 0.0), dir * span);
    let cfg = IntegrationConfig { max_step: cfg.max_step.max(span / 2000.0), ..cfg.in_chart_time(cfg.t_start) };
    let tr = integrate_path(system, eq.chart, start, &path, &cfg, Some(Target { chart: eq.chart, location: eq.location }))?;
    if tr.terminated_reason != TerminationReason::EnteredSingularityBall {
        return Err(Error::ApproachIncomplete);
    }
    Ok(tr)
}

/// Least-squares fit `t ≈ T + C s` over complex data.
fn fit_line(s: &[Complex64], t: &[Complex64]) -> Option<(Complex64, Complex64)> {
    let n = s.len() as f64;
    let ss: Complex64 = s.iter().sum();
    let st: Complex64 = t.iter().sum();
    let s2: f64 = s.iter().map(|x| x.norm_sqr()).sum();
    let sct: Complex64 = s.iter().zip(t).map(|(a, b)| a.conj() * b).sum();
    // [n, ss; conj(ss), s2] [T; C] = [st; sct]
    let det = n * s2 - ss.norm_sqr();
    if det.abs() < 1e-300 {
        return None;
    }
    let tt = (st * s2 - ss * sct) / det;
    let cc = (sct * n - ss.conj() * st) / det;
    Some((tt, cc))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlowupFit {
    pub t_estimate: Complex64,
    /// `C` in `t ≈ T + C u^{m−1}`
    pub coefficient: Complex64,
    /// `u ≈ a_u (t − T)^{1/(m−1)}`
    pub a_u: Complex64,
}

/// Fit `t ≈ T + C u^{m−1}` over the last approach samples.
pub fn fit_blowup_time(system: &ChartSystem, blowup_eq: &EquilibriumRecord, approach: &Trajectory) -> Result<BlowupFit> {
    let chart = blowup_eq.chart;
    let m = system.degree_m();
    if approach.terminated_reason != TerminationReason::EnteredSingularityBall {
        return Err(Error::ApproachIncomplete);
    }
    let n = approach.samples.len();
    let tail = &approach.samples[n.saturating_sub(FIT_SAMPLES)..];
    let mut s = Vec::with_capacity(tail.len());
    let mut t = Vec::with_capacity(tail.len());
    for smp in tail {
        let p = map_point(smp.chart, chart, smp.coords).ok_or(Error::ApproachIncomplete)?;
        s.push((p[0] - blowup_eq.location[0]).powu(m.saturating_sub(1)));
        t.push(smp.t);
    }
    let (t_estimate, coefficient) = fit_line(&s, &t).ok_or(Error::ApproachIncomplete)?;
    let a_u = coefficient.powf(-1.0 / m.saturating_sub(1).max(1) as f64);
    Ok(BlowupFit { t_estimate, coefficient, a_u })
}

/// Loop around the extrapolated blow-up time and measure the closure discrepancy.
pub fn masuda_detour(
    system: &ChartSystem,
    blowup_eq: &EquilibriumRecord,
    approach: &Trajectory,
    loop_radius: f64,
    cycles: u32,
    closure_threshold: Option<f64>,
) -> Result<DetourReport> {
    masuda_detour_with(system, blowup_eq, approach, loop_radius, cycles, closure_threshold, &IntegrationConfig::default())
}

pub fn masuda_detour_with(
    system: &ChartSystem,
    blowup_eq: &EquilibriumRecord,
    approach: &Trajectory,
    loop_radius: f64,
    cycles: u32,
    closure_threshold: Option<f64>,
    cfg: &IntegrationConfig,
) -> Result<DetourReport> {
    let chart = blowup_eq.chart;
    let m = system.degree_m();
    if chart == Chart::XY || m < 2 {
        return Err(Error::Invalid("detours need a blow-up equilibrium at infinity with m >= 2".into()));
    }
    if cycles == 0 || !(loop_radius > 0.0) {
        return Err(Error::Invalid("cycles >= 1 and a positive loop radius are required".into()));
    }
    if approach.terminated_reason != TerminationReason::EnteredSingularityBall {
        return Err(Error::ApproachIncomplete);
    }
    let fit = fit_blowup_time(system, blowup_eq, approach)?;
    let (t_est, c_fit, a_u) = (fit.t_estimate, fit.coefficient, fit.a_u);

    let last = approach.last();
    let t_enter = last.t;
    let offset = t_enter - t_est;
    if loop_radius > offset.norm() {
        return Err(Error::Invalid(format!(
            "loop radius {loop_radius:.3e} exceeds the distance {:.3e} from the approach end to the blow-up time",
            offset.norm()
        )));
    }
    let angle = offset.arg();
    let loop_start = t_est + Complex64::from_polar(loop_radius, angle);
    let start_coords = map_point(last.chart, chart, last.coords).ok_or(Error::ApproachIncomplete)?;

    let run_cfg = IntegrationConfig {
        chart_switch_threshold: f64::INFINITY,
        path_time: crate::flow::PathTime::Original,
        ..*cfg
    };
    let run = |from: C2, path: &TimePath| -> Result<Trajectory> {
        let tr = integrate_path(system, chart, from, path, &run_cfg, None)?;
        match tr.terminated_reason {
            TerminationReason::Completed => Ok(tr),
            TerminationReason::Diverged => Err(Error::Diverged { at: tr.last().s }),
            _ => Err(Error::LoopHitsSingularity),
        }
    };

    let mut state = start_coords;
    if (loop_start - t_enter).norm() > 0.0 {
        let line = run(state, &TimePath::line(t_enter, loop_start))?;
        state = line.last().coords;
    }
    let s0 = state;
    let u_start = s0[0].norm();
    let threshold = closure_threshold.unwrap_or(DEFAULT_CLOSURE) * u_start;
    let one_turn = TimePath::new(vec![Segment::Arc {
        center: t_est,
        radius: loop_radius,
        angle_from: angle,
        angle_to: angle + 2.0 * PI,
    }]);

    let mut per_cycle = Vec::with_capacity(cycles as usize);
    let mut t_trace = Vec::new();
    let mut u_trace = Vec::new();
    let mut z_trace = Vec::new();
    for k in 0..cycles {
        let tr = run(state, &one_turn)?;
        let skip = usize::from(k > 0);
        for smp in &tr.samples[skip..] {
            t_trace.push(smp.t);
            u_trace.push(smp.coords[0]);
            z_trace.push(smp.coords[1]);
        }
        state = tr.last().coords;
        per_cycle.push(distance(&state, &s0) / u_start);
    }
    let discrepancy = distance(&state, &s0);
    let closed = discrepancy < threshold;

    let windings = if closed {
        let gap = threshold.max(1e-300);
        let e = blowup_eq.location;
        let w_t = winding_number_with_gap(&t_trace, t_est, loop_radius * 1e-9)?;
        let w_u = winding_number_with_gap(&u_trace, e[0], gap)?;
        let z_spread = z_trace.iter().map(|z| (z - e[1]).norm()).fold(0.0, f64::max);
        let w_z = if z_spread <= 1e-14 * (1.0 + e[1].norm()) {
            None
        } else {
            Some(winding_number_with_gap(&z_trace, e[1], gap)?)
        };
        let eq = classify_spectrum(system, blowup_eq, DEFAULT_TOL, DEFAULT_DENOMINATOR_BOUND);
        let spec = eq.spectrum()?;
        if spec.semisimple && spec.domain != Domain::Degenerate && w_t != (m as i64 - 1) * w_u {
            return Err(Error::WindingLaw { w_t, expected: (m as i64 - 1) * w_u });
        }
        Some(Windings { w_t, w_u: Some(w_u), w_z })
    } else {
        None
    };

    Ok(DetourReport {
        cycles,
        t_loop: one_turn.with_cycles(cycles),
        start_state: s0,
        end_state: state,
        discrepancy,
        relative_discrepancy: discrepancy / u_start,
        closure_threshold: threshold,
        windings,
        closed,
        chart,
        t_estimate: t_est,
        a_u,
        fit_coefficient: c_fit,
        per_cycle,
    })
}

fn distance(a: &C2, b: &C2) -> f64 {
    ((a[0] - b[0]).norm_sqr() + (a[1] - b[1]).norm_sqr()).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BranchKind {
    BlowUp,
    BlowDown,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    /// unit direction in the fiber coordinate
    pub direction: Complex64,
    pub kind: BranchKind,
}

/// Real-time blow-up and blow-down directions attached to a closed loop.
///
/// With `t − T = θ^{w_t}` and `u ≈ a_u θ^{w_u}`, real `t < T` (blow-up) needs
/// `arg θ = (2k+1)π / w_t`, real `t > T` (blow-down) needs `arg θ = 2kπ / w_t`.
pub fn blowup_star(_system: &ChartSystem, _blowup_eq: &EquilibriumRecord, report: &DetourReport) -> Result<Vec<Branch>> {
    if !report.closed {
        return Err(Error::ReportNotClosed);
    }
    let w = report.windings.ok_or(Error::ReportNotClosed)?;
    let w_u = w.w_u.ok_or(Error::ReportNotClosed)?;
    let wt = w.w_t.unsigned_abs() as usize;
    let base = report.a_u.arg();
    let mut out = Vec::with_capacity(2 * wt);
    for k in 0..wt {
        let down = 2.0 * PI * k as f64 / w.w_t as f64;
        let up = PI * (2 * k + 1) as f64 / w.w_t as f64;
        out.push(Branch { direction: Complex64::from_polar(1.0, base + w_u as f64 * down), kind: BranchKind::BlowDown });
        out.push(Branch { direction: Complex64::from_polar(1.0, base + w_u as f64 * up), kind: BranchKind::BlowUp });
    }
    Ok(out)
}
