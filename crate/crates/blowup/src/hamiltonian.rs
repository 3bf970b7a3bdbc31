//! Polynomial Hamiltonians, their compactified energies, and the pendulum
//! blow-up loops traced near `v = w = 0`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{to_charts, BivariatePolynomial, Chart, ChartSystem, PlanarField, C2};
use crate::equilibria::{horner, poly_roots};
use crate::error::{Error, Result};
use crate::flow::{
    integrate_path, winding_number_with_gap, IntegrationConfig, Segment, TerminationReason, TimePath, Trajectory,
};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolynomialHamiltonian {
    #[serde(rename = "H")]
    pub h: BivariatePolynomial,
    pub level_c: Complex64,
}

impl PolynomialHamiltonian {
    pub fn new(h: BivariatePolynomial, level_c: Complex64) -> Self {
        Self { h, level_c }
    }

    /// `m = deg H − 1`.
    pub fn degree_m(&self) -> u32 {
        self.h.degree().saturating_sub(1)
    }

    pub fn validate(&self) -> Result<()> {
        if self.h.degree() < 2 {
            return Err(Error::DegreeZero("a Hamiltonian needs degree at least 2".into()));
        }
        Ok(())
    }
}

/// `(H_y, −H_x)`.
pub fn hamiltonian_field(ham: &PolynomialHamiltonian) -> PlanarField {
    PlanarField::new(ham.h.dy(), -ham.h.dx())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompactifiedEnergy {
    pub h_xy: BivariatePolynomial,
    pub h_uz: BivariatePolynomial,
    pub h_vw: BivariatePolynomial,
    /// `m + 1`, the exponent of the chart multipliers of the level
    pub weight: u32,
}

impl CompactifiedEnergy {
    pub fn in_chart(&self, chart: Chart) -> &BivariatePolynomial {
        match chart {
            Chart::XY => &self.h_xy,
            Chart::UZ => &self.h_uz,
            Chart::VW => &self.h_vw,
        }
    }
}

/// `H − c` in all three charts: `u^{m+1}(H(1/u, z/u) − c)` and the `vw` analogue.
pub fn compactify_energy(ham: &PolynomialHamiltonian) -> CompactifiedEnergy {
    let d = ham.h.degree();
    let c = ham.level_c;
    let h_xy = ham.h.clone() - BivariatePolynomial::constant(c);
    let h_uz = ham.h.map_exponents(|j, k| (d - j - k, k)) - BivariatePolynomial::monomial(d, 0, c);
    let h_vw = ham.h.map_exponents(|j, k| (d - j - k, j)) - BivariatePolynomial::monomial(d, 0, c);
    CompactifiedEnergy { h_xy, h_uz, h_vw, weight: d }
}

/// Largest deviation of the chart energy from its level along a trajectory.
pub fn energy_drift(ham: &PolynomialHamiltonian, trajectory: &Trajectory) -> f64 {
    let e = compactify_energy(ham);
    trajectory
        .samples
        .iter()
        .map(|s| e.in_chart(s.chart).evaluate(s.coords[0], s.coords[1]).norm())
        .fold(0.0, f64::max)
}

/// `ẍ = g(x)` with potential `G`, `G' = g`, and energy `½y² − G(x) = c`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pendulum {
    /// ascending coefficients of `G`
    pub potential: Vec<Complex64>,
    pub level: Complex64,
}

impl Pendulum {
    /// From ascending coefficients of the force `g`; `G(0) = 0`.
    pub fn from_force(g: &[Complex64], level: Complex64) -> Self {
        let mut potential = vec![ZERO];
        potential.extend(g.iter().enumerate().map(|(j, c)| c / (j as f64 + 1.0)));
        Self { potential, level }
    }

    pub fn from_potential(potential: &[Complex64], level: Complex64) -> Self {
        Self { potential: potential.to_vec(), level }
    }

    fn trimmed(&self) -> &[Complex64] {
        let mut n = self.potential.len();
        while n > 0 && self.potential[n - 1].norm() < 1e-14 {
            n -= 1;
        }
        &self.potential[..n]
    }

    /// `m` with `deg G = m + 1`.
    pub fn degree_m(&self) -> u32 {
        (self.trimmed().len() as u32).saturating_sub(2)
    }

    /// Leading coefficient `G₀`.
    pub fn leading(&self) -> Complex64 {
        self.trimmed().last().copied().unwrap_or(ZERO)
    }

    pub fn force(&self) -> Vec<Complex64> {
        self.potential.iter().enumerate().skip(1).map(|(j, c)| c * j as f64).collect()
    }

    pub fn hamiltonian(&self) -> PolynomialHamiltonian {
        let mut h = BivariatePolynomial::monomial(0, 2, Complex64::new(0.5, 0.0));
        for (j, &c) in self.potential.iter().enumerate() {
            h.add_term(j as u32, 0, -c);
        }
        PolynomialHamiltonian::new(h, self.level)
    }

    /// Whether the level passes through a finite equilibrium.
    pub fn critical_level(&self) -> bool {
        poly_roots(&self.force())
            .into_iter()
            .any(|x| (horner(&self.potential, x).0 + self.level).norm() < 1e-9 * (1.0 + self.level.norm()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PendulumWindings {
    pub w_t: i64,
    pub w_v: i64,
    pub w_w: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PendulumAttempt {
    pub theta0: f64,
    pub start: C2,
    pub windings: Option<PendulumWindings>,
    pub leaves: Option<u32>,
    pub cycles_to_close: Option<u32>,
    pub discrepancy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PendulumReport {
    pub potential: Vec<Complex64>,
    pub force: Vec<Complex64>,
    pub m: u32,
    pub level: Complex64,
    pub windings: Option<PendulumWindings>,
    pub leaves: Option<u32>,
    pub closed: bool,
    /// slope of `log|v|` against `log|w|` across the traced start points
    pub exponent_ratio: Option<f64>,
    /// `|exponent_ratio − w_v / w_w|`
    pub fit_residual: Option<f64>,
    pub critical_level: bool,
    pub attempts: Vec<PendulumAttempt>,
}

/// Closure tolerance per coordinate, relative.
const PENDULUM_CLOSURE: f64 = 1e-6;

/// Start point on the energy curve with `w = θ^{m−1}` and `v ≈ a θ^{m+1}`.
fn leaf_start(energy_vw: &BivariatePolynomial, m: u32, a: Complex64, theta: f64) -> Option<C2> {
    let w = Complex64::new(theta.powi(m as i32 - 1), 0.0);
    let mut v = a * theta.powi(m as i32 + 1);
    let dv = energy_vw.dx();
    for _ in 0..50 {
        let e = energy_vw.evaluate(v, w);
        let d = dv.evaluate(v, w);
        if d.norm() == 0.0 {
            return None;
        }
        let step = e / d;
        v -= step;
        if step.norm() < 1e-16 * v.norm() {
            break;
        }
    }
    let ok = energy_vw.evaluate(v, w).norm() < 1e-12 * w.norm().powi(m as i32 + 1).max(1e-300) * 1e6 && v.is_finite();
    ok.then_some([v, w])
}

fn rel_gap(a: &C2, b: &C2) -> f64 {
    ((a[0] - b[0]).norm() / b[0].norm()).max((a[1] - b[1]).norm() / b[1].norm())
}

/// Trace one start point around the blow-up time `T ≈ 2w/(m−1)`.
fn trace_leaf(
    system: &ChartSystem,
    m: u32,
    start: C2,
    others: &[C2],
    max_cycles: u32,
) -> Result<(Option<PendulumWindings>, Option<u32>, Option<u32>, f64)> {
    let w0 = start[1];
    let t_est = w0 * (2.0 / (m as f64 - 1.0));
    let offset = -t_est;
    let radius = offset.norm();
    let turn = TimePath::new(vec![Segment::Arc {
        center: t_est,
        radius,
        angle_from: offset.arg(),
        angle_to: offset.arg() + TAU,
    }]);
    let cfg = IntegrationConfig {
        rel_tol: 1e-12,
        abs_tol: 1e-18,
        chart_switch_threshold: f64::INFINITY,
        min_samples_per_segment: 600,
        max_step: radius * TAU / 600.0,
        ..Default::default()
    };
    let mut state = start;
    let (mut ts, mut vs, mut ws) = (vec![], vec![], vec![]);
    let mut visited = vec![0usize];
    let mut last_gap = f64::INFINITY;
    for k in 1..=max_cycles {
        let tr = integrate_path(system, Chart::VW, state, &turn, &cfg, None)?;
        if tr.terminated_reason != TerminationReason::Completed {
            return Err(Error::LoopHitsSingularity);
        }
        let skip = usize::from(k > 1);
        for s in &tr.samples[skip..] {
            ts.push(s.t);
            vs.push(s.coords[0]);
            ws.push(s.coords[1]);
        }
        state = tr.last().coords;
        for (j, o) in others.iter().enumerate() {
            if rel_gap(&state, o) < PENDULUM_CLOSURE && !visited.contains(&(j + 1)) {
                visited.push(j + 1);
            }
        }
        last_gap = rel_gap(&state, &start);
        if last_gap < PENDULUM_CLOSURE {
            let gap_v = PENDULUM_CLOSURE * start[0].norm();
            let gap_w = PENDULUM_CLOSURE * start[1].norm();
            let w = PendulumWindings {
                w_t: winding_number_with_gap(&ts, t_est, radius * 1e-9)?,
                w_v: winding_number_with_gap(&vs, ZERO, gap_v)?,
                w_w: winding_number_with_gap(&ws, ZERO, gap_w)?,
            };
            let leaves = (others.len() as u32 + 1) / visited.len() as u32;
            return Ok((Some(w), Some(leaves), Some(k), last_gap));
        }
    }
    Ok((None, None, None, last_gap))
}

/// Measured winding numbers of the pendulum blow-up loop.
///
/// `loop_radius` sets the initial radius of the time loop; the leaf
/// parameter is halved until two successive traces agree.
pub fn pendulum_loop_windings(pendulum: &Pendulum, loop_radius: f64) -> Result<PendulumReport> {
    let m = pendulum.degree_m();
    let g0 = pendulum.leading();
    if pendulum.trimmed().len() < 2 || g0.norm() < 1e-14 {
        return Err(Error::DegenerateLeadingTerm);
    }
    if m < 2 {
        return Err(Error::OutOfRange("the pendulum needs deg g >= 2 for blow-up".into()));
    }
    if !(loop_radius > 0.0) {
        return Err(Error::Invalid("loop radius must be positive".into()));
    }
    let ham = pendulum.hamiltonian();
    let system = to_charts(&hamiltonian_field(&ham))?;
    let energy = compactify_energy(&ham).h_vw;
    let roots: Vec<Complex64> = (0..m - 1)
        .map(|j| (g0 * 2.0).powf(1.0 / (m - 1) as f64) * Complex64::from_polar(1.0, TAU * j as f64 / (m - 1) as f64))
        .collect();
    let max_cycles = 2 * (m + 1);

    let mut theta = ((m as f64 - 1.0) * loop_radius / 2.0).powf(1.0 / (m as f64 - 1.0));
    let mut attempts: Vec<PendulumAttempt> = Vec::new();
    for _ in 0..8 {
        let starts: Vec<C2> = roots
            .iter()
            .map(|&a| leaf_start(&energy, m, a, theta))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Invalid("energy curve start point did not converge".into()))?;
        let (w, leaves, k, gap) = trace_leaf(&system, m, starts[0], &starts[1..], max_cycles)?;
        attempts.push(PendulumAttempt { theta0: theta, start: starts[0], windings: w, leaves, cycles_to_close: k, discrepancy: gap });
        let n = attempts.len();
        if n >= 2 && attempts[n - 1].windings.is_some() && attempts[n - 1].windings == attempts[n - 2].windings && attempts[n - 1].leaves == attempts[n - 2].leaves {
            break;
        }
        theta /= 2.0;
    }
    let last = attempts.last().expect("at least one attempt");
    let windings = last.windings;
    let leaves = last.leaves;

    let pts: Vec<(f64, f64)> = attempts.iter().map(|a| (a.start[1].norm().ln(), a.start[0].norm().ln())).collect();
    let exponent_ratio = (pts.len() >= 2).then(|| {
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let num: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let den: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        num / den
    });
    let fit_residual = match (exponent_ratio, windings) {
        (Some(r), Some(w)) if w.w_w != 0 => Some((r - w.w_v as f64 / w.w_w as f64).abs()),
        _ => None,
    };
    Ok(PendulumReport {
        potential: pendulum.potential.clone(),
        force: pendulum.force(),
        m,
        level: pendulum.level,
        windings,
        leaves,
        closed: windings.is_some(),
        exponent_ratio,
        fit_residual,
        critical_level: pendulum.critical_level(),
        attempts,
    })
}
