use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::dopri::{self, Halt, StepControl, Verdict};
use super::path::TimePath;
use crate::algebra::{map_point, Chart, ChartSystem, C2};
use crate::error::{Error, Result};

/// Magnitude above which a state counts as diverged.
pub const DIVERGENCE: f64 = 1e12;

/// How the path parameter relates to time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum PathTime {
    /// the path lives in original time `t`; charts may switch freely
    #[default]
    Original,
    /// the path lives in the starting chart's own time (`t`, `t1` or `t2`);
    /// original time is accumulated through the Euler multiplier and the
    /// chart stays fixed
    Chart,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegrationConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub singularity_radius: f64,
    pub chart_switch_threshold: f64,
    pub path_time: PathTime,
    /// original time assigned to the start of a `PathTime::Chart` run
    pub t_start: Complex64,
    /// lower bound on accepted steps per segment, so traces stay dense
    pub min_samples_per_segment: u32,
}

impl Default for IntegrationConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_step: 0.05,
            singularity_radius: 1e-4,
            chart_switch_threshold: 2.0,
            path_time: PathTime::Original,
            t_start: Complex64::new(0.0, 0.0),
            min_samples_per_segment: 200,
        }
    }
}

impl IntegrationConfig {
    pub fn validate(&self) -> Result<()> {
        let tol_ok = |x: f64| x > 0.0 && x <= 1e-2;
        if !tol_ok(self.rel_tol) || !tol_ok(self.abs_tol) {
            return Err(Error::Invalid("rel_tol and abs_tol must lie in (0, 1e-2]".into()));
        }
        if !(self.max_step > 0.0 && self.singularity_radius > 0.0 && self.chart_switch_threshold > 0.0) {
            return Err(Error::Invalid("max_step, singularity_radius and chart_switch_threshold must be positive".into()));
        }
        Ok(())
    }

    pub fn in_chart_time(mut self, t_start: Complex64) -> Self {
        self.path_time = PathTime::Chart;
        self.t_start = t_start;
        self
    }

    pub fn with_tolerances(mut self, rel_tol: f64, abs_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TerminationReason {
    Completed,
    EnteredSingularityBall,
    StepUnderflow,
    Diverged,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub s: f64,
    pub t: Complex64,
    pub chart: Chart,
    pub coords: C2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub terminated_reason: TerminationReason,
}

/// Point the integrator must not enter (usually a blow-up equilibrium).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Target {
    pub chart: Chart,
    pub location: C2,
}

impl Trajectory {
    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trajectory always holds its start sample")
    }

    pub fn first(&self) -> &Sample {
        &self.samples[0]
    }

    /// Coordinates of every sample expressed in one chart (where defined).
    pub fn coords_in(&self, chart: Chart) -> Vec<Option<C2>> {
        self.samples.iter().map(|s| map_point(s.chart, chart, s.coords)).collect()
    }

    /// CSV with columns `s, re_t, im_t, chart, re_c1, im_c1, re_c2, im_c2`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "s,re_t,im_t,chart,re_c1,im_c1,re_c2,im_c2")?;
        for p in &self.samples {
            writeln!(
                w,
                "{},{},{},{},{},{},{},{}",
                fmt17(p.s),
                fmt17(p.t.re),
                fmt17(p.t.im),
                p.chart,
                fmt17(p.coords[0].re),
                fmt17(p.coords[0].im),
                fmt17(p.coords[1].re),
                fmt17(p.coords[1].im)
            )?;
        }
        Ok(())
    }
}

/// Seventeen significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn max_abs(p: &C2) -> f64 {
    p[0].norm().max(p[1].norm())
}

fn dist(a: &C2, b: &C2) -> f64 {
    ((a[0] - b[0]).norm_sqr() + (a[1] - b[1]).norm_sqr()).sqrt()
}

/// Integrate the chart system along a complex-time path.
///
/// With `PathTime::Original` the path is original time and the state is
/// advanced by `F_chart / ρ` where `ρ` is the chart's Euler multiplier,
/// switching charts when a coordinate exceeds the threshold. With
/// `PathTime::Chart` the path is the chart's own time and `t` is carried as
/// an extra state component with `dt = ρ dτ`.
pub fn integrate_path(
    system: &ChartSystem,
    start_chart: Chart,
    start_coords: C2,
    path: &TimePath,
    cfg: &IntegrationConfig,
    designated: Option<Target>,
) -> Result<Trajectory> {
    cfg.validate()?;
    path.validate()?;
    if !(start_coords[0].is_finite() && start_coords[1].is_finite()) {
        return Err(Error::Invalid("start coordinates must be finite".into()));
    }
    let total = path.length();
    let ctl = StepControl {
        rel_tol: cfg.rel_tol,
        abs_tol: cfg.abs_tol,
        max_step: cfg.max_step,
        min_step: 1e-14 * total.max(1e-300),
    };
    let original = cfg.path_time == PathTime::Original;
    let t0 = if original { path.start() } else { cfg.t_start };

    let mut chart = start_chart;
    let mut samples = vec![Sample { s: 0.0, t: t0, chart, coords: start_coords }];
    let mut state = [start_coords[0], start_coords[1], t0];
    let mut s_base = 0.0;

    let in_ball = |chart: Chart, c: &C2| -> bool {
        designated.is_some_and(|d| {
            map_point(chart, d.chart, *c).is_some_and(|q| dist(&q, &d.location) < cfg.singularity_radius)
        })
    };
    if in_ball(chart, &start_coords) {
        return Ok(Trajectory { samples, terminated_reason: TerminationReason::EnteredSingularityBall });
    }

    for seg in path.unrolled() {
        let len = seg.length();
        if len == 0.0 {
            continue;
        }
        let seg_ctl = StepControl {
            max_step: ctl.max_step.min(len / cfg.min_samples_per_segment.max(1) as f64),
            ..ctl
        };
        let mut local = 0.0;
        let mut h = seg_ctl.max_step * 0.1;
        while local < len {
            let field = system.field(chart);
            let m1 = system.euler_exponent;
            let rhs = |s: f64, y: &[Complex64; 3]| -> Option<[Complex64; 3]> {
                let sigma = s / len;
                let dtau = seg.unit_tangent(sigma);
                let p = [y[0], y[1]];
                let v = field.eval(p);
                let rho = match chart {
                    Chart::XY => Complex64::new(1.0, 0.0),
                    _ => y[0].powu(m1),
                };
                let out = if original {
                    if rho.norm() == 0.0 {
                        return None;
                    }
                    [v[0] / rho * dtau, v[1] / rho * dtau, dtau]
                } else {
                    [v[0] * dtau, v[1] * dtau, rho * dtau]
                };
                (out.iter().all(|c| c.is_finite())).then_some(out)
            };
            let mut event: Option<Event> = None;
            let observer = |s: f64, y: &[Complex64; 3]| -> Verdict {
                let p = [y[0], y[1]];
                let t = if original { seg.point(s / len) } else { y[2] };
                samples.push(Sample { s: s_base + s, t, chart, coords: p });
                if in_ball(chart, &p) {
                    event = Some(Event::Ball);
                    return Verdict::Stop;
                }
                if original && max_abs(&p) > cfg.chart_switch_threshold {
                    if let Some((c, q)) = best_chart(chart, &p) {
                        if c != chart && max_abs(&q) < max_abs(&p) {
                            event = Some(Event::Switch(c, q));
                            return Verdict::Stop;
                        }
                    }
                }
                if max_abs(&p) > DIVERGENCE {
                    let all_big = !original
                        || Chart::ALL
                            .iter()
                            .filter_map(|&c| map_point(chart, c, p))
                            .all(|q| max_abs(&q) > DIVERGENCE);
                    if all_big {
                        event = Some(Event::Diverged);
                        return Verdict::Stop;
                    }
                }
                Verdict::Continue
            };
            let result = dopri::integrate(rhs, local, len, state, h, &seg_ctl, observer);
            match result {
                Err(Halt::Underflow { .. }) => {
                    return Ok(Trajectory { samples, terminated_reason: TerminationReason::StepUnderflow });
                }
                Ok(out) => {
                    local = out.s;
                    state = out.y;
                    h = out.next_h;
                    match event {
                        None => {}
                        Some(Event::Ball) => {
                            return Ok(Trajectory {
                                samples,
                                terminated_reason: TerminationReason::EnteredSingularityBall,
                            })
                        }
                        Some(Event::Diverged) => {
                            return Ok(Trajectory { samples, terminated_reason: TerminationReason::Diverged })
                        }
                        Some(Event::Switch(c, q)) => {
                            chart = c;
                            state = [q[0], q[1], state[2]];
                            let last = samples.last_mut().expect("observer pushed a sample");
                            last.chart = c;
                            last.coords = q;
                        }
                    }
                }
            }
        }
        s_base += len;
    }
    Ok(Trajectory { samples, terminated_reason: TerminationReason::Completed })
}

enum Event {
    Ball,
    Switch(Chart, C2),
    Diverged,
}

/// Chart with the smallest max-coordinate magnitude among the valid ones.
fn best_chart(current: Chart, p: &C2) -> Option<(Chart, C2)> {
    Chart::ALL
        .iter()
        .filter_map(|&c| map_point(current, c, *p).map(|q| (c, q)))
        .min_by(|a, b| max_abs(&a.1).total_cmp(&max_abs(&b.1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{to_charts, BivariatePolynomial, PlanarField};

    fn riccati() -> ChartSystem {
        let f = BivariatePolynomial::from_real(&[(2, 0, 1.0)]);
        let g = BivariatePolynomial::from_real(&[(0, 1, -1.0)]);
        to_charts(&PlanarField::new(f, g)).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn riccati_line() {
        let sys = riccati();
        let tr = integrate_path(
            &sys,
            Chart::XY,
            [c(1.0, 0.0), c(0.0, 0.0)],
            &TimePath::line(c(0.0, 0.0), c(0.5, 0.0)),
            &IntegrationConfig::default(),
            None,
        )
        .unwrap();
        let end = tr.last();
        let xy = map_point(end.chart, Chart::XY, end.coords).unwrap();
        assert_eq!(tr.terminated_reason, TerminationReason::Completed);
        assert!((xy[0] - c(2.0, 0.0)).norm() < 1e-9, "{xy:?}");
    }
}
