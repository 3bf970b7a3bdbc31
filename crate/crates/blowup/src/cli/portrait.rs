use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{map_point, Chart, ChartSystem, C2};
use crate::equilibria::{classify_spectrum, find_equilibria, SearchRegion, DEFAULT_DENOMINATOR_BOUND, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::flow::{fmt17, integrate_path, IntegrationConfig, TerminationReason, TimePath, Trajectory};
use crate::holonomy::{approach_blowup, blowup_star, fit_blowup_time, masuda_detour, BranchKind};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeDirection {
    Real,
    Imaginary,
    /// direction `e^{i angle}`
    Ray(f64),
}

impl TimeDirection {
    pub fn unit(self) -> Complex64 {
        match self {
            TimeDirection::Real => Complex64::new(1.0, 0.0),
            TimeDirection::Imaginary => Complex64::new(0.0, 1.0),
            TimeDirection::Ray(a) => Complex64::from_polar(1.0, a),
        }
    }
}

/// Seeds vary one complex coordinate over a rectangle; the other is fixed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    /// which coordinate varies, 0 or 1
    #[serde(default)]
    pub coordinate: usize,
    pub re: [f64; 2],
    pub im: [f64; 2],
    pub counts: [usize; 2],
    #[serde(default)]
    pub fixed: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PortraitSpec {
    pub chart: Chart,
    pub grid: Grid,
    pub time_direction: TimeDirection,
    pub horizon: f64,
    #[serde(default)]
    pub styling: BTreeMap<String, serde_json::Value>,
    /// index into the `All` equilibrium list whose blow-up star is overlaid
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equilibrium: Option<usize>,
}

impl PortraitSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.horizon > 0.0) {
            return Err(Error::Invalid("portrait horizon must be positive".into()));
        }
        if self.grid.coordinate > 1 {
            return Err(Error::Invalid("grid coordinate must be 0 or 1".into()));
        }
        let finite = self.grid.re.iter().chain(&self.grid.im).all(|x| x.is_finite());
        if !finite || !self.grid.fixed.is_finite() {
            return Err(Error::Invalid("grid bounds must be finite".into()));
        }
        Ok(())
    }

    pub fn seeds(&self) -> Vec<C2> {
        let axis = |r: [f64; 2], n: usize| -> Vec<f64> {
            match n {
                0 => vec![],
                1 => vec![r[0]],
                _ => (0..n).map(|i| r[0] + (r[1] - r[0]) * i as f64 / (n - 1) as f64).collect(),
            }
        };
        let mut out = Vec::new();
        for b in axis(self.grid.im, self.grid.counts[1]) {
            for a in axis(self.grid.re, self.grid.counts[0]) {
                let c = Complex64::new(a, b);
                out.push(if self.grid.coordinate == 0 { [c, self.grid.fixed] } else { [self.grid.fixed, c] });
            }
        }
        out
    }

    fn style_str(&self, key: &str, default: &str) -> String {
        self.styling.get(key).and_then(|v| v.as_str()).unwrap_or(default).to_string()
    }

    fn window(&self) -> [f64; 4] {
        self.styling
            .get("window")
            .and_then(|v| serde_json::from_value::<[f64; 4]>(v.clone()).ok())
            .unwrap_or([-3.0, 3.0, -3.0, 3.0])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedResult {
    pub index: usize,
    pub start: C2,
    pub status: Option<TerminationReason>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub end_t: Option<Complex64>,
    /// final state in the portrait chart, when representable there
    pub end: Option<C2>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StarBranch {
    pub kind: BranchKind,
    pub direction: Complex64,
    pub points: Vec<C2>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PortraitBundle {
    pub seeds: Vec<SeedResult>,
    pub branches: Vec<StarBranch>,
    #[serde(skip)]
    pub svg: String,
    #[serde(skip)]
    pub csv: String,
}

/// Blow-up star of an equilibrium at infinity, as short curves in the portrait chart.
fn star_overlay(system: &ChartSystem, index: usize, chart: Chart) -> Result<Vec<StarBranch>> {
    let eqs = find_equilibria(system, SearchRegion::All)?;
    let eq = eqs.get(index).ok_or_else(|| Error::OutOfRange(format!("equilibrium index {index} of {}", eqs.len())))?;
    if !eq.at_infinity() {
        return Err(Error::Invalid("blow-up stars need an equilibrium at infinity".into()));
    }
    let eq = classify_spectrum(system, eq, DEFAULT_TOL, DEFAULT_DENOMINATOR_BOUND);
    let cfg = IntegrationConfig { singularity_radius: 0.05, ..Default::default() };
    let start = [Complex64::new(0.5, 0.0), eq.location[1]];
    let approach = approach_blowup(system, &eq, start, &cfg)?;
    let fit = fit_blowup_time(system, &eq, &approach)?;
    let radius = 0.5 * (approach.last().t - fit.t_estimate).norm();
    let report = (1..=12)
        .map(|k| masuda_detour(system, &eq, &approach, radius, k, None))
        .find(|r| r.as_ref().map_or(true, |r| r.closed))
        .unwrap_or(Err(Error::ReportNotClosed))?;
    let branches = blowup_star(system, &eq, &report)?;
    Ok(branches
        .into_iter()
        .map(|b| {
            let points = (0..=40)
                .filter_map(|i| {
                    let s = 0.02 * 50f64.powf(i as f64 / 40.0);
                    map_point(eq.chart, chart, [eq.location[0] + b.direction * s, eq.location[1]])
                })
                .collect();
            StarBranch { kind: b.kind, direction: b.direction, points }
        })
        .collect())
}

fn project(p: &C2, projection: &str) -> (f64, f64) {
    match projection {
        "c1" => (p[0].re, p[0].im),
        "c2" => (p[1].re, p[1].im),
        _ => (p[0].re, p[1].re),
    }
}

fn polyline(out: &mut String, pts: &[(f64, f64)], win: [f64; 4], size: f64, stroke: &str) {
    let (sx, sy) = (size / (win[1] - win[0]), size / (win[3] - win[2]));
    let inside = |p: &(f64, f64)| p.0 >= win[0] && p.0 <= win[1] && p.1 >= win[2] && p.1 <= win[3];
    // split where the curve leaves the window
    for run in pts.split(|p| !inside(p) || !p.0.is_finite() || !p.1.is_finite()) {
        if run.len() < 2 {
            continue;
        }
        let d: Vec<String> = run.iter().map(|p| format!("{:.3},{:.3}", (p.0 - win[0]) * sx, (win[3] - p.1) * sy)).collect();
        let _ = writeln!(out, r#"<polyline fill="none" stroke="{stroke}" stroke-width="1" points="{}"/>"#, d.join(" "));
    }
}

fn render_svg(spec: &PortraitSpec, trajectories: &[Option<Vec<C2>>], statuses: &[Option<TerminationReason>], branches: &[StarBranch], stamp: Option<u64>) -> String {
    let win = spec.window();
    let size = 600.0;
    let projection = spec.style_str("projection", "real");
    let color = spec.style_str("color", "#1f5fbf");
    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#);
    if let Some(ts) = stamp {
        let _ = writeln!(out, "<metadata>generated at unix time {ts}</metadata>");
    }
    let _ = writeln!(out, r#"<rect width="{size}" height="{size}" fill="white"/>"#);
    let (sx, sy) = (size / (win[1] - win[0]), size / (win[3] - win[2]));
    if win[0] <= 0.0 && win[1] >= 0.0 {
        let x = -win[0] * sx;
        let _ = writeln!(out, r##"<line x1="{x:.3}" y1="0" x2="{x:.3}" y2="{size}" stroke="#888" stroke-width="0.5"/>"##);
    }
    if win[2] <= 0.0 && win[3] >= 0.0 {
        let y = win[3] * sy;
        let _ = writeln!(out, r##"<line x1="0" y1="{y:.3}" x2="{size}" y2="{y:.3}" stroke="#888" stroke-width="0.5"/>"##);
    }
    for (tr, st) in trajectories.iter().zip(statuses) {
        if let Some(pts) = tr {
            let pts: Vec<(f64, f64)> = pts.iter().map(|p| project(p, &projection)).collect();
            let stroke = if *st == Some(TerminationReason::Completed) { color.as_str() } else { "#bf3f1f" };
            polyline(&mut out, &pts, win, size, stroke);
        }
    }
    for b in branches {
        let pts: Vec<(f64, f64)> = b.points.iter().map(|p| project(p, &projection)).collect();
        let stroke = if b.kind == BranchKind::BlowUp { "#e08000" } else { "#208040" };
        polyline(&mut out, &pts, win, size, stroke);
    }
    out.push_str("</svg>\n");
    out
}

/// Integrate every seed of the grid and render SVG and CSV. Seeds run in
/// parallel on the current rayon pool; results keep seed order.
pub fn sample_portrait(system: &ChartSystem, spec: &PortraitSpec, reproducible: bool) -> Result<PortraitBundle> {
    spec.validate()?;
    let path = TimePath::line(Complex64::new(0.0, 0.0), spec.time_direction.unit() * spec.horizon);
    let cfg = IntegrationConfig::default();
    let seeds = spec.seeds();
    let runs: Vec<Result<Trajectory>> = seeds.par_iter().map(|s| integrate_path(system, spec.chart, *s, &path, &cfg, None)).collect();

    let mut csv = String::from("seed,s,re_t,im_t,chart,re_c1,im_c1,re_c2,im_c2\n");
    let mut results = Vec::with_capacity(seeds.len());
    let mut traces = Vec::with_capacity(seeds.len());
    let mut statuses = Vec::with_capacity(seeds.len());
    for (i, (seed, run)) in seeds.iter().zip(runs).enumerate() {
        match run {
            Ok(tr) => {
                for p in &tr.samples {
                    let _ = writeln!(
                        csv,
                        "{i},{},{},{},{},{},{},{},{}",
                        fmt17(p.s),
                        fmt17(p.t.re),
                        fmt17(p.t.im),
                        p.chart,
                        fmt17(p.coords[0].re),
                        fmt17(p.coords[0].im),
                        fmt17(p.coords[1].re),
                        fmt17(p.coords[1].im)
                    );
                }
                let last = tr.last();
                traces.push(Some(tr.coords_in(spec.chart).into_iter().flatten().collect()));
                statuses.push(Some(tr.terminated_reason));
                results.push(SeedResult {
                    index: i,
                    start: *seed,
                    status: Some(tr.terminated_reason),
                    error: None,
                    end_t: Some(last.t),
                    end: map_point(last.chart, spec.chart, last.coords),
                });
            }
            Err(e) => {
                traces.push(None);
                statuses.push(None);
                results.push(SeedResult { index: i, start: *seed, status: None, error: Some(e.to_string()), end_t: None, end: None });
            }
        }
    }
    let branches = match spec.equilibrium {
        Some(k) => star_overlay(system, k, spec.chart)?,
        None => vec![],
    };
    let stamp = (!reproducible).then(|| {
        std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
    });
    let svg = render_svg(spec, &traces, &statuses, &branches, stamp);
    Ok(PortraitBundle { seeds: results, branches, svg, csv })
}
