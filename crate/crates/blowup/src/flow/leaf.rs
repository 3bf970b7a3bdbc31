use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::dopri::{self, Halt, StepControl, Verdict};
use super::integrate::IntegrationConfig;
use super::path::TimePath;
use crate::algebra::{Chart, ChartSystem};
use crate::error::{Error, Result};

/// Transversality guard: `|F_base|` must exceed this times `|F_fiber|`.
pub const TANGENCY: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeafContinuation {
    pub fiber_end: Complex64,
    /// `(base, fiber)` pairs along the loop
    pub fiber_trace: Vec<(Complex64, Complex64)>,
}

/// Holonomy image of `fiber_start` over `base_loop`.
///
/// The fiber is the first chart coordinate, the base the second, and the
/// leaf obeys `d fiber / d base = F_fiber / F_base`; time never enters.
pub fn continue_leaf(
    system: &ChartSystem,
    chart: Chart,
    base_loop: &TimePath,
    fiber_start: Complex64,
) -> Result<LeafContinuation> {
    continue_leaf_with(system, chart, base_loop, fiber_start, &IntegrationConfig::default())
}

pub fn continue_leaf_with(
    system: &ChartSystem,
    chart: Chart,
    base_loop: &TimePath,
    fiber_start: Complex64,
    cfg: &IntegrationConfig,
) -> Result<LeafContinuation> {
    base_loop.validate()?;
    let field = system.field(chart);
    let total = base_loop.length();
    let ctl = StepControl {
        rel_tol: cfg.rel_tol,
        abs_tol: cfg.abs_tol,
        max_step: cfg.max_step,
        min_step: 1e-14 * total.max(1e-300),
    };
    let mut fiber = fiber_start;
    let mut trace = vec![(base_loop.start(), fiber_start)];
    for seg in base_loop.unrolled() {
        let len = seg.length();
        if len == 0.0 {
            continue;
        }
        let seg_ctl = StepControl { max_step: ctl.max_step.min(len / cfg.min_samples_per_segment.max(1) as f64), ..ctl };
        let mut tangency: Option<f64> = None;
        let rhs = |s: f64, y: &[Complex64; 1]| -> Option<[Complex64; 1]> {
            let b = seg.point(s / len);
            let v = field.eval([y[0], b]);
            if v[1].norm() <= TANGENCY * v[0].norm() || v[1].norm() == 0.0 {
                tangency = Some(s);
                return None;
            }
            let d = v[0] / v[1] * seg.unit_tangent(s / len);
            d.is_finite().then_some([d])
        };
        let out = dopri::integrate(rhs, 0.0, len, [fiber], seg_ctl.max_step * 0.1, &seg_ctl, |s, y| {
            trace.push((seg.point(s / len), y[0]));
            Verdict::Continue
        });
        match out {
            Ok(o) => fiber = o.y[0],
            Err(Halt::Underflow { at }) => {
                return Err(match tangency {
                    Some(t) => Error::SectionTangency { at: t },
                    None => Error::StepUnderflow { at },
                })
            }
        }
    }
    Ok(LeafContinuation { fiber_end: fiber, fiber_trace: trace })
}
