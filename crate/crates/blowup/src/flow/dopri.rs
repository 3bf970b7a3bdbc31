//! Dormand–Prince 5(4) with PI step control on complex states.

use num_complex::Complex64;

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;
const BETA: f64 = 0.04;
const ALPHA: f64 = 0.2 - BETA * 0.75;

pub type State<const N: usize> = [Complex64; N];

#[derive(Debug, Clone, Copy)]
pub struct StepControl {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub min_step: f64,
}

/// What the observer wants after an accepted step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Continue,
    Stop,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Halt {
    /// step size fell below `min_step`
    Underflow { at: f64 },
}

#[derive(Debug, Clone, Copy)]
pub struct Outcome<const N: usize> {
    pub s: f64,
    pub y: State<N>,
    pub next_h: f64,
    pub stopped: bool,
}

fn axpy<const N: usize>(y: &State<N>, h: f64, terms: &[(f64, &State<N>)]) -> State<N> {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (c, k) in terms {
            acc += k[i] * *c;
        }
        *o += acc * h;
    }
    out
}

fn finite<const N: usize>(y: &State<N>) -> bool {
    y.iter().all(|c| c.is_finite())
}

/// Integrate `dy/ds = rhs(s, y)` from `s0` to `s1 > s0`.
///
/// `rhs` returns `None` where the field cannot be evaluated; such steps are
/// rejected and retried smaller. The observer sees every accepted step and
/// may stop the integration early.
pub fn integrate<const N: usize>(
    mut rhs: impl FnMut(f64, &State<N>) -> Option<State<N>>,
    s0: f64,
    s1: f64,
    y0: State<N>,
    h0: f64,
    ctl: &StepControl,
    mut observer: impl FnMut(f64, &State<N>) -> Verdict,
) -> Result<Outcome<N>, Halt> {
    let mut s = s0;
    let mut y = y0;
    let mut h = h0.min(ctl.max_step).min(s1 - s0).max(ctl.min_step);
    let mut err_prev = 1e-4_f64;
    let mut k1 = match rhs(s, &y) {
        Some(k) => k,
        None => return Err(Halt::Underflow { at: s }),
    };
    let mut last_h = h;

    while s < s1 {
        let remaining = s1 - s;
        let hard_end = h >= remaining;
        if hard_end {
            h = remaining;
        }
        let attempt = (|| {
            let k2 = rhs(s + C2 * h, &axpy(&y, h, &[(A21, &k1)]))?;
            let k3 = rhs(s + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]))?;
            let k4 = rhs(s + C4 * h, &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]))?;
            let k5 = rhs(s + C5 * h, &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]))?;
            let k6 = rhs(
                s + h,
                &axpy(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
            )?;
            let y5 = axpy(&y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
            if !finite(&y5) {
                return None;
            }
            let k7 = rhs(s + h, &y5)?;
            let mut err = 0.0;
            for i in 0..N {
                let e = (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7) * h;
                let sc = ctl.abs_tol + ctl.rel_tol * y[i].norm().max(y5[i].norm());
                err += (e.norm() / sc).powi(2);
            }
            let err = (err / N as f64).sqrt();
            err.is_finite().then_some((y5, k7, err))
        })();

        match attempt {
            Some((y5, k7, err)) if err <= 1.0 => {
                let err = err.max(1e-10);
                let fac = (SAFETY * err.powf(-ALPHA) * err_prev.powf(BETA)).clamp(FAC_MIN, FAC_MAX);
                err_prev = err;
                s = if hard_end { s1 } else { s + h };
                y = y5;
                k1 = k7;
                last_h = h;
                if observer(s, &y) == Verdict::Stop {
                    return Ok(Outcome { s, y, next_h: h, stopped: true });
                }
                h = (h * fac).min(ctl.max_step);
            }
            Some((_, _, err)) => {
                let fac = (SAFETY * err.powf(-ALPHA)).clamp(FAC_MIN, 1.0);
                h *= fac;
            }
            None => h *= 0.25,
        }
        if h < ctl.min_step && s < s1 {
            return Err(Halt::Underflow { at: s });
        }
    }
    Ok(Outcome { s, y, next_h: last_h, stopped: false })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctl() -> StepControl {
        StepControl { rel_tol: 1e-11, abs_tol: 1e-13, max_step: 0.1, min_step: 1e-14 }
    }

    #[test]
    fn exponential_growth() {
        let lam = Complex64::new(-0.5, 2.0);
        let out = integrate(
            |_, y: &State<1>| Some([lam * y[0]]),
            0.0,
            3.0,
            [Complex64::new(1.0, 0.0)],
            0.01,
            &ctl(),
            |_, _| Verdict::Continue,
        )
        .unwrap();
        assert!((out.y[0] - (lam * 3.0).exp()).norm() < 1e-9);
    }

    #[test]
    fn pole_underflows() {
        // y' = y², y(0) = 1 has a pole at s = 1
        let r = integrate(
            |_, y: &State<1>| Some([y[0] * y[0]]),
            0.0,
            2.0,
            [Complex64::new(1.0, 0.0)],
            0.01,
            &ctl(),
            |_, _| Verdict::Continue,
        );
        assert!(matches!(r, Err(Halt::Underflow { .. })));
    }
}
