use nalgebra::DMatrix;
use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Horner evaluation of ascending coefficients; returns `(p, p')`.
pub fn horner(coeffs: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let mut p = ZERO;
    let mut dp = ZERO;
    for &c in coeffs.iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

/// Roots of `Σ coeffs[i] x^i` with multiplicity.
///
/// Companion-matrix eigenvalues followed by three Newton steps. Exact zero
/// roots are split off first; leading coefficients below `1e-14` of the
/// largest are treated as absent.
pub fn poly_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return vec![];
    }
    let mut hi = coeffs.len() - 1;
    while coeffs[hi].norm() <= 1e-14 * scale {
        hi -= 1;
    }
    let mut lo = 0;
    while coeffs[lo] == ZERO {
        lo += 1;
    }
    let mut roots = vec![ZERO; lo];
    let core = &coeffs[lo..=hi];
    let n = core.len() - 1;
    if n == 0 {
        return roots;
    }
    let lead = core[n];
    let mut comp = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        comp[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        comp[(i, n - 1)] = -core[i] / lead;
    }
    // unshifted QR stalls on symmetric root patterns such as x^4 - 1
    let eig: Vec<Complex64> = nalgebra::linalg::Schur::try_new(comp, f64::EPSILON, 1000)
        .and_then(|s| s.eigenvalues())
        .map(|e| e.iter().copied().collect())
        .unwrap_or_else(|| aberth(core));
    for mut r in eig {
        for _ in 0..3 {
            let (p, dp) = horner(core, r);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            if !step.is_finite() {
                break;
            }
            r -= step;
        }
        roots.push(r);
    }
    roots
}

/// Simultaneous Aberth–Ehrlich iteration from a rotated circle of starting points.
fn aberth(core: &[Complex64]) -> Vec<Complex64> {
    let n = core.len() - 1;
    let lead = core[n];
    let radius = 1.0 + core[..n].iter().map(|c| (c / lead).norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> =
        (0..n).map(|k| Complex64::from_polar(0.5 * radius, std::f64::consts::TAU * (k as f64 + 0.25) / n as f64 + 0.4)).collect();
    for _ in 0..500 {
        let mut moved: f64 = 0.0;
        for i in 0..n {
            let (p, dp) = horner(core, z[i]);
            if p == ZERO {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let step = ratio / (1.0 - ratio * repulsion);
            if step.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// Drop near-duplicate points (within `tol` relative to `1 + |z|`).
pub fn dedupe(mut pts: Vec<Complex64>, tol: f64) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = Vec::new();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    for p in pts {
        if !out.iter().any(|q| (p - q).norm() <= tol * (1.0 + p.norm())) {
            out.push(p);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_roots_of_unity() {
        let c = [Complex64::new(-1.0, 0.0), ZERO, ZERO, Complex64::new(1.0, 0.0)];
        let r = poly_roots(&c);
        assert_eq!(r.len(), 3);
        for z in r {
            assert!((z.powu(3) - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn zero_roots_split() {
        // z^2 (z - 2)
        let c = [ZERO, ZERO, Complex64::new(-2.0, 0.0), Complex64::new(1.0, 0.0)];
        let mut r = poly_roots(&c);
        r.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert_eq!(r[0], ZERO);
        assert_eq!(r[1], ZERO);
        assert!((r[2] - Complex64::new(2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn fourth_roots_of_unity() {
        let one = Complex64::new(1.0, 0.0);
        let r = poly_roots(&[-one, ZERO, ZERO, ZERO, one]);
        assert_eq!(r.len(), 4);
        for z in &r {
            assert!((z.powu(4) - one).norm() < 1e-14);
        }
        let a = aberth(&[-one, ZERO, ZERO, ZERO, one]);
        assert!(a.iter().all(|z| (z.powu(4) - one).norm() < 1e-13));
    }
}
