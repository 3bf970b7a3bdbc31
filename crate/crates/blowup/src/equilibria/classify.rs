use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::rational::rational_spectral_quotient;
use super::roots::{dedupe, horner, poly_roots};
use crate::algebra::{BivariatePolynomial, Chart, ChartSystem, Mat2, PlanarField, C2};
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_DENOMINATOR_BOUND: u64 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchRegion {
    FiniteOnly,
    InfinityOnly,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Domain {
    Poincare,
    Siegel,
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Resonance {
    Nonresonant,
    Resonant { order: u32 },
    Indeterminate,
}

/// Spectral data attached by [`classify_spectrum`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub eigenvalues: C2,
    /// `λ₁/λ₂`; absent when `λ₂` vanishes
    pub spectral_quotient: Option<Complex64>,
    pub semisimple: bool,
    pub domain: Domain,
    pub resonance: Resonance,
    pub rational_quotient: Option<(i64, i64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumRecord {
    pub chart: Chart,
    pub location: C2,
    #[serde(flatten)]
    pub spectrum: Option<Spectrum>,
}

impl EquilibriumRecord {
    pub fn new(chart: Chart, location: C2) -> Self {
        Self { chart, location, spectrum: None }
    }

    pub fn spectrum(&self) -> Result<&Spectrum> {
        self.spectrum
            .as_ref()
            .ok_or_else(|| Error::Invalid("equilibrium has not been classified".into()))
    }

    /// Whether the point lies on the line at infinity of its chart.
    pub fn at_infinity(&self) -> bool {
        self.chart != Chart::XY && self.location[0] == ZERO
    }
}

const SIEGEL_NOTE: &str =
    "negative rational quotient reported resonant under the convention that every rational Siegel quotient is resonant";

/// Eigenvalues of a 2×2 matrix ordered so that `λ₁` belongs to the first axis
/// whenever the matrix is triangular.
pub fn eigenvalues(j: &Mat2) -> C2 {
    if j[0][1] == ZERO || j[1][0] == ZERO {
        return [j[0][0], j[1][1]];
    }
    let half_tr = (j[0][0] + j[1][1]) * 0.5;
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    let root = (half_tr * half_tr - det).sqrt();
    let (a, b) = (half_tr + root, half_tr - root);
    if (a - j[0][0]).norm() <= (b - j[0][0]).norm() {
        [a, b]
    } else {
        [b, a]
    }
}

/// Eigenvalues, domain and resonance of an equilibrium.
pub fn classify_spectrum(
    system: &ChartSystem,
    eq: &EquilibriumRecord,
    tol: f64,
    denominator_bound: u64,
) -> EquilibriumRecord {
    let j = system.field(eq.chart).jacobian(eq.location);
    let mut out = eq.clone();
    out.spectrum = Some(spectrum_of(&j, tol, denominator_bound));
    out
}

/// Classification of a linearization given as a matrix.
pub fn spectrum_of(j: &Mat2, tol: f64, denominator_bound: u64) -> Spectrum {
    let lam = eigenvalues(j);
    let scale = lam[0].norm().max(lam[1].norm());
    let mat_scale = j.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max).max(1e-300);
    let triangular = j[0][1] == ZERO || j[1][0] == ZERO;
    let eq_tol = if triangular { 1e-10 } else { 1e-7 };
    let equal = (lam[0] - lam[1]).norm() <= eq_tol * mat_scale;
    let semisimple = if equal {
        j[0][1].norm() <= 1e-10 * mat_scale
            && j[1][0].norm() <= 1e-10 * mat_scale
            && (j[0][0] - j[1][1]).norm() <= 1e-10 * mat_scale
    } else {
        true
    };
    let quotient = if lam[1].norm() <= tol * scale || scale == 0.0 { None } else { Some(lam[0] / lam[1]) };

    let degenerate = scale == 0.0 || lam[0].norm().min(lam[1].norm()) < tol * scale;
    let domain = if degenerate {
        Domain::Degenerate
    } else {
        let d = lam[1] - lam[0];
        let p = (-(lam[0] * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0);
        let p = if p.is_finite() { p } else { 0.0 };
        if (lam[0] + d * p).norm() > tol * scale {
            Domain::Poincare
        } else {
            Domain::Siegel
        }
    };

    let q = quotient.unwrap_or(Complex64::new(f64::INFINITY, 0.0));
    let real = q.im.abs() <= tol * q.norm().max(1.0);
    let mut rational = None;
    let mut note = None;
    let resonance = match domain {
        Domain::Degenerate => Resonance::Indeterminate,
        _ if !real => Resonance::Nonresonant,
        Domain::Poincare => {
            rational = rational_spectral_quotient(q.re, tol, denominator_bound);
            match rational {
                Some((n, 1)) if n >= 2 => Resonance::Resonant { order: n as u32 },
                Some((1, n)) if n >= 2 => Resonance::Resonant { order: n as u32 },
                _ => Resonance::Nonresonant,
            }
        }
        Domain::Siegel => {
            rational = rational_spectral_quotient(q.re, tol, denominator_bound);
            match rational {
                Some((n1, n2)) => {
                    note = Some(SIEGEL_NOTE.to_string());
                    Resonance::Resonant { order: (n1.unsigned_abs() + n2.unsigned_abs() + 1) as u32 }
                }
                None => Resonance::Indeterminate,
            }
        }
    };
    Spectrum {
        eigenvalues: lam,
        spectral_quotient: quotient,
        semisimple,
        domain,
        resonance,
        rational_quotient: rational,
        note,
    }
}

/// Equilibria of the chart system in the requested region.
pub fn find_equilibria(system: &ChartSystem, search: SearchRegion) -> Result<Vec<EquilibriumRecord>> {
    let mut out = Vec::new();
    if matches!(search, SearchRegion::FiniteOnly | SearchRegion::All) {
        for p in finite_equilibria(&system.xy_field)? {
            out.push(EquilibriumRecord::new(Chart::XY, p));
        }
    }
    if matches!(search, SearchRegion::InfinityOnly | SearchRegion::All) {
        out.extend(infinity_equilibria(system)?);
    }
    Ok(out)
}

fn univariate_roots_checked(coeffs: &[Complex64], what: &str) -> Result<Vec<Complex64>> {
    if coeffs.iter().all(|c| *c == ZERO) {
        return Err(Error::DegenerateSystem(format!("{what} vanishes identically")));
    }
    Ok(poly_roots(coeffs))
}

fn infinity_equilibria(system: &ChartSystem) -> Result<Vec<EquilibriumRecord>> {
    let p0 = system.uz_field.g.restrict_x(ZERO);
    let q0 = system.vw_field.g.restrict_x(ZERO);
    let zs = dedupe(univariate_roots_checked(&p0, "the line at infinity (uz chart)")?, 1e-9);
    let ws = dedupe(univariate_roots_checked(&q0, "the line at infinity (vw chart)")?, 1e-9);
    let mut out: Vec<EquilibriumRecord> =
        zs.iter().map(|&z| EquilibriumRecord::new(Chart::UZ, [ZERO, z])).collect();
    for w in ws {
        let dup = w != ZERO && zs.iter().any(|&z| (z * w - 1.0).norm() < 1e-8);
        if !dup {
            out.push(EquilibriumRecord::new(Chart::VW, [ZERO, w]));
        }
    }
    Ok(out)
}

/// Coefficients of `p` as a polynomial in `y` whose coefficients are
/// polynomials in `x`, evaluated at `x0`, padded to length `deg_y + 1`.
fn y_coeffs_at(p: &BivariatePolynomial, x0: Complex64, deg_y: usize) -> Vec<Complex64> {
    let mut v = p.restrict_x(x0);
    v.resize(deg_y + 1, ZERO);
    v
}

fn sylvester_det(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    let (da, db) = (a.len() - 1, b.len() - 1);
    let n = da + db;
    if n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for r in 0..db {
        for (i, &c) in a.iter().rev().enumerate() {
            m[(r, r + i)] = c;
        }
    }
    for r in 0..da {
        for (i, &c) in b.iter().rev().enumerate() {
            m[(db + r, r + i)] = c;
        }
    }
    m.determinant()
}

/// Finite equilibria by resultant elimination in `y` and joint Newton polishing.
pub fn finite_equilibria(field: &PlanarField) -> Result<Vec<C2>> {
    let (f, g) = (&field.f, &field.g);
    if f.is_zero() || g.is_zero() {
        return Err(Error::DegenerateSystem("one field component vanishes identically".into()));
    }
    let (dfy, dgy) = (f.degree_y() as usize, g.degree_y() as usize);
    let mut xs = Vec::new();
    if dfy == 0 && dgy == 0 {
        // both independent of y: a common root would be a vertical line of equilibria
        let r = poly_roots(&f.restrict_y(ZERO));
        if r.iter().any(|&x| horner(&g.restrict_y(ZERO), x).0.norm() < 1e-10) {
            return Err(Error::DegenerateSystem("a vertical line consists of equilibria".into()));
        }
        return Ok(vec![]);
    }
    let deg_r = (f.degree() * g.degree()) as usize;
    let n = deg_r + 1;
    let samples: Vec<Complex64> = (0..n)
        .map(|i| {
            let x = Complex64::from_polar(1.0, std::f64::consts::TAU * i as f64 / n as f64);
            sylvester_det(&y_coeffs_at(f, x, dfy), &y_coeffs_at(g, x, dgy))
        })
        .collect();
    let size = samples.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if size < 1e-300 {
        return Err(Error::DegenerateSystem("components share a common factor".into()));
    }
    // inverse DFT gives the coefficients of R(x)
    let coeffs: Vec<Complex64> = (0..n)
        .map(|k| {
            samples
                .iter()
                .enumerate()
                .map(|(i, &s)| s * Complex64::from_polar(1.0, -std::f64::consts::TAU * (i * k) as f64 / n as f64))
                .sum::<Complex64>()
                / n as f64
        })
        .map(|c| if c.norm() < 1e-13 * size { ZERO } else { c })
        .collect();
    if coeffs.iter().all(|c| *c == ZERO) {
        return Err(Error::DegenerateSystem("components share a common factor".into()));
    }
    xs.extend(poly_roots(&coeffs));
    let xs = dedupe(xs, 1e-7);

    // multiple roots polish only to about sqrt(eps); such clusters are merged to their centroid
    let mut pts: Vec<C2> = Vec::new();
    let mut weight: Vec<f64> = Vec::new();
    for x in xs {
        let flat = |p: &BivariatePolynomial| p.restrict_x(x).iter().all(|c| c.norm() < 1e-10);
        if flat(f) && flat(g) {
            return Err(Error::DegenerateSystem("a vertical line consists of equilibria".into()));
        }
        let (primary, other) = if dfy > 0 && (dgy == 0 || dfy <= dgy) { (f, g) } else { (g, f) };
        let ys = poly_roots(&primary.restrict_x(x));
        let ys = if ys.is_empty() && primary.degree_y() == 0 { poly_roots(&other.restrict_x(x)) } else { ys };
        for y in ys {
            if let Some(p) = polish(field, [x, y]) {
                let near = |q: &C2| (q[0] - p[0]).norm() + (q[1] - p[1]).norm() < 1e-6 * (1.0 + p[0].norm() + p[1].norm());
                match pts.iter().position(near) {
                    Some(i) => {
                        let w = weight[i];
                        pts[i] = [(pts[i][0] * w + p[0]) / (w + 1.0), (pts[i][1] * w + p[1]) / (w + 1.0)];
                        weight[i] += 1.0;
                    }
                    None => {
                        pts.push(p);
                        weight.push(1.0);
                    }
                }
            }
        }
    }
    pts.sort_by(|a, b| a[0].re.total_cmp(&b[0].re).then(a[0].im.total_cmp(&b[0].im)).then(a[1].re.total_cmp(&b[1].re)));
    Ok(pts)
}

/// Joint Newton iteration; `None` unless the residual drops below `1e-12`.
pub fn polish(field: &PlanarField, mut p: C2) -> Option<C2> {
    let resid = |p: &C2| {
        let v = field.eval(*p);
        v[0].norm().max(v[1].norm())
    };
    for _ in 0..40 {
        if resid(&p) < 1e-14 {
            break;
        }
        let v = field.eval(p);
        let j = field.jacobian(p);
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.norm() < 1e-300 {
            break;
        }
        let dx = (v[0] * j[1][1] - v[1] * j[0][1]) / det;
        let dy = (v[1] * j[0][0] - v[0] * j[1][0]) / det;
        if !(dx.is_finite() && dy.is_finite()) {
            break;
        }
        p = [p[0] - dx, p[1] - dy];
    }
    let scale = 1.0 + p[0].norm().max(p[1].norm());
    (resid(&p) < 1e-12 * scale.powi(field.degree_m as i32)).then_some(p)
}
