//! Formal Poincaré linearization at a semisimple nonresonant equilibrium.
//!
//! Coordinates are first shifted to the equilibrium and rotated into an
//! eigenbasis, `p = e + P ξ`. In `ξ` the field reads `Λξ + O(|ξ|²)` and the
//! near-identity map `ξ = Ψ(ξ̃)` is built degree by degree so that the pulled
//! back field `(DΨ)⁻¹ G(Ψ)` equals `Λξ̃` up to the truncation order.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{BivariatePolynomial, Chart, ChartSystem, Mat2, C2};
use crate::equilibria::{eigenvalues, spectrum_of, EquilibriumRecord, DEFAULT_DENOMINATOR_BOUND, DEFAULT_TOL};
use crate::error::{Error, Result};

pub const DEFAULT_ORDER: u32 = 8;
pub const MAX_ORDER: u32 = 14;
/// Denominators below this fraction of `max|λ|` count as resonant.
pub const RESONANCE_GUARD: f64 = 1e-8;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

type Pair = [BivariatePolynomial; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanEntry {
    pub order: u32,
    pub smallest_denominator: f64,
    pub alpha: (u32, u32),
    pub iota: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncatedTransform {
    pub order_n: u32,
    pub chart: Chart,
    pub shift: C2,
    /// columns are the eigenvectors for `λ₁`, `λ₂`
    pub basis: Mat2,
    pub basis_inverse: Mat2,
    pub eigenvalues: C2,
    /// `Ψ` in eigen-coordinates, identity linear part
    pub components: Pair,
    pub inverse_components: Pair,
    pub resonance_scan: Vec<ScanEntry>,
    /// largest `|c/(λ_ι − α·λ)|` produced during elimination
    pub largest_coefficient: f64,
}

fn identity_pair() -> Pair {
    [BivariatePolynomial::x(), BivariatePolynomial::y()]
}

fn mat_vec(m: &Mat2, v: C2) -> C2 {
    [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
}

fn inverse(m: &Mat2) -> Mat2 {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    [[m[1][1] / det, -m[0][1] / det], [-m[1][0] / det, m[0][0] / det]]
}

/// Eigenbasis with unit entries on the diagonal where possible; the fiber
/// axis stays the first coordinate when the jacobian is lower triangular.
fn eigenbasis(j: &Mat2, lam: C2) -> Mat2 {
    let tiny = |c: Complex64| c == ZERO;
    if (lam[0] - lam[1]).norm() <= 1e-10 * lam[0].norm().max(lam[1].norm()) {
        return [[ONE, ZERO], [ZERO, ONE]];
    }
    let (v1, v2) = if tiny(j[0][1]) {
        ([ONE, j[1][0] / (lam[0] - j[1][1])], [ZERO, ONE])
    } else if tiny(j[1][0]) {
        ([ONE, ZERO], [j[0][1] / (lam[1] - j[0][0]), ONE])
    } else {
        ([ONE, (lam[0] - j[0][0]) / j[0][1]], [j[0][1] / (lam[1] - j[0][0]), ONE])
    };
    [[v1[0], v2[0]], [v1[1], v2[1]]]
}

impl TruncatedTransform {
    /// Chart point for linearizing coordinates `ξ̃`.
    pub fn to_chart(&self, xt: C2) -> C2 {
        let xi = [
            self.components[0].evaluate(xt[0], xt[1]),
            self.components[1].evaluate(xt[0], xt[1]),
        ];
        let d = mat_vec(&self.basis, xi);
        [self.shift[0] + d[0], self.shift[1] + d[1]]
    }

    /// Linearizing coordinates of a chart point (truncated inverse).
    pub fn from_chart(&self, p: C2) -> C2 {
        let xi = mat_vec(&self.basis_inverse, [p[0] - self.shift[0], p[1] - self.shift[1]]);
        [
            self.inverse_components[0].evaluate(xi[0], xi[1]),
            self.inverse_components[1].evaluate(xi[0], xi[1]),
        ]
    }

    /// Largest coefficient of `Ψ ∘ Ψ⁻¹ − id` up to the truncation order.
    pub fn inverse_defect(&self) -> f64 {
        let n = self.order_n;
        let [a, b] = &self.inverse_components;
        let c0 = self.components[0].compose_trunc(a, b, n) - BivariatePolynomial::x();
        let c1 = self.components[1].compose_trunc(a, b, n) - BivariatePolynomial::y();
        c0.max_abs_coeff().max(c1.max_abs_coeff())
    }
}

/// Field in eigen-coordinates, `P⁻¹ F(e + Pξ)`, truncated at degree `n`.
fn eigen_field(system: &ChartSystem, chart: Chart, e: C2, basis: &Mat2, n: u32) -> Pair {
    let field = system.field(chart);
    let x = BivariatePolynomial::x();
    let y = BivariatePolynomial::y();
    let sub0 = BivariatePolynomial::constant(e[0]) + x.scale(basis[0][0]) + y.scale(basis[0][1]);
    let sub1 = BivariatePolynomial::constant(e[1]) + x.scale(basis[1][0]) + y.scale(basis[1][1]);
    let f = field.f.compose_trunc(&sub0, &sub1, n);
    let g = field.g.compose_trunc(&sub0, &sub1, n);
    let inv = inverse(basis);
    [
        f.scale(inv[0][0]) + g.scale(inv[0][1]),
        f.scale(inv[1][0]) + g.scale(inv[1][1]),
    ]
}

/// `(DΨ)⁻¹ G(Ψ)` truncated at degree `n`, with `DΨ = I + Dφ` inverted by
/// fixed-point iteration.
fn pullback(g: &Pair, psi: &Pair, n: u32) -> Pair {
    let comp = [
        g[0].compose_trunc(&psi[0], &psi[1], n),
        g[1].compose_trunc(&psi[0], &psi[1], n),
    ];
    let phi = [psi[0].clone() - BivariatePolynomial::x(), psi[1].clone() - BivariatePolynomial::y()];
    let dphi = [[phi[0].dx(), phi[0].dy()], [phi[1].dx(), phi[1].dy()]];
    let mut h = comp.clone();
    for _ in 0..n {
        let next = [
            comp[0].clone() - dphi[0][0].mul_trunc(&h[0], n) - dphi[0][1].mul_trunc(&h[1], n),
            comp[1].clone() - dphi[1][0].mul_trunc(&h[0], n) - dphi[1][1].mul_trunc(&h[1], n),
        ];
        h = next;
    }
    h
}

/// Pulled-back field minus `Λξ̃`, kept up to the truncation order.
pub fn nonlinear_residue(system: &ChartSystem, tf: &TruncatedTransform) -> Pair {
    let g = eigen_field(system, tf.chart, tf.shift, &tf.basis, tf.order_n);
    let h = pullback(&g, &tf.components, tf.order_n);
    [
        h[0].clone() - BivariatePolynomial::x().scale(tf.eigenvalues[0]),
        h[1].clone() - BivariatePolynomial::y().scale(tf.eigenvalues[1]),
    ]
}

fn resonance_scan(lam: C2, order: u32) -> Result<Vec<ScanEntry>> {
    let guard = RESONANCE_GUARD * lam[0].norm().max(lam[1].norm());
    let mut log = Vec::new();
    for n in 2..=order {
        let mut best = ScanEntry { order: n, smallest_denominator: f64::INFINITY, alpha: (0, 0), iota: 0 };
        for a1 in 0..=n {
            let a2 = n - a1;
            for iota in 0..2 {
                let d = (lam[iota] - lam[0] * a1 as f64 - lam[1] * a2 as f64).norm();
                if d < best.smallest_denominator {
                    best = ScanEntry { order: n, smallest_denominator: d, alpha: (a1, a2), iota };
                }
            }
        }
        if best.smallest_denominator < guard {
            return Err(Error::ResonantAtOrder { order: n, a1: best.alpha.0, a2: best.alpha.1, iota: best.iota });
        }
        log.push(best);
    }
    Ok(log)
}

/// Degree-by-degree elimination of the nonlinear terms up to `order_n`.
pub fn poincare_linearize(system: &ChartSystem, eq: &EquilibriumRecord, order_n: u32) -> Result<TruncatedTransform> {
    if !(2..=MAX_ORDER).contains(&order_n) {
        return Err(Error::OutOfRange(format!("order must lie in 2..={MAX_ORDER}, got {order_n}")));
    }
    let j = system.field(eq.chart).jacobian(eq.location);
    let spec = spectrum_of(&j, DEFAULT_TOL, DEFAULT_DENOMINATOR_BOUND);
    if !spec.semisimple {
        return Err(Error::NotSemisimple);
    }
    let lam = eigenvalues(&j);
    let scan = resonance_scan(lam, order_n)?;
    let basis = eigenbasis(&j, lam);
    let g = eigen_field(system, eq.chart, eq.location, &basis, order_n);

    let mut psi = identity_pair();
    let mut largest: f64 = 0.0;
    for n in 2..=order_n {
        let h = pullback(&g, &psi, n);
        for iota in 0..2 {
            for ((a1, a2), c) in h[iota].homogeneous_part(n).terms() {
                let den = lam[iota] - lam[0] * a1 as f64 - lam[1] * a2 as f64;
                let coef = -c / den;
                largest = largest.max(coef.norm());
                psi[iota].add_term(a1, a2, coef);
            }
        }
    }
    let inverse_components = invert(&psi, order_n);
    Ok(TruncatedTransform {
        order_n,
        chart: eq.chart,
        shift: eq.location,
        basis,
        basis_inverse: inverse(&basis),
        eigenvalues: lam,
        components: psi,
        inverse_components,
        resonance_scan: scan,
        largest_coefficient: largest,
    })
}

/// `Φ = id − φ∘Φ` iterated `n` times gives `Ψ⁻¹` to order `n`.
fn invert(psi: &Pair, n: u32) -> Pair {
    let phi = [psi[0].clone() - BivariatePolynomial::x(), psi[1].clone() - BivariatePolynomial::y()];
    let mut inv = identity_pair();
    for _ in 0..n {
        let next = [
            BivariatePolynomial::x() - phi[0].compose_trunc(&inv[0], &inv[1], n),
            BivariatePolynomial::y() - phi[1].compose_trunc(&inv[0], &inv[1], n),
        ];
        inv = next;
    }
    inv
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub max_residual: f64,
    /// log-log slope over `{r, r/2, r/4}`; absent when the residual vanishes
    pub fitted_order: Option<f64>,
    pub table: Vec<(f64, f64)>,
}

/// Deterministic sample points on the sphere of radius `r` in `C²`.
fn ball_samples(r: f64, count: usize) -> Vec<C2> {
    let golden = 0.5 * (5f64.sqrt() - 1.0);
    (0..count.max(1))
        .map(|k| {
            let s = (k as f64 + 0.5) / count.max(1) as f64;
            let (a, b) = (s.sqrt(), (1.0 - s).sqrt());
            let p1 = std::f64::consts::TAU * (k as f64 * golden).fract();
            let p2 = std::f64::consts::TAU * (k as f64 * golden * golden).fract();
            [Complex64::from_polar(r * a, p1), Complex64::from_polar(r * b, p2)]
        })
        .collect()
}

/// Max deviation of the exactly pulled-back field from `Λξ̃` on a sphere.
fn max_residual_at(system: &ChartSystem, tf: &TruncatedTransform, r: f64, count: usize) -> f64 {
    let field = system.field(tf.chart);
    let dpsi = [
        [tf.components[0].dx(), tf.components[0].dy()],
        [tf.components[1].dx(), tf.components[1].dy()],
    ];
    ball_samples(r, count)
        .into_iter()
        .map(|xt| {
            let p = tf.to_chart(xt);
            let v = mat_vec(&tf.basis_inverse, field.eval(p));
            let d: Mat2 = [
                [dpsi[0][0].evaluate(xt[0], xt[1]), dpsi[0][1].evaluate(xt[0], xt[1])],
                [dpsi[1][0].evaluate(xt[0], xt[1]), dpsi[1][1].evaluate(xt[0], xt[1])],
            ];
            let w = mat_vec(&inverse(&d), v);
            let e0 = w[0] - tf.eigenvalues[0] * xt[0];
            let e1 = w[1] - tf.eigenvalues[1] * xt[1];
            (e0.norm_sqr() + e1.norm_sqr()).sqrt()
        })
        .fold(0.0, f64::max)
}

/// Conjugacy residual on radii `{r, r/2, r/4}` and its fitted power law.
pub fn conjugacy_residual(
    system: &ChartSystem,
    _eq: &EquilibriumRecord,
    tf: &TruncatedTransform,
    ball_radius: f64,
    sample_count: usize,
) -> Result<ResidualReport> {
    if !(ball_radius > 0.0 && ball_radius <= 0.5) {
        return Err(Error::Invalid("ball radius must lie in (0, 0.5]".into()));
    }
    let table: Vec<(f64, f64)> = [1.0, 0.5, 0.25]
        .iter()
        .map(|f| {
            let r = ball_radius * f;
            (r, max_residual_at(system, tf, r, sample_count))
        })
        .collect();
    let max_residual = table[0].1;
    let fitted_order = if table.iter().all(|&(_, e)| e > 0.0) {
        let xs: Vec<f64> = table.iter().map(|(r, _)| r.ln()).collect();
        let ys: Vec<f64> = table.iter().map(|(_, e)| e.ln()).collect();
        let mx = xs.iter().sum::<f64>() / 3.0;
        let my = ys.iter().sum::<f64>() / 3.0;
        let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let den: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        Some(num / den)
    } else {
        None
    };
    Ok(ResidualReport { max_residual, fitted_order, table })
}
