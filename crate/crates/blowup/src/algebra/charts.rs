use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::poly::{BivariatePolynomial, PRUNE};
use crate::error::{Error, Result};

pub type C2 = [Complex64; 2];
pub type Mat2 = [[Complex64; 2]; 2];

/// The three affine charts covering the projective plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Chart {
    /// original coordinates `(x, y)`, time `t`
    XY,
    /// `u = 1/x`, `z = y/x`, time `t1`
    UZ,
    /// `v = 1/y`, `w = x/y`, time `t2`
    VW,
}

impl Chart {
    pub const ALL: [Chart; 3] = [Chart::XY, Chart::UZ, Chart::VW];

    pub fn coordinate_names(self) -> [&'static str; 2] {
        match self {
            Chart::XY => ["x", "y"],
            Chart::UZ => ["u", "z"],
            Chart::VW => ["v", "w"],
        }
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Chart::XY => "XY",
            Chart::UZ => "UZ",
            Chart::VW => "VW",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Chart {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "XY" => Ok(Chart::XY),
            "UZ" => Ok(Chart::UZ),
            "VW" => Ok(Chart::VW),
            _ => Err(Error::Invalid(format!("unknown chart '{s}'"))),
        }
    }
}

/// Polynomial vector field `f ∂x + g ∂y`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanarField {
    pub f: BivariatePolynomial,
    pub g: BivariatePolynomial,
    pub degree_m: u32,
}

impl PlanarField {
    /// Joint degree of `(f, g)`, at least 1.
    pub fn new(f: BivariatePolynomial, g: BivariatePolynomial) -> Self {
        let degree_m = f.degree().max(g.degree()).max(1);
        Self { f, g, degree_m }
    }

    pub fn is_zero(&self) -> bool {
        self.f.is_zero() && self.g.is_zero()
    }

    pub fn eval(&self, p: C2) -> C2 {
        [self.f.evaluate(p[0], p[1]), self.g.evaluate(p[0], p[1])]
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { f: self.f.scale(c), g: self.g.scale(c), degree_m: self.degree_m }
    }

    pub fn jacobian(&self, p: C2) -> Mat2 {
        jacobian(self, p[0], p[1])
    }
}

/// Exact partial derivatives of `(f, g)` at `(x, y)`.
pub fn jacobian(field: &PlanarField, x: Complex64, y: Complex64) -> Mat2 {
    [
        [field.f.dx().evaluate(x, y), field.f.dy().evaluate(x, y)],
        [field.g.dx().evaluate(x, y), field.g.dy().evaluate(x, y)],
    ]
}

/// The field in all three charts plus the Euler exponent `m - 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartSystem {
    pub xy_field: PlanarField,
    pub uz_field: PlanarField,
    pub vw_field: PlanarField,
    pub euler_exponent: u32,
}

impl ChartSystem {
    pub fn field(&self, chart: Chart) -> &PlanarField {
        match chart {
            Chart::XY => &self.xy_field,
            Chart::UZ => &self.uz_field,
            Chart::VW => &self.vw_field,
        }
    }

    pub fn degree_m(&self) -> u32 {
        self.xy_field.degree_m
    }

    /// `dt / dτ` for the chart's own time: 1, `u^{m-1}` or `v^{m-1}`.
    pub fn time_factor(&self, chart: Chart, p: C2) -> Complex64 {
        match chart {
            Chart::XY => Complex64::new(1.0, 0.0),
            Chart::UZ | Chart::VW => p[0].powu(self.euler_exponent),
        }
    }
}

/// Chart fields built by the projective substitutions.
///
/// With `f1 = u^m f(1/u, z/u)` and `g1 = u^m g(1/u, z/u)` the `uz` field is
/// `(-u f1, -z f1 + g1)`; the `vw` field is analogous with roles swapped.
pub fn to_charts(field: &PlanarField) -> Result<ChartSystem> {
    if field.is_zero() {
        return Err(Error::ZeroField);
    }
    let m = field.degree_m;
    // x^j y^k  ->  u^{m-j-k} z^k
    let chart1 = |p: &BivariatePolynomial| p.map_exponents(|j, k| (m - j - k, k));
    // x^j y^k  ->  v^{m-j-k} w^j
    let chart2 = |p: &BivariatePolynomial| p.map_exponents(|j, k| (m - j - k, j));
    let u = BivariatePolynomial::x();
    let z = BivariatePolynomial::y();

    let (f1, g1) = (chart1(&field.f), chart1(&field.g));
    let uz = PlanarField::new(-(&u * &f1), -(&z * &f1) + g1);

    let (f2, g2) = (chart2(&field.f), chart2(&field.g));
    let (v, w) = (u, z);
    let vw = PlanarField::new(-(&v * &g2), -(&w * &g2) + f2);

    Ok(ChartSystem {
        xy_field: field.clone(),
        uz_field: uz,
        vw_field: vw,
        euler_exponent: m - 1,
    })
}

/// Map a point between charts; `None` where the target chart is not defined.
pub fn map_point(from: Chart, to: Chart, p: C2) -> Option<C2> {
    let one = Complex64::new(1.0, 0.0);
    let inv = |a: Complex64| if a == Complex64::new(0.0, 0.0) { None } else { Some(one / a) };
    let q = match (from, to) {
        (a, b) if a == b => Some(p),
        (Chart::XY, Chart::UZ) => inv(p[0]).map(|r| [r, p[1] * r]),
        (Chart::XY, Chart::VW) => inv(p[1]).map(|r| [r, p[0] * r]),
        (Chart::UZ, Chart::XY) => inv(p[0]).map(|r| [r, p[1] * r]),
        (Chart::UZ, Chart::VW) => inv(p[1]).map(|r| [p[0] * r, r]),
        (Chart::VW, Chart::XY) => inv(p[0]).map(|r| [p[1] * r, r]),
        (Chart::VW, Chart::UZ) => inv(p[1]).map(|r| [p[0] * r, r]),
        _ => unreachable!(),
    }?;
    (q[0].is_finite() && q[1].is_finite()).then_some(q)
}

/// Chart field at a chart point, expressed as an `(x, y)` velocity in original time.
///
/// Inverts the overlap map and the multiplier; used for agreement checks.
pub fn velocity_in_xy(system: &ChartSystem, chart: Chart, p: C2) -> Option<C2> {
    let fld = system.field(chart).eval(p);
    let rho = system.time_factor(chart, p);
    let a = p[0];
    if a == Complex64::new(0.0, 0.0) {
        return None;
    }
    let (d0, d1) = (fld[0] / rho, fld[1] / rho);
    // chart (a, b) -> xy is (1/a, b/a) up to the ordering of the outputs
    let first = -d0 / (a * a);
    let second = (d1 * a - p[1] * d0) / (a * a);
    match chart {
        Chart::XY => Some([fld[0], fld[1]]),
        Chart::UZ => Some([first, second]),
        Chart::VW => Some([second, first]),
    }
}

/// Trivariate polynomial, used only for homogenized fields.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TrivariatePolynomial {
    pub terms: BTreeMap<(u32, u32, u32), Complex64>,
}

impl TrivariatePolynomial {
    fn add_term(&mut self, e: (u32, u32, u32), c: Complex64) {
        let entry = self.terms.entry(e).or_default();
        *entry += c;
        if entry.norm() < PRUNE {
            self.terms.remove(&e);
        }
    }

    pub fn evaluate(&self, p: [Complex64; 3]) -> Complex64 {
        self.terms
            .iter()
            .map(|(&(a, b, c), &k)| k * p[0].powu(a) * p[1].powu(b) * p[2].powu(c))
            .sum()
    }

    /// Some(total degree) when every term has the same total degree.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|&(a, b, c)| a + b + c);
        let d = degs.next()?;
        degs.all(|e| e == d).then_some(d)
    }
}

/// Homogenized field `(𝔣, 𝔤, 𝔥)` on `C^3`.
pub fn homogenize(field: &PlanarField) -> [TrivariatePolynomial; 3] {
    let m = field.degree_m;
    let one = Complex64::new(1.0, 0.0);
    let lift = |p: &BivariatePolynomial, lin: (u32, u32, u32)| {
        let mut t = TrivariatePolynomial::default();
        t.add_term(lin, one);
        for ((j, k), c) in p.terms() {
            t.add_term((j, k, m - j - k), c);
        }
        t
    };
    let mut h = TrivariatePolynomial::default();
    h.add_term((0, 0, m), one);
    [lift(&field.f, (1, 0, m - 1)), lift(&field.g, (0, 1, m - 1)), h]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn symmetric_caricature_uz() {
        let a = 2.0;
        let f = BivariatePolynomial::from_real(&[(2, 0, 1.0), (0, 2, 0.25 * a)]);
        let g = BivariatePolynomial::from_real(&[(0, 1, -1.0), (1, 1, a)]);
        let sys = to_charts(&PlanarField::new(f, g)).unwrap();
        // (-u(1 + z²/2), z(1 - u - z²/2))
        let eu = BivariatePolynomial::from_real(&[(1, 0, -1.0), (1, 2, -0.5)]);
        let ez = BivariatePolynomial::from_real(&[(0, 1, 1.0), (1, 1, -1.0), (0, 3, -0.5)]);
        assert!(sys.uz_field.f.distance(&eu) < 1e-15);
        assert!(sys.uz_field.g.distance(&ez) < 1e-15);
    }

    #[test]
    fn linear_diag_uz() {
        let (l1, l2) = (-1.5, 0.25);
        let f = BivariatePolynomial::from_real(&[(1, 0, l1)]);
        let g = BivariatePolynomial::from_real(&[(0, 1, l2)]);
        let sys = to_charts(&PlanarField::new(f, g)).unwrap();
        assert_eq!(sys.euler_exponent, 0);
        assert!(sys.uz_field.f.distance(&BivariatePolynomial::from_real(&[(1, 0, -l1)])) < 1e-15);
        assert!(sys.uz_field.g.distance(&BivariatePolynomial::from_real(&[(0, 1, l2 - l1)])) < 1e-15);
    }

    #[test]
    fn pure_riccati_charts() {
        let f = BivariatePolynomial::from_real(&[(2, 0, 1.0)]);
        let sys = to_charts(&PlanarField::new(f, BivariatePolynomial::zero())).unwrap();
        assert!(sys.uz_field.f.distance(&BivariatePolynomial::from_real(&[(1, 0, -1.0)])) < 1e-15);
        assert!(sys.uz_field.g.distance(&BivariatePolynomial::from_real(&[(0, 1, -1.0)])) < 1e-15);
        // g2 = 0, f2 = w²
        assert!(sys.vw_field.f.is_zero());
        assert!(sys.vw_field.g.distance(&BivariatePolynomial::from_real(&[(0, 2, 1.0)])) < 1e-15);
    }

    #[test]
    fn zero_field_rejected() {
        let z = PlanarField::new(BivariatePolynomial::zero(), BivariatePolynomial::zero());
        assert_eq!(to_charts(&z), Err(Error::ZeroField));
    }

    #[test]
    fn homogenize_riccati() {
        let f = BivariatePolynomial::from_real(&[(2, 0, 1.0)]);
        let [hf, hg, hh] = homogenize(&PlanarField::new(f, BivariatePolynomial::zero()));
        let one = c(1.0);
        assert_eq!(hf.terms.len(), 2);
        assert_eq!(hf.terms[&(1, 0, 1)], one);
        assert_eq!(hf.terms[&(2, 0, 0)], one);
        assert_eq!(hg.terms.len(), 1);
        assert_eq!(hg.terms[&(0, 1, 1)], one);
        assert_eq!(hh.terms.len(), 1);
        assert_eq!(hh.terms[&(0, 0, 2)], one);
    }

    #[test]
    fn homogenize_linear() {
        let f = BivariatePolynomial::from_real(&[(1, 0, 2.0), (0, 1, 1.0)]);
        let g = BivariatePolynomial::from_real(&[(0, 1, -1.0)]);
        let [hf, _, hh] = homogenize(&PlanarField::new(f, g));
        assert_eq!(hh.terms[&(0, 0, 1)], c(1.0));
        assert_eq!(hf.terms[&(1, 0, 0)], c(3.0));
        assert_eq!(hf.terms[&(0, 1, 0)], c(1.0));
    }

    #[test]
    fn jacobian_riccati_vs_fd() {
        let f = BivariatePolynomial::from_real(&[(2, 0, 1.0)]);
        let fld = PlanarField::new(f, BivariatePolynomial::zero());
        let j = jacobian(&fld, c(3.0), c(0.0));
        let h = 1e-6;
        let fd = (fld.f.evaluate(c(3.0 + h), c(0.0)) - fld.f.evaluate(c(3.0 - h), c(0.0))) / (2.0 * h);
        assert!((j[0][0] - c(6.0)).norm() < 1e-15);
        assert!((j[0][0] - fd).norm() < 1e-8);
    }

    #[test]
    fn map_point_round_trip() {
        let p = [Complex64::new(0.3, 0.2), Complex64::new(-1.1, 0.4)];
        for a in Chart::ALL {
            for b in Chart::ALL {
                let q = map_point(Chart::XY, a, p).unwrap();
                let r = map_point(a, b, q).unwrap();
                let back = map_point(b, Chart::XY, r).unwrap();
                assert!((back[0] - p[0]).norm() < 1e-14 && (back[1] - p[1]).norm() < 1e-14);
            }
        }
        assert!(map_point(Chart::UZ, Chart::XY, [c(0.0), c(1.0)]).is_none());
    }
}
