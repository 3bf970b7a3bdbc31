//! Built-in catalog of worked example systems with closed-form expectations,
//! the Galerkin caricature spectra, and the planar-tree count.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{BivariatePolynomial, Chart, PlanarField, C2};
use crate::equilibria::{spectrum_of, EquilibriumRecord, DEFAULT_DENOMINATOR_BOUND, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::hamiltonian::{hamiltonian_field, PolynomialHamiltonian};

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// How an expected value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    /// formula stated with the example
    ClosedForm,
    /// recomputed by hand or by an independent method
    Independent,
    /// holds by construction
    Definitional,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Quantity {
    Equilibrium {
        chart: Chart,
        location: C2,
        #[serde(skip_serializing_if = "Option::is_none")]
        eigenvalues: Option<C2>,
        #[serde(skip_serializing_if = "Option::is_none")]
        quotient: Option<Complex64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        semisimple: Option<bool>,
    },
    /// windings of a closed loop; `w_u`, `w_z` are the fiber and base coordinates
    Windings { w_t: i64, w_u: i64, w_z: Option<i64>, cycles: u32, leaves: Option<u32> },
    Heteroclinic { from: Complex64, to: Complex64 },
    Multiplier { chart: Chart, location: C2, value: Complex64 },
    Scalar { value: Complex64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Expected {
    pub label: String,
    pub quantity: Quantity,
    pub basis: Basis,
}

impl Expected {
    fn new(label: impl Into<String>, quantity: Quantity, basis: Basis) -> Self {
        Self { label: label.into(), quantity, basis }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum CatalogSystem {
    Field(PlanarField),
    Hamiltonian(PolynomialHamiltonian),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub params: BTreeMap<String, f64>,
    pub system: CatalogSystem,
    /// Euler multiplier `ρ` with `dt = ρ dτ`, when the catalog system is a rescaled field
    #[serde(skip_serializing_if = "Option::is_none")]
    pub euler_multiplier: Option<BivariatePolynomial>,
    pub expected: Vec<Expected>,
    pub topic: String,
}

impl CatalogEntry {
    pub fn field(&self) -> PlanarField {
        match &self.system {
            CatalogSystem::Field(f) => f.clone(),
            CatalogSystem::Hamiltonian(h) => hamiltonian_field(h),
        }
    }

    pub fn hamiltonian(&self) -> Option<&PolynomialHamiltonian> {
        match &self.system {
            CatalogSystem::Hamiltonian(h) => Some(h),
            CatalogSystem::Field(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamSpec {
    pub name: &'static str,
    pub default: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogInfo {
    pub name: &'static str,
    pub params: Vec<ParamSpec>,
    pub topic: &'static str,
}

const fn req(name: &'static str) -> ParamSpec {
    ParamSpec { name, default: None }
}

const fn opt(name: &'static str, v: f64) -> ParamSpec {
    ParamSpec { name, default: Some(v) }
}

/// Every catalog name with its parameters.
pub fn list() -> Vec<CatalogInfo> {
    vec![
        CatalogInfo { name: "riccati", params: vec![req("a"), req("e1"), req("e2")], topic: "Riccati flow a(x-e1)(x-e2) embedded with a contracting dummy variable" },
        CatalogInfo { name: "scalar_poly", params: vec![req("m")], topic: "scalar blow-up x' = x^m embedded with a contracting dummy variable" },
        CatalogInfo { name: "cyclotomic", params: vec![req("m")], topic: "scalar flow x' = x^m - 1 with equilibria at the roots of unity" },
        CatalogInfo { name: "linear_diag", params: vec![req("l1"), req("l2")], topic: "diagonal linear flow and its linear holonomy" },
        CatalogInfo { name: "jordan_block", params: vec![opt("lambda", -1.0), opt("m", 2.0)], topic: "blow-up equilibrium with a non-semisimple double eigenvalue" },
        CatalogInfo { name: "reciprocal_linear", params: vec![req("a"), req("b"), req("n1"), req("n2")], topic: "reciprocally linear blow-up, rescaled by (x-ay)(x-by)" },
        CatalogInfo { name: "homogeneous", params: vec![req("p"), req("q")], topic: "quadratic homogeneous foliation x' = x^2 + p y^2, y' = q x y" },
        CatalogInfo { name: "weierstrass", params: vec![opt("c", 0.0)], topic: "pendulum with g = 6(x^2 - 1), the Weierstrass equation" },
        CatalogInfo { name: "duffing", params: vec![opt("sign", 1.0), opt("c", 0.0)], topic: "Duffing pendulum g = sign (x^3 - x)" },
        CatalogInfo { name: "galerkin_symmetric", params: vec![req("a")], topic: "symmetric two-mode Galerkin caricature of the quadratic heat equation" },
        CatalogInfo { name: "galerkin_asymmetric", params: vec![req("b1"), req("beta")], topic: "asymmetric two-mode Galerkin caricature with a = 0" },
        CatalogInfo { name: "linear_pendulum", params: vec![opt("c", 0.5)], topic: "linear pendulum H = y^2/2 - x^2/2" },
        CatalogInfo { name: "reciprocal_diag", params: vec![], topic: "x' = 1/x, y' = 1/y rescaled by xy into the linear pendulum" },
        CatalogInfo { name: "blowup_node", params: vec![req("lu"), req("lz"), opt("m", 2.0), opt("c2", 0.0)], topic: "blow-up equilibrium at [1:0:0] with prescribed chart eigenvalues" },
    ]
}

fn resolve(info: &CatalogInfo, given: &BTreeMap<String, f64>) -> Result<BTreeMap<String, f64>> {
    for k in given.keys() {
        if !info.params.iter().any(|p| p.name == k) {
            return Err(Error::Invalid(format!("catalog entry '{}' has no parameter '{k}'", info.name)));
        }
    }
    info.params
        .iter()
        .map(|p| {
            let v = given.get(p.name).copied().or(p.default).ok_or_else(|| Error::MissingParameter(p.name.into()))?;
            if !v.is_finite() {
                return Err(Error::Invalid(format!("parameter '{}' must be finite", p.name)));
            }
            Ok((p.name.to_string(), v))
        })
        .collect()
}

fn int_param(params: &BTreeMap<String, f64>, name: &str, min: i64) -> Result<i64> {
    let v = params[name];
    if v.fract() != 0.0 || (v as i64) < min {
        return Err(Error::OutOfRange(format!("'{name}' must be an integer >= {min}, got {v}")));
    }
    Ok(v as i64)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn eq_point(chart: Chart, location: C2, eigenvalues: Option<C2>, semisimple: Option<bool>) -> Quantity {
    let quotient = eigenvalues.and_then(|l| (l[1].norm() > 0.0).then(|| l[0] / l[1]));
    Quantity::Equilibrium { chart, location, eigenvalues, quotient, semisimple }
}

/// Instantiate a catalog entry.
pub fn catalog_get(name: &str, params: &BTreeMap<String, f64>) -> Result<CatalogEntry> {
    let info = list().into_iter().find(|i| i.name == name).ok_or_else(|| Error::UnknownName(name.into()))?;
    let p = resolve(&info, params)?;
    let o = re(0.0);
    let origin = [o, o];
    let mut rho = None;
    let (system, expected) = match name {
        "riccati" => {
            let (a, e1, e2) = (p["a"], p["e1"], p["e2"]);
            if a == 0.0 || e1 == e2 {
                return Err(Error::ExcludedParameter("riccati needs a != 0 and e1 != e2".into()));
            }
            let f = BivariatePolynomial::from_real(&[(2, 0, a), (1, 0, -a * (e1 + e2)), (0, 0, a * e1 * e2)]);
            let g = BivariatePolynomial::from_real(&[(0, 1, -1.0)]);
            let l1 = a * (e1 - e2);
            let (src, snk) = if l1 > 0.0 { (e1, e2) } else { (e2, e1) };
            (
                CatalogSystem::Field(PlanarField::new(f, g)),
                vec![
                    Expected::new("e1", eq_point(Chart::XY, [re(e1), o], Some([re(l1), re(-1.0)]), Some(true)), Basis::ClosedForm),
                    Expected::new("e2", eq_point(Chart::XY, [re(e2), o], Some([re(-l1), re(-1.0)]), Some(true)), Basis::ClosedForm),
                    Expected::new("real heteroclinic", Quantity::Heteroclinic { from: re(src), to: re(snk) }, Basis::ClosedForm),
                    Expected::new("imaginary period", Quantity::Scalar { value: Complex64::new(0.0, TAU / l1.abs()) }, Basis::Independent),
                ],
            )
        }
        "scalar_poly" => {
            let m = int_param(&p, "m", 1)? as u32;
            let f = BivariatePolynomial::from_real(&[(m, 0, 1.0)]);
            let g = BivariatePolynomial::from_real(&[(0, 1, -1.0)]);
            let mut ex = vec![];
            if m >= 2 {
                ex.push(Expected::new("blow-up node", eq_point(Chart::UZ, origin, Some([re(-1.0), re(-1.0)]), Some(true)), Basis::Independent));
                ex.push(Expected::new(
                    "scalar blow-up loop",
                    Quantity::Windings { w_t: m as i64 - 1, w_u: 1, w_z: None, cycles: m - 1, leaves: None },
                    Basis::ClosedForm,
                ));
            }
            (CatalogSystem::Field(PlanarField::new(f, g)), ex)
        }
        "cyclotomic" => {
            let m = int_param(&p, "m", 1)? as u32;
            let f = BivariatePolynomial::from_real(&[(m, 0, 1.0), (0, 0, -1.0)]);
            let g = BivariatePolynomial::from_real(&[(0, 1, -1.0)]);
            let mut ex: Vec<Expected> = (0..m)
                .map(|k| {
                    let w = Complex64::from_polar(1.0, TAU * k as f64 / m as f64);
                    let d = w.powu(m - 1) * m as f64;
                    Expected::new(format!("root {k}"), eq_point(Chart::XY, [w, o], Some([d, re(-1.0)]), None), Basis::Definitional)
                })
                .collect();
            if m >= 2 {
                ex.push(Expected::new("x direction at infinity", eq_point(Chart::UZ, origin, None, None), Basis::Independent));
                ex.push(Expected::new("y direction at infinity", eq_point(Chart::VW, origin, None, None), Basis::Independent));
            }
            (CatalogSystem::Field(PlanarField::new(f, g)), ex)
        }
        "linear_diag" => {
            let (l1, l2) = (p["l1"], p["l2"]);
            if l1 == 0.0 || l2 == 0.0 {
                return Err(Error::ExcludedParameter("linear_diag needs nonzero eigenvalues".into()));
            }
            let f = BivariatePolynomial::from_real(&[(1, 0, l1)]);
            let g = BivariatePolynomial::from_real(&[(0, 1, l2)]);
            let mult = (Complex64::new(0.0, TAU) * (l1 / l2)).exp();
            (
                CatalogSystem::Field(PlanarField::new(f, g)),
                vec![
                    Expected::new("origin", eq_point(Chart::XY, origin, Some([re(l1), re(l2)]), Some(true)), Basis::Definitional),
                    Expected::new("x holonomy over y", Quantity::Multiplier { chart: Chart::XY, location: origin, value: mult }, Basis::ClosedForm),
                    Expected::new("[1:0:0]", eq_point(Chart::UZ, origin, Some([re(-l1), re(l2 - l1)]), Some(true)), Basis::ClosedForm),
                    Expected::new("[0:1:0]", eq_point(Chart::VW, origin, Some([re(-l2), re(l1 - l2)]), Some(true)), Basis::ClosedForm),
                ],
            )
        }
        "jordan_block" => {
            let l = p["lambda"];
            let m = int_param(&p, "m", 2)? as u32;
            if l == 0.0 {
                return Err(Error::ExcludedParameter("jordan_block needs lambda != 0".into()));
            }
            // u' = λu, z' = u + λz in the uz chart; in xy the line x = 0 consists of equilibria
            let f = BivariatePolynomial::from_real(&[(m, 0, -l)]);
            let g = BivariatePolynomial::from_real(&[(m - 1, 0, 1.0)]);
            (
                CatalogSystem::Field(PlanarField::new(f, g)),
                vec![Expected::new("Jordan blow-up node", eq_point(Chart::UZ, origin, Some([re(l), re(l)]), Some(false)), Basis::Definitional)],
            )
        }
        "reciprocal_linear" => {
            let (a, b) = (p["a"], p["b"]);
            let n1 = int_param(&p, "n1", 1)? as u64;
            let n2 = int_param(&p, "n2", 1)? as u64;
            if a == b || gcd(n1, n2) != 1 || n1 == n2 {
                return Err(Error::ExcludedParameter("reciprocal_linear needs a != b and distinct coprime n1, n2".into()));
            }
            let f = BivariatePolynomial::from_real(&[(1, 0, -(n1 as f64))]);
            let g = BivariatePolynomial::from_real(&[(0, 1, -(n2 as f64))]);
            rho = Some(BivariatePolynomial::from_real(&[(2, 0, 1.0), (1, 1, -(a + b)), (0, 2, a * b)]));
            // t − T is a 2·min(n1,n2)-fold branched cover of the leaf parameter
            let nmin = n1.min(n2);
            let (wx, wy) = (n1 as i64, n2 as i64);
            (
                CatalogSystem::Field(PlanarField::new(f, g)),
                vec![
                    Expected::new("origin", eq_point(Chart::XY, origin, Some([re(-(n1 as f64)), re(-(n2 as f64))]), Some(true)), Basis::Definitional),
                    Expected::new(
                        "general leaf loop",
                        Quantity::Windings { w_t: 2 * nmin as i64, w_u: wx, w_z: Some(wy), cycles: 2 * nmin as u32, leaves: None },
                        Basis::Independent,
                    ),
                ],
            )
        }
        "homogeneous" => {
            let (pp, q) = (p["p"], p["q"]);
            if pp == 0.0 || q == 1.0 {
                return Err(Error::ExcludedParameter("homogeneous needs p != 0 and q != 1".into()));
            }
            let f = BivariatePolynomial::from_real(&[(2, 0, 1.0), (0, 2, pp)]);
            let g = BivariatePolynomial::from_real(&[(1, 1, q)]);
            // P(z) = z(q − 1 − p z²), f₁(0,z) = 1 + p z²
            let e = Complex64::new((q - 1.0) / pp, 0.0).sqrt();
            let mut ex = vec![Expected::new(
                "z = 0",
                eq_point(Chart::UZ, origin, Some([re(-1.0), re(q - 1.0)]), Some(true)),
                Basis::Independent,
            )];
            for (lab, z) in [("z = e+", e), ("z = e-", -e)] {
                ex.push(Expected::new(lab, eq_point(Chart::UZ, [o, z], Some([-re(q), re(-2.0 * (q - 1.0))]), None), Basis::Independent));
            }
            for z in [o, e, -e] {
                let fz = 1.0 + pp * z * z;
                let dp = re(q - 1.0) - 3.0 * pp * z * z;
                ex.push(Expected::new(
                    "holonomy multiplier",
                    Quantity::Multiplier { chart: Chart::UZ, location: [o, z], value: (Complex64::new(0.0, TAU) * (-fz / dp)).exp() },
                    Basis::ClosedForm,
                ));
            }
            (CatalogSystem::Field(PlanarField::new(f, g)), ex)
        }
        "weierstrass" => {
            let c = p["c"];
            // G = 2x³ − 6x
            let h = BivariatePolynomial::from_real(&[(0, 2, 0.5), (3, 0, -2.0), (1, 0, 6.0)]);
            let s12 = 12f64.sqrt();
            (
                CatalogSystem::Hamiltonian(PolynomialHamiltonian::new(h, re(c))),
                vec![
                    Expected::new("x = 1", eq_point(Chart::XY, [re(1.0), o], Some([re(s12), re(-s12)]), Some(true)), Basis::Independent),
                    Expected::new("x = -1", eq_point(Chart::XY, [re(-1.0), o], Some([Complex64::new(0.0, s12), Complex64::new(0.0, -s12)]), Some(true)), Basis::Independent),
                    Expected::new("pendulum loop", Quantity::Windings { w_t: 1, w_u: 3, w_z: Some(1), cycles: 1, leaves: Some(1) }, Basis::ClosedForm),
                ],
            )
        }
        "duffing" => {
            let (s, c) = (p["sign"], p["c"]);
            if s != 1.0 && s != -1.0 {
                return Err(Error::OutOfRange("duffing sign must be +1 or -1".into()));
            }
            // G = s(x⁴/4 − x²/2)
            let h = BivariatePolynomial::from_real(&[(0, 2, 0.5), (4, 0, -s / 4.0), (2, 0, s / 2.0)]);
            (
                CatalogSystem::Hamiltonian(PolynomialHamiltonian::new(h, re(c))),
                vec![
                    Expected::new("x = 0", eq_point(Chart::XY, origin, None, Some(true)), Basis::Definitional),
                    Expected::new("pendulum loop per leaf", Quantity::Windings { w_t: 1, w_u: 2, w_z: Some(1), cycles: 1, leaves: Some(2) }, Basis::ClosedForm),
                ],
            )
        }
        "galerkin_symmetric" => {
            let a = p["a"];
            let records = galerkin_spectrum(GalerkinVariant::Symmetric, &p)?;
            let f = BivariatePolynomial::from_real(&[(2, 0, 1.0), (0, 2, a / 4.0)]);
            let g = BivariatePolynomial::from_real(&[(0, 1, -1.0), (1, 1, a)]);
            (CatalogSystem::Field(PlanarField::new(f, g)), records_to_expected(&records))
        }
        "galerkin_asymmetric" => {
            let (b1, beta) = (p["b1"], p["beta"]);
            let records = galerkin_spectrum(GalerkinVariant::Asymmetric, &p)?;
            let b3 = beta * b1;
            let f = BivariatePolynomial::from_real(&[(2, 0, 1.0), (1, 1, b1)]);
            let g = BivariatePolynomial::from_real(&[(0, 1, -1.0), (2, 0, b1), (0, 2, (3.0 * b1 + b3) / 4.0)]);
            let mut ex = records_to_expected(&records);
            ex.push(Expected::new("discriminant d", Quantity::Scalar { value: re(1.0 + b1 * b1 * (1.0 - beta)) }, Basis::ClosedForm));
            (CatalogSystem::Field(PlanarField::new(f, g)), ex)
        }
        "linear_pendulum" => {
            let c = p["c"];
            let h = BivariatePolynomial::from_real(&[(0, 2, 0.5), (2, 0, -0.5)]);
            (
                CatalogSystem::Hamiltonian(PolynomialHamiltonian::new(h, re(c))),
                vec![
                    Expected::new("saddle", eq_point(Chart::XY, origin, Some([re(1.0), re(-1.0)]), Some(true)), Basis::Independent),
                    Expected::new("period", Quantity::Scalar { value: Complex64::new(0.0, TAU) }, Basis::ClosedForm),
                ],
            )
        }
        "reciprocal_diag" => {
            let f = BivariatePolynomial::from_real(&[(0, 1, 1.0)]);
            let g = BivariatePolynomial::from_real(&[(1, 0, 1.0)]);
            rho = Some(BivariatePolynomial::from_real(&[(1, 1, 1.0)]));
            (
                CatalogSystem::Field(PlanarField::new(f, g)),
                vec![Expected::new(
                    "synchronous blow-up loop",
                    Quantity::Windings { w_t: 2, w_u: 1, w_z: Some(1), cycles: 2, leaves: None },
                    Basis::ClosedForm,
                )],
            )
        }
        "blowup_node" => {
            let (lu, lz, c2) = (p["lu"], p["lz"], p["c2"]);
            let m = int_param(&p, "m", 2)? as u32;
            if lu == 0.0 || lz == 0.0 {
                return Err(Error::ExcludedParameter("blowup_node needs nonzero eigenvalues".into()));
            }
            // uz chart: u' = lu u,  z' = lz z + c2 u²
            let f = BivariatePolynomial::from_real(&[(m, 0, -lu)]);
            let mut g = BivariatePolynomial::from_real(&[(m - 1, 1, lz - lu)]);
            if m >= 2 {
                g.add_term(m - 2, 0, re(c2));
            }
            let mut ex = vec![Expected::new("blow-up node", eq_point(Chart::UZ, origin, Some([re(lu), re(lz)]), Some(true)), Basis::Definitional)];
            if let Some((n1, n2)) = crate::equilibria::rational_spectral_quotient(lu / lz, 1e-12, 1000) {
                if n1 > 0 && lu < 0.0 {
                    ex.push(Expected::new(
                        "rational node loop",
                        Quantity::Windings { w_t: (m as i64 - 1) * n1, w_u: n1, w_z: Some(n2), cycles: n1 as u32, leaves: None },
                        Basis::Independent,
                    ));
                }
            }
            (CatalogSystem::Field(PlanarField::new(f, g)), ex)
        }
        _ => unreachable!("names come from list()"),
    };
    Ok(CatalogEntry { name: name.into(), params: p, system, euler_multiplier: rho, expected, topic: info.topic.into() })
}

/// Parse `name?k=v&k2=v2`, with or without a `catalog:` prefix.
pub fn parse_uri(uri: &str) -> Result<(String, BTreeMap<String, f64>)> {
    let body = uri.strip_prefix("catalog:").unwrap_or(uri);
    let (name, query) = body.split_once('?').unwrap_or((body, ""));
    let mut params = BTreeMap::new();
    for pair in query.split('&').filter(|s| !s.is_empty()) {
        let (k, v) = pair.split_once('=').ok_or_else(|| Error::Parse(format!("catalog parameter '{pair}' is not k=v")))?;
        let v: f64 = v.trim().parse().map_err(|_| Error::Parse(format!("catalog parameter '{k}' is not a number: '{v}'")))?;
        params.insert(k.trim().to_string(), v);
    }
    Ok((name.to_string(), params))
}

fn records_to_expected(records: &[EquilibriumRecord]) -> Vec<Expected> {
    records
        .iter()
        .map(|r| {
            let s = r.spectrum.as_ref().expect("closed-form records carry spectra");
            Expected::new(
                format!("{} {:?}", r.chart, r.location),
                Quantity::Equilibrium {
                    chart: r.chart,
                    location: r.location,
                    eigenvalues: Some(s.eigenvalues),
                    quotient: s.spectral_quotient,
                    semisimple: Some(s.semisimple),
                },
                Basis::ClosedForm,
            )
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GalerkinVariant {
    Symmetric,
    Asymmetric,
}

/// Closed-form blow-up equilibria of the Galerkin caricatures, with spectra
/// derived from their closed-form chart Jacobians.
pub fn galerkin_spectrum(variant: GalerkinVariant, params: &BTreeMap<String, f64>) -> Result<Vec<EquilibriumRecord>> {
    let get = |k: &str| params.get(k).copied().ok_or_else(|| Error::MissingParameter(k.into()));
    let o = re(0.0);
    let record = |chart: Chart, loc: C2, j: [[Complex64; 2]; 2]| {
        let mut r = EquilibriumRecord::new(chart, loc);
        r.spectrum = Some(spectrum_of(&j, DEFAULT_TOL, DEFAULT_DENOMINATOR_BOUND));
        r
    };
    match variant {
        GalerkinVariant::Symmetric => {
            let a = get("a")?;
            if a == 0.0 || a == 1.0 {
                return Err(Error::ExcludedParameter(format!("symmetric caricature needs a not in {{0, 1}}, got {a}")));
            }
            let e = 2.0 * Complex64::new(1.0 - 1.0 / a, 0.0).sqrt();
            let mut out = vec![record(Chart::UZ, [o, o], [[re(-1.0), o], [o, re(a - 1.0)]])];
            for z in [e, -e] {
                out.push(record(Chart::UZ, [o, z], [[re(-a), o], [-z, re(2.0 * (1.0 - a))]]));
            }
            Ok(out)
        }
        GalerkinVariant::Asymmetric => {
            let (b1, beta) = (get("b1")?, get("beta")?);
            if !(b1 > 0.0) || beta == -3.0 || beta == 1.0 || beta == 1.0 + 1.0 / (b1 * b1) {
                return Err(Error::ExcludedParameter(format!(
                    "asymmetric caricature needs b1 > 0 and beta not in {{-3, 1, 1 + 1/b1^2}}, got b1 = {b1}, beta = {beta}"
                )));
            }
            let d = re(1.0 + b1 * b1 * (1.0 - beta));
            let l1 = -0.25 * b1 * (beta + 3.0);
            let l2 = -0.25 * b1 * (beta - 1.0);
            let mut out = vec![record(Chart::VW, [o, o], [[re(l1), o], [o, re(l2)]])];
            for s in [1.0, -1.0] {
                let e = (1.0 + s * d.sqrt()) / (2.0 * b1);
                out.push(record(Chart::VW, [o, e], [[-e - b1, o], [e, -e - b1 * (1.0 - beta) / 2.0]]));
            }
            Ok(out)
        }
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

fn totient(mut n: u128) -> u128 {
    let mut out = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

/// Number of planar trees counted by the scalar blow-up flows of degree `m`.
///
/// All four terms share the denominator `4(m−1)m`; the numerator must divide exactly.
pub fn tree_count(m: u32) -> Result<u128> {
    if !(2..=30).contains(&m) {
        return Err(Error::OutOfRange(format!("tree_count needs 2 <= m <= 30, got {m}")));
    }
    let m = m as u128;
    let n = m - 1;
    let den = 4 * n * m;
    let mut num = 2 * binomial(2 * n, n);
    if m % 2 == 0 {
        num += m * binomial(m, m / 2);
    }
    // for m = 2 the rotation term coincides with the first one
    if n >= 2 {
        num += 4 * m * totient(n);
    }
    num += (2..n).filter(|k| n % k == 0).map(|k| 2 * m * binomial(2 * k, k) * totient(n / k)).sum::<u128>();
    if num % den != 0 {
        return Err(Error::DegenerateSystem(format!("tree count for m = {m} is not integral: {num}/{den}")));
    }
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_tree_counts() {
        let got: Vec<u128> = (2..=8).map(|m| tree_count(m).unwrap()).collect();
        assert_eq!(got, vec![1, 1, 2, 3, 6, 14, 34]);
        assert!(tree_count(1).is_err() && tree_count(31).is_err());
    }

    #[test]
    fn uri_parsing() {
        let (n, p) = parse_uri("catalog:scalar_poly?m=4").unwrap();
        assert_eq!(n, "scalar_poly");
        assert_eq!(p["m"], 4.0);
        assert!(parse_uri("catalog:x?m").is_err());
    }

    #[test]
    fn missing_and_unknown() {
        assert_eq!(catalog_get("nope", &BTreeMap::new()).unwrap_err(), Error::UnknownName("nope".into()));
        assert_eq!(catalog_get("galerkin_symmetric", &BTreeMap::new()).unwrap_err(), Error::MissingParameter("a".into()));
    }
}
