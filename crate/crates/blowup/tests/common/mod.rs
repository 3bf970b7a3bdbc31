#![allow(dead_code)]

use std::collections::BTreeMap;

use blowup::algebra::{map_point, to_charts, Chart, ChartSystem, C2};
use blowup::equilibria::{classify_spectrum, EquilibriumRecord, DEFAULT_DENOMINATOR_BOUND, DEFAULT_TOL};
use blowup::flow::{Segment, TimePath, Trajectory};
use blowup::scenarios::{catalog_get, CatalogEntry};
use blowup::Complex64;

pub fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn ci(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn params(kv: &[(&str, f64)]) -> BTreeMap<String, f64> {
    kv.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

pub fn entry(name: &str, kv: &[(&str, f64)]) -> CatalogEntry {
    catalog_get(name, &params(kv)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn system(name: &str, kv: &[(&str, f64)]) -> ChartSystem {
    to_charts(&entry(name, kv).field()).unwrap()
}

pub fn classified(system: &ChartSystem, chart: Chart, location: C2) -> EquilibriumRecord {
    classify_spectrum(system, &EquilibriumRecord::new(chart, location), DEFAULT_TOL, DEFAULT_DENOMINATOR_BOUND)
}

/// Closed rectangle starting at `corner`: right, up, left, down.
pub fn rectangle(corner: Complex64, width: f64, height: f64) -> TimePath {
    let a = corner;
    let b = a + width;
    let cc = b + ci(0.0, height);
    let d = a + ci(0.0, height);
    TimePath::new(vec![
        Segment::Line { from: a, to: b },
        Segment::Line { from: b, to: cc },
        Segment::Line { from: cc, to: d },
        Segment::Line { from: d, to: a },
    ])
}

/// Samples of a trajectory expressed in the original `(x, y)` chart.
pub fn xy_samples(tr: &Trajectory) -> Vec<(Complex64, Option<C2>)> {
    tr.samples.iter().map(|s| (s.t, map_point(s.chart, Chart::XY, s.coords))).collect()
}

/// Catalog systems with one representative parameter choice each.
pub fn catalog_representatives() -> Vec<CatalogEntry> {
    vec![
        entry("riccati", &[("a", 1.0), ("e1", 1.0), ("e2", -1.0)]),
        entry("scalar_poly", &[("m", 3.0)]),
        entry("cyclotomic", &[("m", 4.0)]),
        entry("linear_diag", &[("l1", 2.0), ("l2", 3.0)]),
        entry("jordan_block", &[]),
        entry("reciprocal_linear", &[("a", 1.0), ("b", -1.0), ("n1", 2.0), ("n2", 3.0)]),
        entry("homogeneous", &[("p", 2.0), ("q", 3.0)]),
        entry("weierstrass", &[]),
        entry("duffing", &[]),
        entry("galerkin_symmetric", &[("a", -0.5)]),
        entry("galerkin_asymmetric", &[("b1", 1.0), ("beta", 0.0)]),
        entry("linear_pendulum", &[]),
        entry("reciprocal_diag", &[]),
        entry("blowup_node", &[("lu", -2.0), ("lz", -3.0)]),
    ]
}
