mod common;

use blowup::algebra::{map_point, to_charts, velocity_in_xy, BivariatePolynomial, Chart, PlanarField};
use blowup::flow::{integrate_path, winding_number, IntegrationConfig, TimePath};
use blowup::holonomy::richardson;
use blowup::scenarios::tree_count;
use blowup::Complex64;
use common::*;
use proptest::prelude::*;

fn complex(range: f64) -> impl Strategy<Value = Complex64> {
    (-range..range, -range..range).prop_map(|(a, b)| ci(a, b))
}

fn away_from_axes() -> impl Strategy<Value = [Complex64; 2]> {
    (complex(3.0), complex(3.0)).prop_filter("off the coordinate axes", |(a, b)| a.norm() > 0.2 && b.norm() > 0.2).prop_map(|(a, b)| [a, b])
}

fn polynomial(max_degree: u32) -> impl Strategy<Value = BivariatePolynomial> {
    let terms = prop::collection::vec(((0..=max_degree), (0..=max_degree), complex(2.0)), 1..6);
    terms.prop_map(move |ts| {
        BivariatePolynomial::from_terms(ts.into_iter().filter(|(j, k, _)| j + k <= max_degree).map(|(j, k, c)| ((j, k), c)))
    })
}

fn eigenvalue() -> impl Strategy<Value = f64> {
    prop_oneof![-1.5f64..-0.05, 0.05f64..1.5]
}

fn chart() -> impl Strategy<Value = Chart> {
    prop_oneof![Just(Chart::XY), Just(Chart::UZ), Just(Chart::VW)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chart_maps_invert(p in away_from_axes(), a in chart(), b in chart()) {
        let q = map_point(a, b, p).unwrap();
        let back = map_point(b, a, q).unwrap();
        prop_assert!((back[0] - p[0]).norm() + (back[1] - p[1]).norm() < 1e-12 * (1.0 + p[0].norm() + p[1].norm()));
    }

    #[test]
    fn chart_velocities_agree(f in polynomial(3), g in polynomial(3), p in away_from_axes()) {
        let field = PlanarField::new(f, g);
        prop_assume!(!field.f.is_zero() || !field.g.is_zero());
        let sys = to_charts(&field).unwrap();
        let want = sys.xy_field.eval(p);
        let scale = want[0].norm().max(want[1].norm()).max(1e-12);
        for c in [Chart::UZ, Chart::VW] {
            let v = velocity_in_xy(&sys, c, map_point(Chart::XY, c, p).unwrap()).unwrap();
            prop_assert!((v[0] - want[0]).norm().max((v[1] - want[1]).norm()) < 1e-9 * scale.max(1.0));
        }
    }

    #[test]
    fn circles_wind_their_turn_count(k in -4i32..=4, center in complex(2.0), r in 0.01f64..3.0, phase in 0.0f64..6.0) {
        let n = 64 * k.unsigned_abs().max(1) as usize;
        let pts: Vec<Complex64> = (0..=n)
            .map(|i| center + Complex64::from_polar(r, phase + std::f64::consts::TAU * k as f64 * i as f64 / n as f64))
            .collect();
        prop_assert_eq!(winding_number(&pts, center).unwrap(), k as i64);
    }

    #[test]
    fn polynomials_survive_json(p in polynomial(5)) {
        let s = serde_json::to_string(&p).unwrap();
        let back: BivariatePolynomial = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn richardson_is_exact_on_low_degree(a in complex(5.0), b in complex(5.0), d in complex(5.0), r0 in 1e-3f64..0.5) {
        let radii = [r0, r0 / 2.0, r0 / 4.0];
        let vals: Vec<Complex64> = radii.iter().map(|r| a + b * r + d * r * r).collect();
        let (v, _) = richardson(&radii, &vals);
        prop_assert!((v - a).norm() < 1e-9 * (1.0 + a.norm() + b.norm() + d.norm()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn linear_flows_reverse(l1 in eigenvalue(), l2 in eigenvalue(), x in complex(1.0), y in complex(1.0), t in complex(1.0)) {
        let sys = system("linear_diag", &[("l1", l1), ("l2", l2)]);
        let cfg = IntegrationConfig::default();
        let path = TimePath::line(c(0.0), t);
        let fwd = integrate_path(&sys, Chart::XY, [x, y], &path, &cfg, None).unwrap();
        let end = map_point(fwd.last().chart, Chart::XY, fwd.last().coords).unwrap();
        // exact solution e^{λt}
        prop_assert!((end[0] - x * (l1 * t).exp()).norm() < 1e-9 * (1.0 + end[0].norm()));
        let back = integrate_path(&sys, Chart::XY, end, &path.reversed(), &cfg, None).unwrap();
        let p = map_point(back.last().chart, Chart::XY, back.last().coords).unwrap();
        prop_assert!((p[0] - x).norm() + (p[1] - y).norm() < 1e-9);
    }
}

#[test]
fn tree_counts_are_positive_and_grow() {
    let counts: Vec<u128> = (2..=30).map(|m| tree_count(m).unwrap()).collect();
    assert!(counts.iter().all(|&n| n > 0));
    assert!(counts.windows(2).skip(2).all(|w| w[1] > w[0]));
}
