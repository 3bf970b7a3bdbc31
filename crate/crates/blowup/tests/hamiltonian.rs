mod common;

use blowup::algebra::{to_charts, BivariatePolynomial, Chart};
use blowup::flow::{integrate_path, IntegrationConfig, TimePath};
use blowup::hamiltonian::{
    compactify_energy, energy_drift, hamiltonian_field, pendulum_loop_windings, Pendulum, PolynomialHamiltonian,
};
use blowup::{Complex64, Error};
use common::*;
use rand::{Rng, SeedableRng};

fn sample_hamiltonian() -> PolynomialHamiltonian {
    // ½y² − 2x³ + 6x + xy² − 0.3 y³
    let h = BivariatePolynomial::from_real(&[(0, 2, 0.5), (3, 0, -2.0), (1, 0, 6.0), (1, 2, 1.0), (0, 3, -0.3)]);
    PolynomialHamiltonian::new(h, ci(0.4, -0.2))
}

fn random_points(seed: u64, n: usize) -> Vec<[Complex64; 2]> {
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    (0..n).map(|_| [ci(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)), ci(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))]).collect()
}

#[test]
fn hamiltonian_is_a_first_integral() {
    let ham = sample_hamiltonian();
    let f = hamiltonian_field(&ham);
    let lie = &ham.h.dx() * &f.f + &ham.h.dy() * &f.g;
    assert!(lie.max_abs_coeff() < 1e-14);
}

#[test]
fn chart_energies_are_the_weighted_level() {
    let ham = sample_hamiltonian();
    let e = compactify_energy(&ham);
    let d = ham.h.degree() as i32;
    assert_eq!(e.weight, 3);
    for p in random_points(5, 50) {
        let [u, z] = p;
        let want = u.powi(d) * (ham.h.evaluate(1.0 / u, z / u) - ham.level_c);
        assert!((e.h_uz.evaluate(u, z) - want).norm() < 1e-10 * want.norm().max(1.0));
        let [v, w] = p;
        let want = v.powi(d) * (ham.h.evaluate(w / v, 1.0 / v) - ham.level_c);
        assert!((e.h_vw.evaluate(v, w) - want).norm() < 1e-10 * want.norm().max(1.0));
    }
}

#[test]
fn chart_energies_scale_along_the_chart_flow() {
    // h = u^d H̃ with H̃ conserved, so ∇h·F = d (u'/u) h in chart time
    let ham = sample_hamiltonian();
    let e = compactify_energy(&ham);
    let sys = to_charts(&hamiltonian_field(&ham)).unwrap();
    let d = e.weight as f64;
    for chart in [Chart::UZ, Chart::VW] {
        let h = e.in_chart(chart);
        let (hx, hy) = (h.dx(), h.dy());
        for p in random_points(9, 30) {
            let f = sys.field(chart).eval(p);
            let lhs = hx.evaluate(p[0], p[1]) * f[0] + hy.evaluate(p[0], p[1]) * f[1];
            let rhs = d * f[0] / p[0] * h.evaluate(p[0], p[1]);
            assert!((lhs - rhs).norm() < 1e-9 * rhs.norm().max(1.0), "{chart}: {lhs} vs {rhs}");
        }
    }
}

#[test]
fn energy_is_conserved_through_poles() {
    let e = entry("weierstrass", &[]);
    let h = e.hamiltonian().unwrap().h.clone();
    let sys = to_charts(&e.field()).unwrap();
    let start = [c(2.0), c(1.0)];
    let ham = PolynomialHamiltonian::new(h.clone(), h.evaluate(start[0], start[1]));
    let tr = integrate_path(&sys, Chart::XY, start, &TimePath::line(c(0.0), c(1.5)), &IntegrationConfig::default(), None).unwrap();
    assert!(tr.samples.iter().any(|s| s.chart != Chart::XY), "the real orbit should pass a pole");
    assert!(energy_drift(&ham, &tr) < 1e-7);
}

#[test]
fn pendulum_windings() {
    // (m - 1, m + 1, m - 1) reduced by their gcd
    let cases: [(Vec<f64>, (i64, i64, i64)); 5] = [
        (vec![-6.0, 0.0, 6.0], (1, 3, 1)),
        (vec![0.0, 0.0, 1.0], (1, 3, 1)),
        (vec![0.0, -1.0, 0.0, 1.0], (1, 2, 1)),
        (vec![1.0, 0.0, 0.0, 2.0], (1, 2, 1)),
        (vec![0.0, 0.0, 0.0, 0.0, 1.0], (3, 5, 3)),
    ];
    for (g, want) in cases {
        let g: Vec<Complex64> = g.into_iter().map(c).collect();
        let r = pendulum_loop_windings(&Pendulum::from_force(&g, c(0.0)), 0.05).unwrap();
        assert!(r.closed, "{g:?}");
        let w = r.windings.unwrap();
        assert_eq!((w.w_t, w.w_v, w.w_w), want, "{g:?}");
        assert_eq!(r.m as usize, g.len() - 1);
    }
}

#[test]
fn pendulum_potential_and_critical_levels() {
    let g = [c(-6.0), c(0.0), c(6.0)];
    let p = Pendulum::from_force(&g, c(0.0));
    assert_eq!(p.potential, vec![c(0.0), c(-6.0), c(0.0), c(2.0)]);
    assert_eq!(p.force(), g.to_vec());
    assert_eq!(p.degree_m(), 2);
    assert!(!p.critical_level());
    // G(±1) = ∓4 and the level ½y² − G = c meets x = ±1, y = 0 at c = ±4
    assert!(Pendulum::from_force(&g, c(4.0)).critical_level());
    assert!(Pendulum::from_force(&g, c(-4.0)).critical_level());
    let h = p.hamiltonian().h;
    assert_eq!(h.coeff(0, 2), c(0.5));
    assert_eq!(h.coeff(3, 0), c(-2.0));
}

#[test]
fn pendulum_errors() {
    assert!(matches!(pendulum_loop_windings(&Pendulum::from_force(&[], c(0.0)), 0.05), Err(Error::DegenerateLeadingTerm)));
    assert!(matches!(pendulum_loop_windings(&Pendulum::from_force(&[c(0.0), c(1.0)], c(0.0)), 0.05), Err(Error::OutOfRange(_))));
    assert!(matches!(pendulum_loop_windings(&Pendulum::from_force(&[c(0.0), c(0.0), c(1.0)], c(0.0)), 0.0), Err(Error::Invalid(_))));
    let linear = PolynomialHamiltonian::new(BivariatePolynomial::x(), c(0.0));
    assert!(matches!(linear.validate(), Err(Error::DegreeZero(_))));
}
