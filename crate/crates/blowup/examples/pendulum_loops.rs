//! Blow-up loops of `ẍ = g(x)` traced on the energy curve near `v = w = 0`.
//!
//! Usage: `cargo run --example pendulum_loops -- -6 0 6` for the force
//! coefficients in ascending order (defaults to the Weierstrass case).

use blowup::hamiltonian::{pendulum_loop_windings, Pendulum};
use blowup::Complex64;

fn main() -> blowup::Result<()> {
    let args: Vec<f64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let cases: Vec<Vec<f64>> = if args.is_empty() {
        vec![vec![-6.0, 0.0, 6.0], vec![0.0, -1.0, 0.0, 1.0], vec![0.0, 0.0, 0.0, 0.0, 1.0]]
    } else {
        vec![args]
    };
    for g in cases {
        let force: Vec<Complex64> = g.iter().map(|&c| Complex64::new(c, 0.0)).collect();
        let r = pendulum_loop_windings(&Pendulum::from_force(&force, Complex64::new(0.0, 0.0)), 0.05)?;
        match r.windings {
            Some(w) => println!("g = {g:?}  m = {}  (w_t, w_v, w_w) = ({}, {}, {})  leaves {:?}", r.m, w.w_t, w.w_v, w.w_w, r.leaves),
            None => println!("g = {g:?}  m = {}  loop did not close", r.m),
        }
    }
    Ok(())
}
