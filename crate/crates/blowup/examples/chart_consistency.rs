//! The three projective charts describe one vector field: on their overlap
//! the velocities agree once mapped back to `xy`.

use blowup::algebra::{map_point, to_charts, velocity_in_xy, Chart};
use blowup::scenarios::catalog_get;
use blowup::Complex64;

fn main() -> blowup::Result<()> {
    let systems: [(&str, Vec<(&str, f64)>); 5] = [
        ("riccati", vec![("a", 1.0), ("e1", 1.0), ("e2", -1.0)]),
        ("homogeneous", vec![("p", 2.0), ("q", 3.0)]),
        ("weierstrass", vec![]),
        ("galerkin_symmetric", vec![("a", -0.5)]),
        ("duffing", vec![]),
    ];
    let points = [
        [Complex64::new(0.7, -1.1), Complex64::new(1.3, 0.4)],
        [Complex64::new(-2.5, 0.3), Complex64::new(0.2, 1.9)],
        [Complex64::new(3.0, 3.0), Complex64::new(-1.0, 0.5)],
    ];
    for (name, kv) in systems {
        let p = kv.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        let sys = to_charts(&catalog_get(name, &p)?.field())?;
        let mut worst: f64 = 0.0;
        for pt in points {
            let want = sys.xy_field.eval(pt);
            for chart in [Chart::UZ, Chart::VW] {
                let v = velocity_in_xy(&sys, chart, map_point(Chart::XY, chart, pt).expect("off the axes")).expect("finite velocity");
                let scale = want[0].norm().max(want[1].norm());
                worst = worst.max((v[0] - want[0]).norm().max((v[1] - want[1]).norm()) / scale);
            }
        }
        println!("{name:<20} m = {}  max relative disagreement {worst:.1e}", sys.degree_m());
    }
    Ok(())
}
