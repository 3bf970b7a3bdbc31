//! Equilibria of the two Galerkin caricatures, found numerically and
//! compared with their closed-form spectra.

use blowup::algebra::{map_point, to_charts};
use blowup::equilibria::{classify_spectrum, find_equilibria, SearchRegion, DEFAULT_DENOMINATOR_BOUND, DEFAULT_TOL};
use blowup::scenarios::{catalog_get, galerkin_spectrum, GalerkinVariant};

fn main() -> blowup::Result<()> {
    let runs: [(&str, GalerkinVariant, Vec<(&str, f64)>); 4] = [
        ("galerkin_symmetric", GalerkinVariant::Symmetric, vec![("a", -0.5)]),
        ("galerkin_symmetric", GalerkinVariant::Symmetric, vec![("a", 2.0)]),
        ("galerkin_asymmetric", GalerkinVariant::Asymmetric, vec![("b1", 1.0), ("beta", 0.0)]),
        ("galerkin_asymmetric", GalerkinVariant::Asymmetric, vec![("b1", 0.5), ("beta", 2.0)]),
    ];
    for (name, variant, kv) in runs {
        let p = kv.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        let sys = to_charts(&catalog_get(name, &p)?.field())?;
        let found: Vec<_> = find_equilibria(&sys, SearchRegion::All)?
            .iter()
            .map(|e| classify_spectrum(&sys, e, DEFAULT_TOL, DEFAULT_DENOMINATOR_BOUND))
            .collect();
        println!("{name} {kv:?}");
        for want in galerkin_spectrum(variant, &p)? {
            let w = want.spectrum.as_ref().expect("closed form");
            // the classifier may report an overlap point from the other chart
            let got = found.iter().find(|e| {
                map_point(e.chart, want.chart, e.location)
                    .is_some_and(|q| (q[0] - want.location[0]).norm() + (q[1] - want.location[1]).norm() < 1e-8)
            });
            let q = got.and_then(|e| e.spectrum.as_ref()).and_then(|s| s.spectral_quotient);
            println!(
                "  {} {:.6?}: λ closed {:.10?} numeric {:.10?} semisimple {}",
                want.chart, want.location, w.spectral_quotient, q, w.semisimple
            );
        }
    }
    Ok(())
}
