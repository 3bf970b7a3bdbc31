//! Equilibria of a catalog system, finite and at infinity, with their spectra.
//!
//! Usage: `cargo run --example classify -- 'riccati?a=1&e1=1&e2=-1'`

use blowup::algebra::to_charts;
use blowup::equilibria::{classify_spectrum, find_equilibria, SearchRegion, DEFAULT_DENOMINATOR_BOUND, DEFAULT_TOL};
use blowup::scenarios::{catalog_get, list, parse_uri};

fn main() -> blowup::Result<()> {
    let Some(uri) = std::env::args().nth(1) else {
        println!("catalog:");
        for info in list() {
            let params: Vec<&str> = info.params.iter().map(|p| p.name).collect();
            println!("  {:<20} [{}]  {}", info.name, params.join(", "), info.topic);
        }
        return Ok(());
    };
    let (name, params) = parse_uri(&uri)?;
    let entry = catalog_get(&name, &params)?;
    let sys = to_charts(&entry.field())?;
    // linear-at-infinity systems carry a line of equilibria in xy
    let region = if find_equilibria(&sys, SearchRegion::All).is_ok() { SearchRegion::All } else { SearchRegion::InfinityOnly };
    for e in find_equilibria(&sys, region)? {
        let r = classify_spectrum(&sys, &e, DEFAULT_TOL, DEFAULT_DENOMINATOR_BOUND);
        let s = r.spectrum.as_ref().expect("classified");
        println!(
            "{} {:.6?}\n    eigenvalues {:.6?}  λ {:.6?}  {:?} {:?} rational {:?}",
            r.chart, r.location, s.eigenvalues, s.spectral_quotient, s.domain, s.resonance, s.rational_quotient
        );
    }
    Ok(())
}
