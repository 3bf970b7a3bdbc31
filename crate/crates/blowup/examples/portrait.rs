//! Real-time phase portrait of the Riccati flow, written as SVG and CSV.
//!
//! Usage: `cargo run --example portrait -- [out-dir]`

use std::collections::BTreeMap;
use std::path::PathBuf;

use blowup::algebra::{to_charts, Chart};
use blowup::cli::{sample_portrait, Grid, PortraitSpec, TimeDirection};
use blowup::scenarios::catalog_get;
use blowup::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out: PathBuf = std::env::args().nth(1).unwrap_or_else(|| ".".into()).into();
    let p = [("a", 1.0), ("e1", 1.0), ("e2", -1.0)].map(|(k, v)| (k.to_string(), v)).into();
    let sys = to_charts(&catalog_get("riccati", &p)?.field())?;

    let spec = PortraitSpec {
        chart: Chart::XY,
        grid: Grid { coordinate: 0, re: [-2.5, 2.5], im: [-1.2, 1.2], counts: [11, 7], fixed: Complex64::new(0.0, 0.0) },
        time_direction: TimeDirection::Real,
        horizon: 6.0,
        styling: BTreeMap::new(),
        equilibrium: None,
    };
    let bundle = sample_portrait(&sys, &spec, true)?;
    let sink = bundle
        .seeds
        .iter()
        .filter(|s| s.end.is_some_and(|e| (e[0] + 1.0).norm() < 0.05))
        .count();
    println!("{sink} of {} seeds end near the sink x = -1", bundle.seeds.len());

    std::fs::create_dir_all(&out)?;
    std::fs::write(out.join("riccati.svg"), &bundle.svg)?;
    std::fs::write(out.join("riccati.csv"), &bundle.csv)?;
    println!("wrote {}", out.join("riccati.svg").display());
    Ok(())
}
