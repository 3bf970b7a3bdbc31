//! Loading a user system from JSON. Terms are `[j, k, re, im]` rows for
//! the coefficient of `x^j y^k`; a Hamiltonian is given by `H` and a level `c`.

use blowup::algebra::to_charts;
use blowup::cli::{parse_system_str, SystemSpec};
use blowup::equilibria::{find_equilibria, SearchRegion};

const FIELD: &str = r#"{
  "name": "riccati",
  "f": [[2, 0, 1.0, 0.0], [0, 0, -1.0, 0.0]],
  "g": [[0, 1, -1.0, 0.0]]
}"#;

const HAMILTONIAN: &str = r#"{
  "name": "weierstrass",
  "H": [[0, 2, 0.5, 0.0], [3, 0, -2.0, 0.0], [1, 0, 6.0, 0.0]],
  "c": [0.0, 0.0]
}"#;

const BROKEN: &str = r#"{
  "f": [[2, 0, 1.0, 0.0],
        [0, 0, "one", 0.0]],
  "g": []
}"#;

fn main() -> blowup::Result<()> {
    for text in [FIELD, HAMILTONIAN] {
        let spec = parse_system_str(text)?;
        let kind = match &spec {
            SystemSpec::Field { .. } => "field",
            SystemSpec::Hamiltonian { .. } => "hamiltonian",
        };
        let sys = to_charts(&spec.field())?;
        let eqs = find_equilibria(&sys, SearchRegion::All)?;
        println!("{} ({kind}): f = {}, g = {}, {} equilibria", spec.name(), sys.xy_field.f, sys.xy_field.g, eqs.len());
    }
    match parse_system_str(BROKEN) {
        Ok(_) => println!("unexpectedly parsed"),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}
