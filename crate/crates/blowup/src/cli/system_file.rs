use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use serde_json::Value;

use crate::algebra::{parse_term, BivariatePolynomial, PlanarField};
use crate::error::{Error, Result};
use crate::hamiltonian::PolynomialHamiltonian;
use crate::scenarios::{catalog_get, parse_uri, CatalogEntry};

/// A validated user system: either a field `(f, g)` or a Hamiltonian `H` with level `c`.
#[derive(Debug, Clone, PartialEq)]
pub enum SystemSpec {
    Field { name: String, field: PlanarField },
    Hamiltonian { name: String, hamiltonian: PolynomialHamiltonian },
}

impl SystemSpec {
    pub fn name(&self) -> &str {
        match self {
            SystemSpec::Field { name, .. } | SystemSpec::Hamiltonian { name, .. } => name,
        }
    }

    pub fn field(&self) -> PlanarField {
        match self {
            SystemSpec::Field { field, .. } => field.clone(),
            SystemSpec::Hamiltonian { hamiltonian, .. } => crate::hamiltonian::hamiltonian_field(hamiltonian),
        }
    }

    pub fn hamiltonian(&self) -> Option<&PolynomialHamiltonian> {
        match self {
            SystemSpec::Hamiltonian { hamiltonian, .. } => Some(hamiltonian),
            SystemSpec::Field { .. } => None,
        }
    }
}

impl From<CatalogEntry> for SystemSpec {
    fn from(e: CatalogEntry) -> Self {
        match e.hamiltonian() {
            Some(h) => SystemSpec::Hamiltonian { name: e.name.clone(), hamiltonian: h.clone() },
            None => SystemSpec::Field { name: e.name.clone(), field: e.field() },
        }
    }
}

/// 1-based line of row `index` inside the array stored under `key`.
fn locate_row(text: &str, key: &str, index: usize) -> Option<usize> {
    let needle = format!("\"{key}\"");
    let start = text.find(&needle)? + needle.len();
    let bytes = text.as_bytes();
    let mut i = start;
    while i < bytes.len() && bytes[i] != b'[' {
        i += 1;
    }
    let (mut depth, mut row, mut in_str) = (0usize, 0usize, false);
    while i < bytes.len() {
        let b = bytes[i];
        if in_str {
            if b == b'\\' {
                i += 1;
            } else if b == b'"' {
                in_str = false;
            }
        } else {
            match b {
                b'"' => in_str = true,
                b'[' => {
                    depth += 1;
                    if depth == 2 {
                        if row == index {
                            return Some(text[..i].matches('\n').count() + 1);
                        }
                        row += 1;
                    }
                }
                b']' => {
                    depth -= 1;
                    if depth == 0 {
                        return None;
                    }
                }
                _ => {}
            }
        }
        i += 1;
    }
    None
}

fn polynomial(text: &str, obj: &serde_json::Map<String, Value>, key: &str) -> Result<BivariatePolynomial> {
    let rows = obj
        .get(key)
        .ok_or_else(|| Error::Parse(format!("field '{key}' is missing")))?
        .as_array()
        .ok_or_else(|| Error::Parse(format!("field '{key}' must be an array of [j, k, re, im] rows")))?;
    let mut p = BivariatePolynomial::zero();
    for (i, row) in rows.iter().enumerate() {
        let ((j, k), c) = parse_term(row).map_err(|m| {
            let line = locate_row(text, key, i).map(|l| format!("line {l}, ")).unwrap_or_default();
            Error::Parse(format!("{line}{key}[{i}]: {m}"))
        })?;
        p.add_term(j, k, c);
    }
    Ok(p)
}

fn complex(v: &Value, what: &str) -> Result<Complex64> {
    match v {
        Value::Number(n) => Ok(Complex64::new(n.as_f64().unwrap_or(f64::NAN), 0.0)),
        Value::Array(a) if a.len() == 2 && a.iter().all(Value::is_number) => {
            Ok(Complex64::new(a[0].as_f64().unwrap_or(f64::NAN), a[1].as_f64().unwrap_or(f64::NAN)))
        }
        _ => Err(Error::Parse(format!("{what} must be a number or [re, im], found {v}"))),
    }
}

/// Parse a system from JSON text: `{name, f, g, parameters}` or `{name, H, c}`.
pub fn parse_system_str(text: &str) -> Result<SystemSpec> {
    let v: Value = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    let obj = v.as_object().ok_or_else(|| Error::Parse("system spec must be a JSON object".into()))?;
    let name = match obj.get("name") {
        None => "unnamed".to_string(),
        Some(Value::String(s)) => s.clone(),
        Some(other) => return Err(Error::Parse(format!("field 'name' must be a string, found {other}"))),
    };
    if let Some(params) = obj.get("parameters") {
        let params = params.as_object().ok_or_else(|| Error::Parse("field 'parameters' must be an object".into()))?;
        if let Some((k, v)) = params.iter().find(|(_, v)| !v.is_number()) {
            return Err(Error::Parse(format!("parameters.{k}: user files must be fully numeric, found {v}")));
        }
    }
    if obj.contains_key("H") {
        let h = polynomial(text, obj, "H")?;
        let c = obj.get("c").map(|v| complex(v, "field 'c'")).transpose()?.unwrap_or_default();
        let ham = PolynomialHamiltonian::new(h, c);
        ham.validate()?;
        return Ok(SystemSpec::Hamiltonian { name, hamiltonian: ham });
    }
    let f = polynomial(text, obj, "f")?;
    let g = polynomial(text, obj, "g")?;
    if f.is_zero() && g.is_zero() {
        return Err(Error::ZeroField);
    }
    if f.degree() == 0 && g.degree() == 0 {
        return Err(Error::DegreeZero("both components are constant".into()));
    }
    Ok(SystemSpec::Field { name, field: PlanarField::new(f, g) })
}

pub fn parse_system_file(path: &Path) -> Result<SystemSpec> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_system_str(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

/// A `catalog:` URI or a path to a system file.
pub fn load_system(spec: &str) -> Result<SystemSpec> {
    if spec.starts_with("catalog:") {
        let (name, params): (String, BTreeMap<String, f64>) = parse_uri(spec)?;
        return Ok(catalog_get(&name, &params)?.into());
    }
    parse_system_file(Path::new(spec))
}
