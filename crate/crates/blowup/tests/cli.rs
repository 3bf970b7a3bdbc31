use std::path::{Path, PathBuf};

use blowup::cli::run;
use serde_json::{json, Value};

const RICCATI: &str = "catalog:riccati?a=1&e1=1&e2=-1";

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn cli(args: &[&str]) -> Output {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut full = vec!["blowup"];
    full.extend_from_slice(args);
    let code = run(full, &mut out, &mut err);
    Output { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

fn ok_json(args: &[&str]) -> Value {
    let o = cli(args);
    assert_eq!(o.code, 0, "{args:?}: {}", o.stderr);
    serde_json::from_str(&o.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}\n{}", o.stdout))
}

fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas")
}

fn assert_valid(schema: &str, instance: &Value) {
    let text = std::fs::read_to_string(schema_dir().join(format!("{schema}.schema.json"))).unwrap();
    let schema_value: Value = serde_json::from_str(&text).unwrap();
    let compiled = jsonschema::JSONSchema::options()
        .with_draft(jsonschema::Draft::Draft202012)
        .compile(&schema_value)
        .unwrap_or_else(|e| panic!("{schema}: {e}"));
    let msgs: Vec<String> = match compiled.validate(instance) {
        Ok(()) => return,
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    panic!("{schema}: {}", msgs.join("; "));
}

fn write_json(dir: &Path, name: &str, v: &Value) -> String {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p.display().to_string()
}

fn pair(v: &Value) -> (f64, f64) {
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

#[test]
fn outputs_match_their_schemas() {
    assert_valid("trees", &ok_json(&["trees", "--max-m", "10"]));
    assert_valid("catalog_list", &ok_json(&["catalog", "list"]));
    for uri in [RICCATI, "weierstrass", "galerkin_asymmetric?b1=1&beta=0", "reciprocal_linear?a=1&b=-1&n1=2&n2=3"] {
        assert_valid("catalog_show", &ok_json(&["catalog", "show", uri]));
    }
    assert_valid("classify", &ok_json(&["classify", RICCATI, "--small-divisors"]));
    assert_valid("classify", &ok_json(&["classify", "catalog:jordan_block", "--region", "infinity"]));
    assert_valid("classify", &ok_json(&["classify", "catalog:galerkin_symmetric?a=2", "--region", "infinity"]));
    assert_valid("holonomy", &ok_json(&["holonomy", "catalog:linear_diag?l1=0.5&l2=1"]));
    assert_valid("detour", &ok_json(&["detour", "catalog:scalar_poly?m=3", "--cycles", "2"]));
    assert_valid("detour", &ok_json(&["detour", "catalog:scalar_poly?m=3", "--cycles", "1"]));
    assert_valid("linearize", &ok_json(&["linearize", "catalog:galerkin_symmetric?a=-0.5", "--eq", "0"]));
    assert_valid("pendulum", &ok_json(&["pendulum", "--g", "-6,0,6"]));
}

#[test]
fn input_fixtures_match_their_schemas() {
    let system = json!({"name": "riccati", "f": [[2, 0, 1.0, 0.0], [0, 0, -1.0, 0.0]], "g": [[0, 1, -1.0, 0.0]]});
    assert_valid("system", &system);
    let hamiltonian = json!({"name": "weierstrass", "H": [[0, 2, 0.5, 0.0], [3, 0, -2.0, 0.0], [1, 0, 6.0, 0.0]], "c": [0.0, 0.0]});
    assert_valid("system", &hamiltonian);
    let path = json!({"segments": [{"type": "line", "from": [0.0, 0.0], "to": [1.0, 0.5]}]});
    assert_valid("path", &path);
    assert_valid("portrait_spec", &riccati_portrait("real", 10.0));
}

#[test]
fn system_files_drive_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    let sys = write_json(dir.path(), "riccati.json", &json!({"name": "riccati", "f": [[2, 0, 1.0, 0.0], [0, 0, -1.0, 0.0]], "g": [[0, 1, -1.0, 0.0]]}));
    let from_file = ok_json(&["classify", &sys]);
    let from_catalog = ok_json(&["classify", RICCATI]);
    assert_eq!(from_file, from_catalog);

    let path = write_json(dir.path(), "path.json", &json!({"segments": [{"type": "line", "from": [0.0, 0.0], "to": [0.5, 0.0]}]}));
    let o = cli(&["integrate", &sys, "--path", &path, "--start", "0,0"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    // x(t) = -tanh t
    let last = o.stdout.lines().last().unwrap();
    let exact = -(0.5f64).tanh();
    assert!(last.split(',').any(|f| f.trim().parse::<f64>().is_ok_and(|x| (x - exact).abs() < 1e-10)), "{last}");
    let csv = dir.path().join("out.csv");
    assert_eq!(cli(&["integrate", &sys, "--path", &path, "--start", "0,0", "--out", csv.to_str().unwrap()]).code, 0);
    assert_eq!(std::fs::read_to_string(&csv).unwrap(), o.stdout);
}

#[test]
fn errors_are_json_lines_with_exit_codes() {
    let check = |args: &[&str], kind: &str, code: i32| {
        let o = cli(args);
        assert_eq!(o.code, code, "{args:?}: {}", o.stderr);
        assert!(o.stdout.is_empty());
        assert_eq!(o.stderr.lines().count(), 1);
        let v: Value = serde_json::from_str(&o.stderr).unwrap();
        assert_eq!(v["error"], kind, "{args:?}");
        assert_valid("error", &v);
    };
    check(&["frobnicate"], "UsageError", 2);
    check(&["trees", "--max-m", "31"], "OutOfRange", 2);
    check(&["catalog", "show", "nope"], "UnknownName", 2);
    check(&["catalog", "show", "riccati?a=1"], "MissingParameter", 2);
    check(&["classify", "/nonexistent/system.json"], "ParseError", 2);
    check(&["holonomy", RICCATI, "--eq", "99"], "OutOfRange", 2);
    check(&["classify", "catalog:jordan_block"], "DegenerateSystem", 3);
    check(&["detour", "catalog:jordan_block", "--cycles", "1", "--radius", "5"], "Invalid", 2);
    check(&["linearize", "catalog:linear_diag?l1=0.5&l2=1", "--eq", "0"], "ResonantAtOrder", 3);
    check(&["pendulum", "--g", "0,1"], "OutOfRange", 2);

    let dir = tempfile::tempdir().unwrap();
    // (x², xy) vanishes on the line x = 0
    let line = write_json(dir.path(), "line.json", &json!({"f": [[2, 0, 1.0, 0.0]], "g": [[1, 1, 1.0, 0.0]]}));
    check(&["classify", &line], "DegenerateSystem", 3);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"f\": [[2, 0, 1.0, 0.0],\n        [0, 0, \"x\", 0.0]],\n  \"g\": []\n}").unwrap();
    let o = cli(&["classify", bad.to_str().unwrap()]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("line 3"), "{}", o.stderr);
}

#[test]
fn help_and_version_exit_cleanly() {
    let o = cli(&["--help"]);
    assert_eq!(o.code, 0);
    for sub in ["classify", "integrate", "holonomy", "detour", "linearize", "portrait", "pendulum", "trees", "catalog"] {
        assert!(o.stdout.contains(sub), "{sub}");
    }
    assert_eq!(cli(&["--version"]).code, 0);
}

#[test]
fn table_format() {
    let o = cli(&["trees", "--max-m", "5", "--format", "table"]);
    assert_eq!(o.stdout, "  2 1\n  3 1\n  4 2\n  5 3\n");
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["classify", "catalog:galerkin_asymmetric?b1=1&beta=0"],
        vec!["holonomy", "catalog:linear_diag?l1=0.3&l2=1"],
        vec!["detour", "catalog:scalar_poly?m=2"],
        vec!["pendulum", "--g", "0,-1,0,1"],
    ] {
        let a = cli(&args).stdout;
        assert!(!a.is_empty());
        assert_eq!(a, cli(&args).stdout, "{args:?}");
    }
}

fn riccati_portrait(direction: &str, horizon: f64) -> Value {
    json!({
        "chart": "XY",
        "grid": {"coordinate": 0, "re": [-2.5, 2.5], "im": [-1.2, 1.2], "counts": [8, 5], "fixed": [0.0, 0.0]},
        "time_direction": direction,
        "horizon": horizon,
        "styling": {"window": [-3.0, 3.0, -3.0, 3.0]}
    })
}

fn portrait(dir: &Path, spec: &Value, extra: &[&str]) -> Value {
    let p = write_json(dir, "portrait.json", spec);
    let d = dir.display().to_string();
    let mut args = vec!["portrait", RICCATI, "--portrait", &p, "--out-dir", &d];
    args.extend_from_slice(extra);
    let v = ok_json(&args);
    assert_valid("portrait_report", &v);
    v
}

#[test]
fn riccati_portrait_real_time_flows_to_the_sink() {
    let dir = tempfile::tempdir().unwrap();
    let v = portrait(dir.path(), &riccati_portrait("real", 10.0), &[]);
    let seeds = v["seeds"].as_array().unwrap();
    assert_eq!(seeds.len(), 40);
    let near_sink = seeds
        .iter()
        .filter(|s| s["end"].as_array().is_some_and(|e| {
            let (re, im) = pair(&e[0]);
            ((re + 1.0).powi(2) + im * im).sqrt() < 0.05
        }))
        .count();
    assert!(near_sink as f64 >= 0.9 * 40.0, "{near_sink} of 40");
    let svg = std::fs::read_to_string(dir.path().join("portrait.svg")).unwrap();
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
    let csv = std::fs::read_to_string(dir.path().join("portrait.csv")).unwrap();
    assert!(csv.lines().count() > 40);
}

#[test]
fn riccati_portrait_imaginary_time_is_periodic() {
    let dir = tempfile::tempdir().unwrap();
    let v = portrait(dir.path(), &riccati_portrait("imaginary", std::f64::consts::PI), &[]);
    let seeds = v["seeds"].as_array().unwrap();
    let returned = seeds
        .iter()
        .filter(|s| {
            let start = pair(&s["start"][0]);
            s["end"].as_array().is_some_and(|e| {
                let end = pair(&e[0]);
                ((end.0 - start.0).powi(2) + (end.1 - start.1).powi(2)).sqrt() < 0.01
            })
        })
        .count();
    assert!(returned as f64 >= 0.9 * seeds.len() as f64, "{returned} of {}", seeds.len());
}

#[test]
fn reproducible_portraits_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let spec = riccati_portrait("real", 4.0);
    portrait(a.path(), &spec, &["--reproducible", "--jobs", "1"]);
    portrait(b.path(), &spec, &["--reproducible", "--jobs", "4"]);
    for f in ["portrait.svg", "portrait.csv"] {
        assert_eq!(std::fs::read(a.path().join(f)).unwrap(), std::fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn empty_grid_draws_axes_only() {
    let dir = tempfile::tempdir().unwrap();
    let mut spec = riccati_portrait("real", 1.0);
    spec["grid"]["counts"] = json!([0, 0]);
    let v = portrait(dir.path(), &spec, &[]);
    assert!(v["seeds"].as_array().unwrap().is_empty());
    let svg = std::fs::read_to_string(dir.path().join("portrait.svg")).unwrap();
    assert!(svg.contains("<line") && !svg.contains("<polyline"), "{svg}");
}
