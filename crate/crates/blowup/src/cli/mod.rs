//! Command-line driver: subcommands, report assembly and error reporting.
//!
//! Reports go to stdout as JSON (CSV for trajectories). Errors go to stderr
//! as one JSON line and map to exit code 2 (bad input) or 3 (numerical failure).

mod portrait;
mod system_file;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;

pub use portrait::{sample_portrait, Grid, PortraitBundle, PortraitSpec, SeedResult, StarBranch, TimeDirection};
pub use system_file::{load_system, parse_system_file, parse_system_str, SystemSpec};

use crate::algebra::{to_charts, Chart, ChartSystem, C2};
use crate::equilibria::{
    classify_spectrum, find_equilibria, small_divisor_scan, EquilibriumRecord, SearchRegion, SmallDivisor,
    DEFAULT_DENOMINATOR_BOUND, DEFAULT_TOL,
};
use crate::error::{Error, Result};
use crate::flow::{integrate_path, IntegrationConfig, TimePath};
use crate::hamiltonian::{pendulum_loop_windings, Pendulum};
use crate::holonomy::{
    approach_blowup, blowup_star, default_fiber_radii, fit_blowup_time, has_invariant_fiber, holonomy_multiplier_with,
    masuda_detour_with, Branch, DetourReport, HolonomyOptions,
};
use crate::normalform::{conjugacy_residual, poincare_linearize, ResidualReport, TruncatedTransform};
use crate::scenarios::{catalog_get, list, parse_uri, tree_count};

#[derive(Debug, Parser)]
#[command(name = "blowup", version, about = "Complex-time blow-up analysis of planar polynomial ODEs")]
pub struct Cli {
    /// worker threads for parallel stages (BLOWUP_JOBS overrides)
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// suppress timestamps so repeated runs are byte-identical
    #[arg(long, global = true)]
    pub reproducible: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Equilibria with their spectra
    Classify {
        spec: String,
        #[arg(long, value_enum, default_value = "all")]
        region: Region,
        /// append the small-divisor scan up to this order
        #[arg(long, num_args = 0..=1, default_missing_value = "10")]
        small_divisors: Option<u32>,
    },
    /// Trajectory CSV along a time path
    Integrate {
        spec: String,
        #[arg(long)]
        path: PathBuf,
        /// c1,c2 (real) or re1,im1,re2,im2
        #[arg(long, allow_hyphen_values = true)]
        start: String,
        #[arg(long, default_value = "xy")]
        chart: Chart,
        /// interpret the path in the chart's own time
        #[arg(long)]
        chart_time: bool,
        #[arg(long)]
        rel_tol: Option<f64>,
        #[arg(long)]
        abs_tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Holonomy multiplier around an equilibrium
    Holonomy {
        spec: String,
        #[arg(long, default_value_t = 0)]
        eq: usize,
        #[arg(long, default_value_t = 0.1)]
        radius: f64,
        /// largest fiber radius; two halvings follow
        #[arg(long, default_value_t = 1e-2)]
        fiber_radius: f64,
        #[arg(long)]
        clockwise: bool,
        /// normal-form order used when the fiber line is not invariant
        #[arg(long, default_value_t = crate::normalform::DEFAULT_ORDER)]
        order: u32,
    },
    /// Masuda detour around the blow-up time
    Detour {
        spec: String,
        /// equilibrium index; defaults to the first blow-up equilibrium at infinity
        #[arg(long)]
        eq: Option<usize>,
        #[arg(long, default_value_t = 1)]
        cycles: u32,
        /// loop radius; defaults to half the distance to the fitted blow-up time
        #[arg(long)]
        radius: Option<f64>,
        /// approach start in chart coordinates (defaults to fiber 0.5 over the equilibrium)
        #[arg(long, allow_hyphen_values = true)]
        start: Option<String>,
        #[arg(long, default_value_t = 0.05)]
        ball: f64,
        /// closure threshold relative to the fiber start
        #[arg(long)]
        closure: Option<f64>,
    },
    /// Formal Poincaré linearization and its conjugacy residual
    Linearize {
        spec: String,
        #[arg(long, default_value_t = 0)]
        eq: usize,
        #[arg(long, default_value_t = crate::normalform::DEFAULT_ORDER)]
        order: u32,
        #[arg(long, default_value_t = 0.1)]
        residual_radius: f64,
    },
    /// Phase portrait as SVG and CSV
    Portrait {
        spec: String,
        #[arg(long)]
        portrait: PathBuf,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        #[arg(long, default_value = "portrait")]
        stem: String,
    },
    /// Winding numbers of the pendulum blow-up loop
    Pendulum {
        /// ascending coefficients of g, comma separated; complex entries as re:im
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        level: f64,
        #[arg(long, default_value_t = 0.05)]
        radius: f64,
    },
    /// Planar tree counts
    Trees {
        #[arg(long, default_value_t = 16)]
        max_m: u32,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Built-in example systems
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum Region {
    Finite,
    Infinity,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Subcommand)]
pub enum CatalogAction {
    List,
    /// `name` or `name?k=v&...`
    Show { name: String },
}

#[derive(Serialize)]
struct ErrorLine<'a> {
    error: &'a str,
    message: String,
}

#[derive(Serialize)]
struct ClassifiedRecord {
    index: usize,
    #[serde(flatten)]
    record: EquilibriumRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    small_divisors: Option<Vec<SmallDivisor>>,
}

#[derive(Serialize)]
struct DetourOutput {
    equilibrium: EquilibriumRecord,
    #[serde(flatten)]
    report: DetourReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    branches: Option<Vec<Branch>>,
}

#[derive(Serialize)]
struct LinearizeOutput {
    equilibrium: EquilibriumRecord,
    transform: TruncatedTransform,
    residual: ResidualReport,
}

#[derive(Serialize)]
struct TreeRow {
    m: u32,
    count: u128,
}

#[derive(Serialize)]
struct PortraitOutput {
    svg: String,
    csv: String,
    #[serde(flatten)]
    bundle: PortraitBundle,
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    serde_json::to_string_pretty(v).map_err(|e| Error::Invalid(format!("serialization failed: {e}")))
}

fn io_err(e: std::io::Error) -> Error {
    Error::Invalid(format!("i/o error: {e}"))
}

fn parse_number(s: &str) -> Result<Complex64> {
    let s = s.trim();
    let bad = || Error::Parse(format!("'{s}' is not a number (use re or re:im)"));
    match s.split_once(':') {
        Some((a, b)) => Ok(Complex64::new(a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?)),
        None => Ok(Complex64::new(s.parse().map_err(|_| bad())?, 0.0)),
    }
}

fn parse_point(s: &str) -> Result<C2> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|_| Error::Parse(format!("'{p}' in '{s}' is not a number"))))
        .collect::<Result<_>>()?;
    match parts[..] {
        [a, b] => Ok([Complex64::new(a, 0.0), Complex64::new(b, 0.0)]),
        [a, b, c, d] => Ok([Complex64::new(a, b), Complex64::new(c, d)]),
        _ => Err(Error::Parse(format!("point '{s}' needs 2 or 4 numbers"))),
    }
}

fn system_of(spec: &str) -> Result<(SystemSpec, ChartSystem)> {
    let s = load_system(spec)?;
    let system = to_charts(&s.field())?;
    Ok((s, system))
}

fn equilibrium(system: &ChartSystem, index: usize) -> Result<EquilibriumRecord> {
    let eqs = find_equilibria(system, SearchRegion::All)?;
    let n = eqs.len();
    let eq = eqs.into_iter().nth(index).ok_or_else(|| Error::OutOfRange(format!("equilibrium index {index}, system has {n}")))?;
    Ok(classify_spectrum(system, &eq, DEFAULT_TOL, DEFAULT_DENOMINATOR_BOUND))
}

/// First equilibrium at infinity with a nonvanishing fiber eigenvalue.
fn default_blowup_equilibrium(system: &ChartSystem) -> Result<EquilibriumRecord> {
    find_equilibria(system, SearchRegion::InfinityOnly)?
        .into_iter()
        .map(|e| classify_spectrum(system, &e, DEFAULT_TOL, DEFAULT_DENOMINATOR_BOUND))
        .find(|e| e.spectrum.as_ref().is_some_and(|s| s.eigenvalues[0].norm() > 1e-12))
        .ok_or_else(|| Error::DegenerateSystem("no blow-up equilibrium with a nonzero fiber eigenvalue".into()))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf, what: &str) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{what} {}: line {}, column {}: {e}", path.display(), e.line(), e.column())))
}

fn jobs(cli_jobs: Option<usize>) -> Result<Option<usize>> {
    match std::env::var("BLOWUP_JOBS") {
        Ok(v) => v.trim().parse::<usize>().map(Some).map_err(|_| Error::Invalid(format!("BLOWUP_JOBS='{v}' is not a count"))),
        Err(_) => Ok(cli_jobs),
    }
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<()> {
    let threads = jobs(cli.jobs)?;
    let reproducible = cli.reproducible;
    match cli.command {
        Command::Classify { spec, region, small_divisors } => {
            let (_, system) = system_of(&spec)?;
            let region = match region {
                Region::Finite => SearchRegion::FiniteOnly,
                Region::Infinity => SearchRegion::InfinityOnly,
                Region::All => SearchRegion::All,
            };
            let rows: Vec<ClassifiedRecord> = find_equilibria(&system, region)?
                .iter()
                .enumerate()
                .map(|(index, e)| {
                    let record = classify_spectrum(&system, e, DEFAULT_TOL, DEFAULT_DENOMINATOR_BOUND);
                    let small_divisors =
                        small_divisors.map(|n| small_divisor_scan(record.spectrum.as_ref().expect("classified").eigenvalues, n));
                    ClassifiedRecord { index, record, small_divisors }
                })
                .collect();
            writeln!(out, "{}", json(&rows)?).map_err(io_err)
        }
        Command::Integrate { spec, path, start, chart, chart_time, rel_tol, abs_tol, out: file } => {
            let (_, system) = system_of(&spec)?;
            let path: TimePath = read_json(&path, "path spec")?;
            path.validate()?;
            let mut cfg = IntegrationConfig::default();
            if let Some(r) = rel_tol {
                cfg.rel_tol = r;
            }
            if let Some(a) = abs_tol {
                cfg.abs_tol = a;
            }
            if chart_time {
                cfg = cfg.in_chart_time(path.start());
            }
            cfg.validate()?;
            let tr = integrate_path(&system, chart, parse_point(&start)?, &path, &cfg, None)?;
            match file {
                Some(f) => tr.write_csv(std::fs::File::create(&f).map_err(io_err)?).map_err(io_err),
                None => tr.write_csv(out).map_err(io_err),
            }
        }
        Command::Holonomy { spec, eq, radius, fiber_radius, clockwise, order } => {
            let (_, system) = system_of(&spec)?;
            let eq = equilibrium(&system, eq)?;
            let tf = if has_invariant_fiber(&system, &eq) { None } else { Some(poincare_linearize(&system, &eq, order)?) };
            let opts = HolonomyOptions { clockwise, straightening: tf.as_ref(), config: IntegrationConfig::default() };
            let est = holonomy_multiplier_with(&system, &eq, radius, &default_fiber_radii(fiber_radius), &opts)?;
            writeln!(out, "{}", json(&est)?).map_err(io_err)
        }
        Command::Detour { spec, eq, cycles, radius, start, ball, closure } => {
            let (_, system) = system_of(&spec)?;
            let eq = match eq {
                Some(i) => equilibrium(&system, i)?,
                None => default_blowup_equilibrium(&system)?,
            };
            let start = match start {
                Some(s) => parse_point(&s)?,
                None => [eq.location[0] + 0.5, eq.location[1]],
            };
            let cfg = IntegrationConfig { singularity_radius: ball, ..Default::default() };
            cfg.validate()?;
            let approach = approach_blowup(&system, &eq, start, &cfg)?;
            let radius = match radius {
                Some(r) => r,
                None => 0.5 * (approach.last().t - fit_blowup_time(&system, &eq, &approach)?.t_estimate).norm(),
            };
            let report = masuda_detour_with(&system, &eq, &approach, radius, cycles, closure, &IntegrationConfig::default())?;
            let branches = if report.closed { Some(blowup_star(&system, &eq, &report)?) } else { None };
            writeln!(out, "{}", json(&DetourOutput { equilibrium: eq, report, branches })?).map_err(io_err)
        }
        Command::Linearize { spec, eq, order, residual_radius } => {
            let (_, system) = system_of(&spec)?;
            let eq = equilibrium(&system, eq)?;
            let transform = poincare_linearize(&system, &eq, order)?;
            let residual = conjugacy_residual(&system, &eq, &transform, residual_radius, 64)?;
            writeln!(out, "{}", json(&LinearizeOutput { equilibrium: eq, transform, residual })?).map_err(io_err)
        }
        Command::Portrait { spec, portrait, out_dir, stem } => {
            let (_, system) = system_of(&spec)?;
            let pspec: PortraitSpec = read_json(&portrait, "portrait spec")?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads.unwrap_or(0))
                .build()
                .map_err(|e| Error::Invalid(format!("thread pool: {e}")))?;
            let bundle = pool.install(|| sample_portrait(&system, &pspec, reproducible))?;
            std::fs::create_dir_all(&out_dir).map_err(io_err)?;
            let svg = out_dir.join(format!("{stem}.svg"));
            let csv = out_dir.join(format!("{stem}.csv"));
            std::fs::write(&svg, &bundle.svg).map_err(io_err)?;
            std::fs::write(&csv, &bundle.csv).map_err(io_err)?;
            let summary = PortraitOutput { svg: svg.display().to_string(), csv: csv.display().to_string(), bundle };
            writeln!(out, "{}", json(&summary)?).map_err(io_err)
        }
        Command::Pendulum { g, level, radius } => {
            let coeffs: Vec<Complex64> = g.split(',').map(parse_number).collect::<Result<_>>()?;
            let p = Pendulum::from_force(&coeffs, Complex64::new(level, 0.0));
            let report = pendulum_loop_windings(&p, radius)?;
            writeln!(out, "{}", json(&report)?).map_err(io_err)
        }
        Command::Trees { max_m, format } => {
            if !(2..=30).contains(&max_m) {
                return Err(Error::OutOfRange(format!("--max-m must lie in 2..=30, got {max_m}")));
            }
            let rows: Vec<TreeRow> = (2..=max_m).map(|m| Ok(TreeRow { m, count: tree_count(m)? })).collect::<Result<_>>()?;
            match format {
                Format::Json => writeln!(out, "{}", json(&rows)?),
                Format::Table => rows.iter().try_for_each(|r| writeln!(out, "{:>3} {}", r.m, r.count)),
            }
            .map_err(io_err)
        }
        Command::Catalog { action } => match action {
            CatalogAction::List => writeln!(out, "{}", json(&list())?).map_err(io_err),
            CatalogAction::Show { name } => {
                let (name, params) = parse_uri(&name)?;
                writeln!(out, "{}", json(&catalog_get(&name, &params)?)?).map_err(io_err)
            }
        },
    }
}

/// Run the CLI on `args` (including the program name); returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("usage error").trim_start_matches("error: ").to_string();
            let line = ErrorLine { error: "UsageError", message: first };
            let _ = writeln!(err, "{}", serde_json::to_string(&line).unwrap_or_default());
            return 2;
        }
    };
    match execute(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let line = ErrorLine { error: e.kind(), message: e.to_string() };
            let _ = writeln!(err, "{}", serde_json::to_string(&line).unwrap_or_default());
            if e.is_validation() {
                2
            } else {
                3
            }
        }
    }
}
