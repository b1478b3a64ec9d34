//! The `phasebench` command line.
//!
//! ```text
//! phasebench <thermo-table|equilibria|geometry-check|simulate> --config <path> --out <dir> [--seed <u64>]
//! ```
//!
//! Exit codes: 0 success, 1 guarded simulation abort (partial outputs are
//! written), 2 to 5 configuration errors (missing file, parse error, unknown
//! key or section, invariant violation), 6 numerical failure, 7 I/O failure,
//! 64 usage error. Every failure ends stderr with
//! `ERROR code=<n> reason=<slug>`.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use log::{info, warn, LevelFilter};

use crate::config::{parse_config, ConfigError, Purpose, RunConfig};
use crate::equilibria::ostwald_scan;
use crate::geometry::checks::{run_checks, CHECK_CSV_HEADER};
use crate::roots::linspace;
use crate::stefan::{read_checkpoint, run, run_from, write_checkpoint, StefanError, CSV_HEADER};

pub const EXIT_GUARD_ABORT: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 6;
pub const EXIT_IO: i32 = 7;
pub const EXIT_USAGE: i32 = 64;

pub const THERMO_CSV_HEADER: &str = "theta,psi1,psi2,eta1,eta2,eps1,eps2,kappa1,kappa2,psi_jump,latent";
pub const EQUILIBRIA_CSV_HEADER: &str = "theta,radius,pressure_jump,phi,phi_prime,stable";
pub const OSTWALD_CSV_HEADER: &str = "R1,R2,theta,entropy";
/// Radii per axis of the two-ball entropy scan.
pub const OSTWALD_GRID: usize = 31;

#[derive(Parser, Debug)]
#[command(
    name = "phasebench",
    version,
    about = "Two-phase model with phase transitions: tables, equilibria, geometry checks and radial simulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct Common {
    /// Experiment file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory, created if missing.
    #[arg(long)]
    out: PathBuf,
    /// Reserved; nothing is random yet.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate ψ, η, ε, κ of both phases and the interface jumps.
    ThermoTable(Common),
    /// Solve for the equilibria at the prescribed energy.
    Equilibria(Common),
    /// Run the curvature and extension-map verification suite.
    GeometryCheck(Common),
    /// Run the radial simulator.
    Simulate(Common),
}

/// A failure with its exit code and reason slug.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub reason: String,
    pub message: String,
}

impl Failure {
    fn new(code: i32, reason: &str, message: impl Into<String>) -> Self {
        Self { code, reason: reason.to_string(), message: message.into() }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::new(e.exit_code(), e.slug(), e.to_string())
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::new(EXIT_IO, "io", format!("{}: {e}", path.display()))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| io_failure(path, e))
}

fn init_logging() {
    let level = match std::env::var("PHASEBENCH_LOG").ok().as_deref() {
        Some("quiet") => LevelFilter::Off,
        Some("info") => LevelFilter::Info,
        Some("debug") => LevelFilter::Debug,
        _ => LevelFilter::Warn,
    };
    let _ = env_logger::Builder::new()
        .filter_level(level)
        .target(env_logger::Target::Stderr)
        .format_timestamp(None)
        .try_init();
}

fn f(v: f64) -> String {
    format!("{v:.16e}")
}

/// Parse `args` (including the program name), run the subcommand and return
/// the process exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    init_logging();
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            if code != 0 {
                eprintln!("ERROR code={code} reason=usage");
            }
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(fail) => {
            eprintln!("error: {}", fail.message);
            eprintln!("ERROR code={} reason={}", fail.code, fail.reason);
            fail.code
        }
    }
}

fn dispatch(command: Command) -> Result<i32, Failure> {
    let (purpose, common) = match &command {
        Command::ThermoTable(c) => (Purpose::ThermoTable, c),
        Command::Equilibria(c) => (Purpose::Equilibria, c),
        Command::GeometryCheck(c) => (Purpose::GeometryCheck, c),
        Command::Simulate(c) => (Purpose::Simulate, c),
    };
    let cfg = parse_config(&common.config)?;
    for w in &cfg.warnings {
        eprintln!("warning: {w}");
    }
    eprint!("# effective configuration\n{}", cfg.to_text());
    cfg.require(purpose)?;
    if let Some(seed) = common.seed {
        info!("seed {seed} accepted; no stochastic component uses it");
    }
    fs::create_dir_all(&common.out).map_err(|e| io_failure(&common.out, e))?;
    let out = common.out.as_path();
    match purpose {
        Purpose::ThermoTable => thermo_table(&cfg, out),
        Purpose::Equilibria => equilibria(&cfg, out),
        Purpose::GeometryCheck => geometry_check(&cfg, out),
        Purpose::Simulate => simulate(&cfg, out),
    }
}

fn thermo_table(cfg: &RunConfig, out: &Path) -> Result<i32, Failure> {
    let medium = cfg.medium()?;
    let t = &cfg.table;
    let mut csv = format!("{THERMO_CSV_HEADER}\n");
    for theta in linspace(t.theta_lo, t.theta_hi, t.samples) {
        let numeric = |e: crate::thermo::ThermoError| Failure::new(EXIT_NUMERICAL, "thermo", e.to_string());
        let a = medium.phase1.eval(theta).map_err(numeric)?;
        let b = medium.phase2.eval(theta).map_err(numeric)?;
        let j = medium.eval_jumps(theta).map_err(numeric)?;
        let row = [theta, a.psi, b.psi, a.eta, b.eta, a.eps, b.eps, a.kappa, b.kappa, j.psi_jump, j.latent];
        csv.push_str(&row.map(f).join(","));
        csv.push('\n');
    }
    write_file(&out.join("thermo_table.csv"), &csv)?;
    info!("wrote {} rows to thermo_table.csv", t.samples);
    Ok(0)
}

fn equilibria(cfg: &RunConfig, out: &Path) -> Result<i32, Failure> {
    let problem = cfg.equilibrium_problem()?;
    let states = problem.solve();
    let mut csv = format!("{EQUILIBRIA_CSV_HEADER}\n");
    for s in &states {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{}",
            f(s.theta),
            f(s.radius),
            f(s.pressure_jump),
            f(s.phi_val),
            f(s.phi_prime),
            s.stable
        );
    }
    write_file(&out.join("equilibria.csv"), &csv)?;
    if states.is_empty() {
        warn!("no equilibrium in [{}, {}] for E0 = {}", problem.theta_min, problem.theta_max, problem.e0);
    }
    if problem.m == 2 {
        let radii = linspace(0.0, problem.r_star_max, OSTWALD_GRID);
        let rep = ostwald_scan(&problem, &radii).map_err(|e| Failure::new(EXIT_NUMERICAL, "ostwald", e.to_string()))?;
        let mut grid = format!("{OSTWALD_CSV_HEADER}\n");
        for (i, r1) in rep.radii.iter().enumerate() {
            for (j, r2) in rep.radii.iter().enumerate() {
                let opt = |v: Option<f64>| v.map(f).unwrap_or_default();
                let _ =
                    writeln!(grid, "{},{},{},{}", f(*r1), f(*r2), opt(rep.temperature[i][j]), opt(rep.entropy[i][j]));
            }
        }
        write_file(&out.join("ostwald_grid.csv"), &grid)?;
        let mut text = String::new();
        let _ = writeln!(text, "symmetric_R = {}", f(rep.symmetric_radius));
        let _ = writeln!(text, "symmetric_theta = {}", f(rep.symmetric_theta));
        let _ = writeln!(text, "symmetric_entropy = {}", f(rep.symmetric_entropy));
        let _ = writeln!(text, "gradient_R1 = {}", f(rep.gradient[0]));
        let _ = writeln!(text, "gradient_R2 = {}", f(rep.gradient[1]));
        let _ = writeln!(text, "gradient_norm = {}", f(rep.gradient_norm));
        let _ = writeln!(text, "gradient_tolerance = {}", f(rep.gradient_tolerance));
        let _ = writeln!(text, "critical = {}", rep.is_critical());
        let _ = writeln!(text, "best_direction = {} {}", f(rep.best_direction[0]), f(rep.best_direction[1]));
        let _ = writeln!(text, "max_gain = {}", f(rep.max_gain));
        let _ = writeln!(text, "not_local_max = {}", rep.not_local_max);
        write_file(&out.join("ostwald_report.txt"), &text)?;
    }
    info!("{} equilibria written to equilibria.csv", states.len());
    Ok(0)
}

fn geometry_check(cfg: &RunConfig, out: &Path) -> Result<i32, Failure> {
    let g = &cfg.geometry;
    let rows =
        run_checks(g.r_sigma, g.grid_n, g.a).map_err(|e| Failure::new(EXIT_NUMERICAL, "geometry", e.to_string()))?;
    let mut csv = format!("{CHECK_CSV_HEADER}\n");
    for r in &rows {
        csv.push_str(&r.csv_row());
        csv.push('\n');
    }
    write_file(&out.join("geometry_check.csv"), &csv)?;
    Ok(0)
}

fn simulate(cfg: &RunConfig, out: &Path) -> Result<i32, Failure> {
    let radial = cfg.radial_config()?;
    let numeric = |e: StefanError| Failure::new(EXIT_NUMERICAL, e.slug(), e.to_string());
    let outcome = match &cfg.sim.resume {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
            let (state, n) = read_checkpoint(&text).map_err(numeric)?;
            if n != radial.n {
                return Err(Failure::from(ConfigError::Invariant(format!(
                    "checkpoint was written for n = {n}, configuration has n = {}",
                    radial.n
                ))));
            }
            info!("resuming from {} at t = {}", path.display(), state.t);
            run_from(&radial, state)
        }
        None => run(&radial),
    }
    .map_err(numeric)?;

    let mut csv = format!("{CSV_HEADER}\n");
    for r in &outcome.records {
        csv.push_str(&r.csv_row());
        csv.push('\n');
    }
    write_file(&out.join("simulate.csv"), &csv)?;
    write_file(&out.join("report.txt"), &outcome.report.to_text())?;
    write_file(&out.join("checkpoint.txt"), &write_checkpoint(&outcome.state, radial.n))?;
    match &outcome.report.abort {
        Some(e) => Err(Failure::new(EXIT_GUARD_ABORT, e.slug(), e.to_string())),
        None => Ok(0),
    }
}
