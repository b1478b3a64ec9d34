use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const EXE: &str = env!("CARGO_BIN_EXE_phasebench");

fn phasebench(args: &[&str], dir: &Path) -> Output {
    Command::new(EXE).args(args).current_dir(dir).env("PHASEBENCH_LOG", "quiet").output().unwrap()
}

fn run_with(sub: &str, cfg: &str) -> (TempDir, Output) {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("run.cfg"), cfg).unwrap();
    let out = phasebench(&[sub, "--config", "run.cfg", "--out", "out"], dir.path());
    (dir, out)
}

fn last_stderr_line(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).lines().last().unwrap_or("").to_string()
}

fn read(dir: &TempDir, name: &str) -> String {
    fs::read_to_string(dir.path().join("out").join(name)).unwrap()
}

#[test]
fn thermo_table_has_eight_rows() {
    let (dir, out) = run_with("thermo-table", "[table]\ntheta_lo = 0.5\ntheta_hi = 4\nsamples = 8\n");
    assert_eq!(out.status.code(), Some(0));
    let csv = read(&dir, "thermo_table.csv");
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "theta,psi1,psi2,eta1,eta2,eps1,eps2,kappa1,kappa2,psi_jump,latent");
    assert_eq!(lines.len(), 9);
    assert!(lines[1].starts_with("5.0000000000000000e-1,"));
}

#[test]
fn equilibria_reports_the_stable_root() {
    let (dir, out) = run_with("equilibria", "[equilibria]\nE0 = 309.9704751541929\n");
    assert_eq!(out.status.code(), Some(0));
    let csv = read(&dir, "equilibria.csv");
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("theta,radius,pressure_jump,phi,phi_prime,stable"));
    let stable: Vec<&str> = lines.filter(|l| l.ends_with(",true")).collect();
    assert_eq!(stable.len(), 1);
    let theta: f64 = stable[0].split(',').next().unwrap().parse().unwrap();
    assert!((theta - 2.0).abs() < 1e-9);
}

#[test]
fn equilibria_with_two_balls_writes_the_scan() {
    let (dir, out) = run_with("equilibria", "[domain]\nm = 2\nR_star = 1.5\n[equilibria]\nE0 = 372.8023282259888\n");
    assert_eq!(out.status.code(), Some(0));
    let rep = read(&dir, "ostwald_report.txt");
    assert!(rep.contains("critical = true"));
    assert!(rep.contains("not_local_max = true"));
    assert_eq!(read(&dir, "ostwald_grid.csv").lines().count(), 1 + 31 * 31);
}

#[test]
fn geometry_check_orders() {
    let (dir, out) = run_with("geometry-check", "[geometry]\ngrid_N = 128\n");
    assert_eq!(out.status.code(), Some(0));
    let csv = read(&dir, "geometry_check.csv");
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("test,grid_N,sup_error,observed_order"));
    let orders: Vec<f64> =
        lines.filter_map(|l| l.rsplit(',').next().filter(|s| !s.is_empty()).map(|s| s.parse().unwrap())).collect();
    assert_eq!(orders.len(), 6);
    assert!(orders.iter().all(|&p| p >= 1.9));
}

#[test]
fn simulate_writes_csv_report_and_checkpoint_and_resumes() {
    let cfg = "[sim]\nR0 = 2\nN1 = 24\nN2 = 24\ndt = 0.05\nt_end = 1\ninit = bump\noutput_every = 4\n";
    let (dir, out) = run_with("simulate", cfg);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = read(&dir, "simulate.csv");
    assert_eq!(csv.lines().next(), Some("t,R,theta_gamma,j,V,E,Phi,production"));
    assert_eq!(csv.lines().count(), 1 + 1 + 5);
    assert!(read(&dir, "report.txt").contains("status = completed"));
    assert!(read(&dir, "checkpoint.txt").starts_with("phasebench-checkpoint v1\n"));

    let resume = format!("{cfg}t_end = 2\nresume = out/checkpoint.txt\n");
    fs::write(dir.path().join("resume.cfg"), resume).unwrap();
    let again = phasebench(&["simulate", "--config", "resume.cfg", "--out", "second"], dir.path());
    assert_eq!(again.status.code(), Some(0), "{}", String::from_utf8_lossy(&again.stderr));
    let csv2 = fs::read_to_string(dir.path().join("second/simulate.csv")).unwrap();
    let first_t: f64 = csv2.lines().nth(1).unwrap().split(',').next().unwrap().parse().unwrap();
    assert!((first_t - 1.0).abs() < 1e-9);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let cfg = "[sim]\nR0 = 2\nN1 = 16\nN2 = 16\ndt = 0.05\nt_end = 0.5\ninit = bump\n";
    let (a, _) = run_with("simulate", cfg);
    let (b, _) = run_with("simulate", cfg);
    for f in ["simulate.csv", "report.txt", "checkpoint.txt"] {
        assert_eq!(read(&a, f), read(&b, f));
    }
}

#[test]
fn guarded_abort_exits_one_with_partial_outputs() {
    let cfg = "[sim]\nR0 = 0.5\nN1 = 32\nN2 = 32\ndt = 0.01\nt_end = 5\ninit = uniform\ntheta0 = 4.9\ndelta_R = 3e-3\n";
    let (dir, out) = run_with("simulate", cfg);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(last_stderr_line(&out), "ERROR code=1 reason=ball-condition");
    assert!(read(&dir, "simulate.csv").lines().count() > 100);
    assert!(read(&dir, "report.txt").contains("abort_reason = ball-condition"));
}

#[test]
fn config_errors_have_distinct_codes() {
    let dir = TempDir::new().unwrap();
    let missing = phasebench(&["equilibria", "--config", "nope.cfg", "--out", "o"], dir.path());
    assert_eq!(missing.status.code(), Some(2));
    assert_eq!(last_stderr_line(&missing), "ERROR code=2 reason=missing-config");

    let cases = [
        ("[medium]\nsigma 1\n", 3, "config-parse"),
        ("[medium]\nsigmaa = 1\n", 4, "unknown-key"),
        ("[media]\n", 4, "unknown-section"),
        ("[medium]\nsigma = -1\n[equilibria]\nE0 = 1\n", 5, "invariant-violation"),
        ("[medium]\nsigma = 1\n", 5, "invariant-violation"),
    ];
    for (cfg, code, reason) in cases {
        let (_d, out) = run_with("equilibria", cfg);
        assert_eq!(out.status.code(), Some(code), "{cfg}");
        assert_eq!(last_stderr_line(&out), format!("ERROR code={code} reason={reason}"));
    }
    let (_d, out) = run_with("equilibria", "[medium]\nsigma = -1\n");
    assert!(String::from_utf8_lossy(&out.stderr).contains("sigma"));
}

#[test]
fn duplicate_key_warns_and_echoes() {
    let (_d, out) = run_with("thermo-table", "[medium]\nsigma = 2\nsigma = 3\n");
    assert_eq!(out.status.code(), Some(0));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("duplicate key \"sigma\""));
    assert!(err.contains("sigma = 3.0000000000000000e0"));
}

#[test]
fn usage_errors_exit_64() {
    let dir = TempDir::new().unwrap();
    let out = phasebench(&["melt", "--config", "a", "--out", "b"], dir.path());
    assert_eq!(out.status.code(), Some(64));
    assert_eq!(last_stderr_line(&out), "ERROR code=64 reason=usage");
    let out = phasebench(&["simulate"], dir.path());
    assert_eq!(out.status.code(), Some(64));
    let help = phasebench(&["--help"], dir.path());
    assert_eq!(help.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&help.stdout).contains("geometry-check"));
    let seeded = phasebench(&["thermo-table", "--config", "x", "--out", "y", "--seed", "7"], dir.path());
    assert_eq!(seeded.status.code(), Some(2));
}
