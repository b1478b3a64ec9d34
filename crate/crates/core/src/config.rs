//! Experiment files for the `phasebench` executable.
//!
//! The format is line based:
//!
//! ```text
//! # comment
//! [medium]
//! c1 = 1.0      # trailing comments are allowed
//! ```
//!
//! Keys are case sensitive and must belong to the section they appear in;
//! unknown sections and keys are rejected. A repeated key keeps its last
//! value and produces a warning. Every key is optional in the file, but
//! some subcommands require particular keys (see [`RunConfig::require`]).

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::ball_volume;
use crate::equilibria::EquilibriumProblem;
use crate::geometry::SphereChart;
use crate::stefan::{FrontUpdate, InitialProfile, RadialConfig};
use crate::thermo::{Medium, PhaseMaterial};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {reason}")]
    MissingFile { path: PathBuf, reason: String },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: unknown key {key:?} in section [{section}]")]
    UnknownKey { line: usize, section: String, key: String },
    #[error("line {line}: unknown section [{section}]")]
    UnknownSection { line: usize, section: String },
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl ConfigError {
    pub fn exit_code(&self) -> i32 {
        match self {
            ConfigError::MissingFile { .. } => 2,
            ConfigError::Parse { .. } => 3,
            ConfigError::UnknownKey { .. } | ConfigError::UnknownSection { .. } => 4,
            ConfigError::Invariant(_) => 5,
        }
    }

    pub fn slug(&self) -> &'static str {
        match self {
            ConfigError::MissingFile { .. } => "missing-config",
            ConfigError::Parse { .. } => "config-parse",
            ConfigError::UnknownKey { .. } => "unknown-key",
            ConfigError::UnknownSection { .. } => "unknown-section",
            ConfigError::Invariant(_) => "invariant-violation",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Float,
    Int,
    Word,
    Path,
}

/// Every accepted `(section, key, kind)`.
const SCHEMA: &[(&str, &str, Kind)] = &[
    ("medium", "c1", Kind::Float),
    ("medium", "d1", Kind::Float),
    ("medium", "e1", Kind::Float),
    ("medium", "c2", Kind::Float),
    ("medium", "d2", Kind::Float),
    ("medium", "e2", Kind::Float),
    ("medium", "mu1", Kind::Float),
    ("medium", "mu2", Kind::Float),
    ("medium", "dcond1", Kind::Float),
    ("medium", "dcond2", Kind::Float),
    ("medium", "sigma", Kind::Float),
    ("domain", "n", Kind::Int),
    ("domain", "R_out", Kind::Float),
    ("domain", "omega_vol", Kind::Float),
    ("domain", "R_star", Kind::Float),
    ("domain", "m", Kind::Int),
    ("equilibria", "E0", Kind::Float),
    ("equilibria", "theta_min", Kind::Float),
    ("equilibria", "theta_max", Kind::Float),
    ("sim", "R0", Kind::Float),
    ("sim", "N1", Kind::Int),
    ("sim", "N2", Kind::Int),
    ("sim", "dt", Kind::Float),
    ("sim", "t_end", Kind::Float),
    ("sim", "delta_R", Kind::Float),
    ("sim", "l_min", Kind::Float),
    ("sim", "output_every", Kind::Int),
    ("sim", "init", Kind::Word),
    ("sim", "theta0", Kind::Float),
    ("sim", "theta_inner", Kind::Float),
    ("sim", "theta_outer", Kind::Float),
    ("sim", "bump", Kind::Float),
    ("sim", "front", Kind::Word),
    ("sim", "resume", Kind::Path),
    ("geometry", "R_sigma", Kind::Float),
    ("geometry", "a", Kind::Float),
    ("geometry", "grid_N", Kind::Int),
    ("table", "theta_lo", Kind::Float),
    ("table", "theta_hi", Kind::Float),
    ("table", "samples", Kind::Int),
];

#[derive(Debug, Clone, PartialEq)]
enum Value {
    Float(f64),
    Int(usize),
    Text(String),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Float(v) => write!(f, "{v:.16e}"),
            Value::Int(v) => write!(f, "{v}"),
            Value::Text(v) => f.write_str(v),
        }
    }
}

/// Material parameters of the two phases (constant transport coefficients).
#[derive(Debug, Clone, PartialEq)]
pub struct MediumSection {
    pub c1: f64,
    pub d1: f64,
    pub e1: f64,
    pub c2: f64,
    pub d2: f64,
    pub e2: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub dcond1: f64,
    pub dcond2: f64,
    pub sigma: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DomainSection {
    pub n: usize,
    pub r_out: f64,
    /// `|Ω|`; the volume of the ball of radius `R_out` unless given.
    pub omega_vol: f64,
    /// `R_m*`; `R_out` unless given.
    pub r_star: f64,
    pub m: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriaSection {
    pub e0: Option<f64>,
    pub theta_min: f64,
    pub theta_max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimSection {
    pub r0: Option<f64>,
    pub n1: usize,
    pub n2: usize,
    pub dt: Option<f64>,
    pub t_end: Option<f64>,
    /// `10⁻³ R_out` unless given.
    pub delta_r: f64,
    pub l_min: f64,
    pub output_every: usize,
    pub init: InitialProfile,
    pub front: FrontUpdate,
    pub resume: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeometrySection {
    pub r_sigma: f64,
    /// `R_sigma/2` unless given.
    pub a: f64,
    pub grid_n: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableSection {
    pub theta_lo: f64,
    pub theta_hi: f64,
    pub samples: usize,
}

/// A parsed and validated experiment file.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub medium: MediumSection,
    pub domain: DomainSection,
    pub equilibria: EquilibriaSection,
    pub sim: SimSection,
    pub geometry: GeometrySection,
    pub table: TableSection,
    /// Non-fatal diagnostics collected while parsing (repeated keys).
    pub warnings: Vec<String>,
}

/// Subcommands with their required keys.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Purpose {
    ThermoTable,
    Equilibria,
    GeometryCheck,
    Simulate,
}

pub fn parse_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError::MissingFile { path: path.to_path_buf(), reason: e.to_string() })?;
    let mut cfg = parse_config_str(&text)?;
    if let Some(resume) = cfg.sim.resume.as_mut() {
        if resume.is_relative() {
            if let Some(dir) = path.parent() {
                *resume = dir.join(&*resume);
            }
        }
    }
    Ok(cfg)
}

pub fn parse_config_str(text: &str) -> Result<RunConfig, ConfigError> {
    let mut values: BTreeMap<(&'static str, &'static str), Value> = BTreeMap::new();
    let mut warnings = Vec::new();
    let mut section: Option<&'static str> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| ConfigError::Parse {
                    line: line_no,
                    message: format!("malformed section header {line:?}"),
                })?
                .trim();
            section = Some(
                SCHEMA
                    .iter()
                    .map(|(s, _, _)| *s)
                    .find(|s| *s == name)
                    .ok_or_else(|| ConfigError::UnknownSection { line: line_no, section: name.to_string() })?,
            );
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Parse {
            line: line_no,
            message: format!("expected `key = value`, got {line:?}"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        let sec = section.ok_or_else(|| ConfigError::Parse {
            line: line_no,
            message: format!("key {key:?} appears before any section header"),
        })?;
        let &(s, k, kind) = SCHEMA
            .iter()
            .find(|(s, k, _)| *s == sec && *k == key)
            .ok_or_else(|| ConfigError::UnknownKey { line: line_no, section: sec.to_string(), key: key.to_string() })?;
        if value.is_empty() {
            return Err(ConfigError::Parse { line: line_no, message: format!("missing value for {key:?}") });
        }
        let parsed = match kind {
            Kind::Float => {
                let v: f64 = value.parse().map_err(|_| ConfigError::Parse {
                    line: line_no,
                    message: format!("{key}: expected a number, got {value:?}"),
                })?;
                if !v.is_finite() {
                    return Err(ConfigError::Invariant(format!("{key} must be finite, got {value}")));
                }
                Value::Float(v)
            }
            Kind::Int => Value::Int(value.parse().map_err(|_| ConfigError::Parse {
                line: line_no,
                message: format!("{key}: expected a non-negative integer, got {value:?}"),
            })?),
            Kind::Word | Kind::Path => Value::Text(value.trim_matches('"').to_string()),
        };
        if values.insert((s, k), parsed).is_some() {
            warnings.push(format!("line {line_no}: duplicate key {key:?} in [{sec}], last value wins"));
        }
    }
    build(&values, warnings)
}

fn build(
    values: &BTreeMap<(&'static str, &'static str), Value>,
    warnings: Vec<String>,
) -> Result<RunConfig, ConfigError> {
    let float = |s: &str, k: &str| -> Option<f64> {
        values.iter().find(|((a, b), _)| *a == s && *b == k).and_then(|(_, v)| match v {
            Value::Float(x) => Some(*x),
            _ => None,
        })
    };
    let int = |s: &str, k: &str| -> Option<usize> {
        values.iter().find(|((a, b), _)| *a == s && *b == k).and_then(|(_, v)| match v {
            Value::Int(x) => Some(*x),
            _ => None,
        })
    };
    let text = |s: &str, k: &str| -> Option<String> {
        values.iter().find(|((a, b), _)| *a == s && *b == k).and_then(|(_, v)| match v {
            Value::Text(x) => Some(x.clone()),
            _ => None,
        })
    };

    let medium = MediumSection {
        c1: float("medium", "c1").unwrap_or(1.0),
        d1: float("medium", "d1").unwrap_or(0.0),
        e1: float("medium", "e1").unwrap_or(1.0),
        c2: float("medium", "c2").unwrap_or(1.0),
        d2: float("medium", "d2").unwrap_or(1.0),
        e2: float("medium", "e2").unwrap_or(0.0),
        mu1: float("medium", "mu1").unwrap_or(1.0),
        mu2: float("medium", "mu2").unwrap_or(1.0),
        dcond1: float("medium", "dcond1").unwrap_or(1.0),
        dcond2: float("medium", "dcond2").unwrap_or(1.0),
        sigma: float("medium", "sigma").unwrap_or(1.0),
    };

    let n = int("domain", "n").unwrap_or(3);
    if n < 2 {
        return Err(ConfigError::Invariant(format!("n must be at least 2, got {n}")));
    }
    let r_out = float("domain", "R_out").unwrap_or(3.0);
    let domain = DomainSection {
        n,
        r_out,
        omega_vol: float("domain", "omega_vol").unwrap_or_else(|| ball_volume(n, r_out)),
        r_star: float("domain", "R_star").unwrap_or(r_out),
        m: int("domain", "m").unwrap_or(1),
    };

    let equilibria = EquilibriaSection {
        e0: float("equilibria", "E0"),
        theta_min: float("equilibria", "theta_min").unwrap_or(EquilibriumProblem::DEFAULT_THETA_MIN),
        theta_max: float("equilibria", "theta_max").unwrap_or(EquilibriumProblem::DEFAULT_THETA_MAX),
    };

    let init_name = text("sim", "init").unwrap_or_else(|| "equilibrium".into());
    let need = |k: &str| {
        float("sim", k).ok_or_else(|| ConfigError::Invariant(format!("init = {init_name} requires [sim] {k}")))
    };
    let init = match init_name.as_str() {
        "equilibrium" => InitialProfile::Equilibrium,
        "uniform" => InitialProfile::Uniform(need("theta0")?),
        "two-phase" => InitialProfile::TwoPhase { inner: need("theta_inner")?, outer: need("theta_outer")? },
        "bump" => InitialProfile::Bump { amplitude: float("sim", "bump").unwrap_or(0.05) },
        other => {
            return Err(ConfigError::Invariant(format!(
                "init must be one of equilibrium, uniform, two-phase, bump; got {other:?}"
            )))
        }
    };
    let front = match text("sim", "front").as_deref() {
        None | Some("implicit") => FrontUpdate::Implicit,
        Some("explicit") => FrontUpdate::Explicit,
        Some(other) => {
            return Err(ConfigError::Invariant(format!("front must be implicit or explicit, got {other:?}")))
        }
    };
    let sim = SimSection {
        r0: float("sim", "R0"),
        n1: int("sim", "N1").unwrap_or(256),
        n2: int("sim", "N2").unwrap_or(256),
        dt: float("sim", "dt"),
        t_end: float("sim", "t_end"),
        delta_r: float("sim", "delta_R").unwrap_or(1e-3 * r_out),
        l_min: float("sim", "l_min").unwrap_or(RadialConfig::DEFAULT_L_MIN),
        output_every: int("sim", "output_every").unwrap_or(1),
        init,
        front,
        resume: text("sim", "resume").map(PathBuf::from),
    };

    let r_sigma = float("geometry", "R_sigma").unwrap_or(1.0);
    let geometry = GeometrySection {
        r_sigma,
        a: float("geometry", "a").unwrap_or(0.5 * r_sigma),
        grid_n: int("geometry", "grid_N").unwrap_or(256),
    };
    let table = TableSection {
        theta_lo: float("table", "theta_lo").unwrap_or(0.5),
        theta_hi: float("table", "theta_hi").unwrap_or(4.0),
        samples: int("table", "samples").unwrap_or(8),
    };

    let cfg = RunConfig { medium, domain, equilibria, sim, geometry, table, warnings };
    cfg.medium()?;
    Ok(cfg)
}

impl RunConfig {
    pub fn medium(&self) -> Result<Medium, ConfigError> {
        let m = &self.medium;
        let inv = |e: crate::thermo::ThermoError| ConfigError::Invariant(e.to_string());
        let p1 = PhaseMaterial::log_linear(m.c1, m.d1, m.e1, m.mu1, m.dcond1).map_err(inv)?;
        let p2 = PhaseMaterial::log_linear(m.c2, m.d2, m.e2, m.mu2, m.dcond2).map_err(inv)?;
        Medium::new(p1, p2, m.sigma).map_err(inv)
    }

    /// Check that every key the subcommand needs is present and build its
    /// typed inputs once to surface invariant violations early.
    pub fn require(&self, purpose: Purpose) -> Result<(), ConfigError> {
        match purpose {
            Purpose::ThermoTable => {
                let t = &self.table;
                if !(t.theta_lo > 0.0 && t.theta_hi > t.theta_lo && t.samples >= 2) {
                    return Err(ConfigError::Invariant(format!(
                        "need 0 < theta_lo < theta_hi and samples >= 2, got [{}, {}] with {} samples",
                        t.theta_lo, t.theta_hi, t.samples
                    )));
                }
            }
            Purpose::Equilibria => {
                self.equilibrium_problem()?;
            }
            Purpose::GeometryCheck => {
                self.chart()?;
            }
            Purpose::Simulate => {
                self.radial_config()?;
            }
        }
        Ok(())
    }

    pub fn equilibrium_problem(&self) -> Result<EquilibriumProblem, ConfigError> {
        let e0 = self.equilibria.e0.ok_or_else(|| ConfigError::Invariant("[equilibria] E0 is required".into()))?;
        let d = &self.domain;
        let inv = |e: crate::equilibria::EquilibriumError| ConfigError::Invariant(e.to_string());
        EquilibriumProblem::new(self.medium()?, d.n, d.omega_vol, d.m, d.r_star, e0)
            .and_then(|p| p.with_theta_range(self.equilibria.theta_min, self.equilibria.theta_max))
            .map_err(inv)
    }

    pub fn chart(&self) -> Result<SphereChart, ConfigError> {
        let g = &self.geometry;
        SphereChart::new(2, g.r_sigma, g.grid_n, g.a).map_err(|e| ConfigError::Invariant(e.to_string()))
    }

    pub fn radial_config(&self) -> Result<RadialConfig, ConfigError> {
        let s = &self.sim;
        let req = |v: Option<f64>, k: &str| v.ok_or_else(|| ConfigError::Invariant(format!("[sim] {k} is required")));
        let mut cfg = RadialConfig::new(
            self.medium()?,
            self.domain.n,
            self.domain.r_out,
            req(s.r0, "R0")?,
            s.n1,
            s.n2,
            req(s.dt, "dt")?,
            req(s.t_end, "t_end")?,
        )
        .with_init(s.init.clone())
        .with_guards(s.delta_r, s.l_min)
        .with_output_every(s.output_every)
        .with_front(s.front);
        cfg.theta_max = self.equilibria.theta_max;
        cfg.validate().map_err(|e| ConfigError::Invariant(e.to_string()))?;
        Ok(cfg)
    }

    /// The effective configuration, every key with its value.
    pub fn to_text(&self) -> String {
        let f = |v: f64| Value::Float(v).to_string();
        let opt = |v: Option<f64>| v.map(f).unwrap_or_else(|| "unset".into());
        let m = &self.medium;
        let d = &self.domain;
        let e = &self.equilibria;
        let s = &self.sim;
        let g = &self.geometry;
        let t = &self.table;
        let init = match s.init {
            InitialProfile::Equilibrium => "equilibrium".to_string(),
            InitialProfile::Uniform(v) => format!("uniform\ntheta0 = {}", f(v)),
            InitialProfile::TwoPhase { inner, outer } => {
                format!("two-phase\ntheta_inner = {}\ntheta_outer = {}", f(inner), f(outer))
            }
            InitialProfile::Bump { amplitude } => format!("bump\nbump = {}", f(amplitude)),
        };
        let front = match s.front {
            FrontUpdate::Implicit => "implicit",
            FrontUpdate::Explicit => "explicit",
        };
        let resume = s.resume.as_ref().map(|p| p.display().to_string()).unwrap_or_else(|| "unset".into());
        format!(
            "[medium]\nc1 = {}\nd1 = {}\ne1 = {}\nc2 = {}\nd2 = {}\ne2 = {}\nmu1 = {}\nmu2 = {}\ndcond1 = {}\ndcond2 = {}\nsigma = {}\n\
             [domain]\nn = {}\nR_out = {}\nomega_vol = {}\nR_star = {}\nm = {}\n\
             [equilibria]\nE0 = {}\ntheta_min = {}\ntheta_max = {}\n\
             [sim]\nR0 = {}\nN1 = {}\nN2 = {}\ndt = {}\nt_end = {}\ndelta_R = {}\nl_min = {}\noutput_every = {}\ninit = {}\nfront = {}\nresume = {}\n\
             [geometry]\nR_sigma = {}\na = {}\ngrid_N = {}\n\
             [table]\ntheta_lo = {}\ntheta_hi = {}\nsamples = {}\n",
            f(m.c1), f(m.d1), f(m.e1), f(m.c2), f(m.d2), f(m.e2), f(m.mu1), f(m.mu2), f(m.dcond1), f(m.dcond2), f(m.sigma),
            d.n, f(d.r_out), f(d.omega_vol), f(d.r_star), d.m,
            opt(e.e0), f(e.theta_min), f(e.theta_max),
            opt(s.r0), s.n1, s.n2, opt(s.dt), opt(s.t_end), f(s.delta_r), f(s.l_min), s.output_every, init, front, resume,
            f(g.r_sigma), f(g.a), g.grid_n,
            f(t.theta_lo), f(t.theta_hi), t.samples,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn minimal_file_gets_defaults() {
        let cfg = parse_config_str("[medium]\nsigma = 1\n[equilibria]\nE0 = 309.86\n").unwrap();
        assert_eq!(cfg.domain.n, 3);
        assert!((cfg.domain.omega_vol - 36.0 * PI).abs() < 1e-12);
        assert_eq!(cfg.domain.r_star, 3.0);
        assert_eq!(cfg.sim.n1, 256);
        assert_eq!(cfg.geometry.a, 0.5);
        assert!(cfg.require(Purpose::Equilibria).is_ok());
        assert!(cfg.require(Purpose::Simulate).is_err());
    }

    #[test]
    fn error_kinds_and_codes() {
        let e = parse_config_str("[medium]\nsigma = -1\n").unwrap_err();
        assert_eq!(e.exit_code(), 5);
        assert!(e.to_string().contains("sigma"));
        let e = parse_config_str("[medium]\nsigma 1\n").unwrap_err();
        assert_eq!(e, ConfigError::Parse { line: 2, message: "expected `key = value`, got \"sigma 1\"".into() });
        assert_eq!(parse_config_str("[medium]\nfoo = 1\n").unwrap_err().exit_code(), 4);
        assert_eq!(parse_config_str("[nope]\n").unwrap_err().exit_code(), 4);
        assert_eq!(parse_config_str("sigma = 1\n").unwrap_err().exit_code(), 3);
        assert_eq!(parse_config_str("[medium]\nsigma = abc\n").unwrap_err().exit_code(), 3);
        assert_eq!(parse_config_str("[medium]\nsigma = inf\n").unwrap_err().exit_code(), 5);
        let missing = parse_config(Path::new("/nonexistent/phasebench.cfg")).unwrap_err();
        assert_eq!(missing.exit_code(), 2);
    }

    #[test]
    fn duplicate_key_last_wins_with_warning() {
        let cfg = parse_config_str("[medium]\nsigma = 2\nsigma = 3 # again\n").unwrap();
        assert_eq!(cfg.medium.sigma, 3.0);
        assert_eq!(cfg.warnings.len(), 1);
        assert!(cfg.warnings[0].contains("line 3"));
    }

    #[test]
    fn effective_config_round_trips() {
        let src =
            "[sim]\nR0 = 2\ndt = 0.01\nt_end = 1\ninit = uniform\ntheta0 = 2.05\nfront = explicit\n[domain]\nm = 2\n";
        let cfg = parse_config_str(src).unwrap();
        let echoed = cfg.to_text().replace("E0 = unset\n", "").replace("resume = unset\n", "");
        let again = parse_config_str(&echoed).unwrap();
        assert_eq!(again, cfg);
        assert!(cfg.radial_config().is_ok());
    }
}
