//! Three runs that end on a guard: a ball that melts away, a ball that grows
//! into the container and a medium whose latent heat vanishes.

use phasebench::stefan::{run, InitialProfile, RadialConfig, StefanError};
use phasebench::{Medium, PhaseMaterial};

fn reference(r0: f64, theta0: f64) -> RadialConfig {
    RadialConfig::new(Medium::reference(), 3, 3.0, r0, 32, 32, 0.01, 5.0)
        .with_init(InitialProfile::Uniform(theta0))
        .with_guards(3e-3, 1e-6)
}

pub fn run_example() -> Result<Vec<(&'static str, String, usize)>, StefanError> {
    // [[ψ]] = 1 − θ: latent heat θ crosses zero at the temperature floor
    let inverted = Medium::new(
        PhaseMaterial::log_linear(1.0, 1.0, 0.0, 1.0, 1.0).unwrap(),
        PhaseMaterial::log_linear(1.0, 0.0, 1.0, 1.0, 1.0).unwrap(),
        1.0,
    )
    .unwrap();
    let degenerate = RadialConfig::new(inverted, 3, 3.0, 2.5, 32, 32, 0.01, 5.0)
        .with_init(InitialProfile::Uniform(0.3))
        .with_guards(3e-3, 0.05);
    let cases = [("melting", reference(0.5, 4.9)), ("growing", reference(0.5, 5.1)), ("degenerate", degenerate)];
    let mut out = Vec::new();
    for (name, cfg) in cases {
        let res = run(&cfg)?;
        let reason = res.report.abort.as_ref().map(|e| e.slug().to_string()).unwrap_or_else(|| "none".into());
        out.push((name, reason, res.records.len()));
    }
    Ok(out)
}

fn main() -> Result<(), StefanError> {
    for (name, reason, rows) in run_example()? {
        println!("{name:>10}: aborted with {reason} after {rows} diagnostic rows");
    }
    Ok(())
}
