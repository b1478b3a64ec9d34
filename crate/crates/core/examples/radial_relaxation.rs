//! A temperature bump around a ball of the reference medium relaxes to the
//! predicted stable equilibrium.

use phasebench::stefan::{run, InitialProfile, RadialConfig, RunReport, StefanError};
use phasebench::Medium;

pub fn run_example() -> Result<RunReport, StefanError> {
    let cfg = RadialConfig::new(Medium::reference(), 3, 3.0, 2.0, 64, 64, 0.02, 5.0)
        .with_init(InitialProfile::Bump { amplitude: 0.05 })
        .with_output_every(25);
    let out = run(&cfg)?;
    for r in &out.records {
        println!(
            "t = {:5.2}  R = {:.8}  theta_G = {:.8}  E = {:.10}  Phi = {:.10}",
            r.t, r.r, r.theta_gamma, r.energy, r.entropy
        );
    }
    Ok(out.report)
}

fn main() -> Result<(), StefanError> {
    let rep = run_example()?;
    println!("energy drift {:.3e}, smallest entropy step {:.3e}", rep.max_energy_drift, rep.min_entropy_increment);
    if let (Some(p), Some((dt, dr))) = (rep.predicted, rep.terminal_deviation()) {
        println!(
            "terminal R {:.6} vs predicted {:.6} (mean theta off by {:.2e}, R by {:.2e})",
            rep.terminal_r, p.radius, dt, dr
        );
    }
    Ok(())
}
