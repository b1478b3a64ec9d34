//! Thermodynamic potentials of the reference medium and the interface jumps.

use phasebench::roots::linspace;
use phasebench::thermo::ThermoError;
use phasebench::Medium;

pub fn run_example() -> Result<Vec<[f64; 5]>, ThermoError> {
    let medium = Medium::reference();
    let mut rows = Vec::new();
    for theta in linspace(0.5, 4.0, 8) {
        let jumps = medium.eval_jumps(theta)?;
        let one = medium.phase1.eval(theta)?;
        // ε = ψ + θη must hold exactly up to rounding
        assert!((one.eps - (one.psi + theta * one.eta)).abs() < 1e-12 * one.eps.abs().max(1.0));
        rows.push([theta, jumps.psi_jump, jumps.eta_jump, jumps.eps_jump, jumps.latent]);
    }
    Ok(rows)
}

fn main() -> Result<(), ThermoError> {
    println!("{:>8} {:>12} {:>12} {:>12} {:>12}", "theta", "[[psi]]", "[[eta]]", "[[eps]]", "latent");
    for [t, psi, eta, eps, l] in run_example()? {
        println!("{t:8.4} {psi:12.6} {eta:12.6} {eps:12.6} {l:12.6}");
    }
    Ok(())
}
