//! Equilibria of one ball in the ball of radius 3 at the energy of the state
//! `θ = 2, R = 2`.

use std::f64::consts::PI;

use phasebench::equilibria::EquilibriumError;
use phasebench::{ball_volume, EquilibriumProblem, EquilibriumState, Medium};

pub fn run_example() -> Result<Vec<EquilibriumState>, EquilibriumError> {
    let problem = EquilibriumProblem::new(Medium::reference(), 3, ball_volume(3, 3.0), 1, 3.0, 296.0 * PI / 3.0)?;
    Ok(problem.solve())
}

fn main() -> Result<(), EquilibriumError> {
    for s in run_example()? {
        println!(
            "theta = {:.12}  R = {:.12}  [[pi]] = {:.12}  phi' = {:.6}  {}",
            s.theta,
            s.radius,
            s.pressure_jump,
            s.phi_prime,
            if s.stable { "stable" } else { "unstable" }
        );
    }
    Ok(())
}
