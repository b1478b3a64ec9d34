//! Two equal balls: the symmetric configuration is a critical point of the
//! entropy that some radius exchange improves on.

use std::f64::consts::PI;

use phasebench::equilibria::{ostwald_scan, EquilibriumError, OstwaldReport};
use phasebench::roots::linspace;
use phasebench::{ball_volume, EquilibriumProblem, Medium};

pub fn run_example() -> Result<OstwaldReport, EquilibriumError> {
    let problem = EquilibriumProblem::new(Medium::reference(), 3, ball_volume(3, 3.0), 2, 1.5, 356.0 * PI / 3.0)?;
    ostwald_scan(&problem, &linspace(0.0, 1.5, 31))
}

fn main() -> Result<(), EquilibriumError> {
    let rep = run_example()?;
    println!("symmetric point R = {:.9}, theta = {:.9}", rep.symmetric_radius, rep.symmetric_theta);
    println!("gradient norm {:.3e} (tolerance {:.3e})", rep.gradient_norm, rep.gradient_tolerance);
    println!(
        "best direction ({:.4}, {:.4}) gains {:.3e}; local max: {}",
        rep.best_direction[0], rep.best_direction[1], rep.max_gain, !rep.not_local_max
    );
    if let Some((r1, r2, s)) = rep.grid_max {
        println!("grid maximum {s:.6} at ({r1:.3}, {r2:.3})");
    }
    Ok(())
}
