//! The extension map of a wavy circle and the identity
//! `(I − M₁ᵀ)(I + Dξ) = I` across the tube.

use phasebench::geometry::{hanzawa_map, jacobian_m1, GeometryError, SphereChart};

pub fn run_example() -> Result<f64, GeometryError> {
    let chart = SphereChart::new(2, 1.0, 128, 0.5)?;
    let amp = 0.5 * chart.height_limit();
    let h = chart.height_from_fn(|p| amp * (3.0 * p).cos())?;
    let mut worst: f64 = 0.0;
    for k in 0..12 {
        let phi = k as f64 * 0.5;
        for rho in [0.8, 1.0, 1.2] {
            let x = [rho * phi.cos(), rho * phi.sin()];
            let y = hanzawa_map(&chart, &h, &x)?;
            let j = jacobian_m1(&chart, &h, &x)?;
            if k == 0 {
                println!("x = ({:.3}, {:.3}) -> ({:.6}, {:.6}), cond {:.4}", x[0], x[1], y[0], y[1], j.condition);
            }
            worst = worst.max(j.identity_residual());
        }
    }
    Ok(worst)
}

fn main() -> Result<(), GeometryError> {
    let worst = run_example()?;
    println!("largest identity residual {worst:.3e}");
    Ok(())
}
