//! Curvature of height fields over a circle against the polar-curve oracle.

use phasebench::geometry::checks::{ellipse, oracle_error, shifted_circle, LADDER};
use phasebench::geometry::GeometryError;

pub fn run_example() -> Result<Vec<(usize, f64, f64)>, GeometryError> {
    let circle = shifted_circle(0.1);
    let oval = ellipse(1.0, 1.2);
    LADDER.iter().map(|&n| Ok((n, oracle_error(1.0, n, &circle)?, oracle_error(1.1, n, &oval)?))).collect()
}

fn main() -> Result<(), GeometryError> {
    let rows = run_example()?;
    println!("{:>6} {:>14} {:>8} {:>14} {:>8}", "N", "shifted", "order", "ellipse", "order");
    for (k, &(n, c, e)) in rows.iter().enumerate() {
        let order = |now: f64, pick: fn(&(usize, f64, f64)) -> f64| {
            k.checked_sub(1).map(|p| (pick(&rows[p]) / now).log2()).unwrap_or(f64::NAN)
        };
        println!("{n:6} {c:14.6e} {:8.3} {e:14.6e} {:8.3}", order(c, |r| r.1), order(e, |r| r.2));
    }
    Ok(())
}
