//! Stop a run halfway, dump the state, resume it and compare with an
//! uninterrupted run.

use phasebench::stefan::{read_checkpoint, run, run_from, write_checkpoint, InitialProfile, RadialConfig, StefanError};
use phasebench::Medium;

pub fn run_example() -> Result<f64, StefanError> {
    let full = RadialConfig::new(Medium::reference(), 3, 3.0, 2.0, 32, 32, 0.01, 1.0)
        .with_init(InitialProfile::Bump { amplitude: 0.05 });
    let half = RadialConfig { t_end: 0.5, ..full.clone() };
    let first = run(&half)?;
    let dump = write_checkpoint(&first.state, full.n);
    let (state, _) = read_checkpoint(&dump)?;
    let resumed = run_from(&full, state)?;
    let straight = run(&full)?;
    Ok((resumed.state.r - straight.state.r).abs())
}

fn main() -> Result<(), StefanError> {
    println!("|R_resumed - R_straight| = {:.3e}", run_example()?);
    Ok(())
}
