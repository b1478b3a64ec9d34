//! Plain-text state dump.
//!
//! ```text
//! phasebench-checkpoint v1
//! n = 3
//! t = <float>
//! R = <float>
//! theta_gamma = <float>
//! N1 = <int>
//! N2 = <int>
//! theta1 = <N1 floats separated by spaces>
//! theta2 = <N2 floats separated by spaces>
//! ```
//!
//! Floats are written with 17 significant digits so a dump round-trips
//! exactly.

use std::collections::HashMap;

use super::{RadialState, StefanError};

pub const CHECKPOINT_TAG: &str = "phasebench-checkpoint v1";

pub fn write_checkpoint(state: &RadialState, n: usize) -> String {
    let join = |v: &[f64]| v.iter().map(|x| format!("{x:.16e}")).collect::<Vec<_>>().join(" ");
    format!(
        "{CHECKPOINT_TAG}\nn = {n}\nt = {:.16e}\nR = {:.16e}\ntheta_gamma = {:.16e}\nN1 = {}\nN2 = {}\ntheta1 = {}\ntheta2 = {}\n",
        state.t,
        state.r,
        state.theta_gamma,
        state.theta1.len(),
        state.theta2.len(),
        join(&state.theta1),
        join(&state.theta2)
    )
}

/// Parse a dump; returns the state and the dimension it was written for.
pub fn read_checkpoint(text: &str) -> Result<(RadialState, usize), StefanError> {
    let err = |m: String| StefanError::Checkpoint(m);
    let mut lines = text.lines();
    match lines.next().map(str::trim) {
        Some(CHECKPOINT_TAG) => {}
        Some(other) => return Err(err(format!("unsupported header {other:?}"))),
        None => return Err(err("empty checkpoint".into())),
    }
    let mut fields: HashMap<&str, &str> = HashMap::new();
    for (i, line) in lines.enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| err(format!("line {}: expected key = value", i + 2)))?;
        fields.insert(k.trim(), v.trim());
    }
    let get = |k: &str| fields.get(k).copied().ok_or_else(|| err(format!("missing field {k}")));
    let float =
        |k: &str| -> Result<f64, StefanError> { get(k)?.parse::<f64>().map_err(|e| err(format!("field {k}: {e}"))) };
    let int = |k: &str| -> Result<usize, StefanError> {
        get(k)?.parse::<usize>().map_err(|e| err(format!("field {k}: {e}")))
    };
    let vector = |k: &str, len: usize| -> Result<Vec<f64>, StefanError> {
        let v: Vec<f64> = get(k)?
            .split_whitespace()
            .map(|s| s.parse::<f64>().map_err(|e| err(format!("field {k}: {e}"))))
            .collect::<Result<_, _>>()?;
        if v.len() != len {
            return Err(err(format!("field {k} has {} values, expected {len}", v.len())));
        }
        Ok(v)
    };
    let n = int("n")?;
    let (n1, n2) = (int("N1")?, int("N2")?);
    let state = RadialState {
        t: float("t")?,
        r: float("R")?,
        theta_gamma: float("theta_gamma")?,
        theta1: vector("theta1", n1)?,
        theta2: vector("theta2", n2)?,
    };
    if let Some(&v) = state.theta1.iter().chain(&state.theta2).find(|v| !(**v > 0.0)) {
        return Err(err(format!("non-positive temperature {v}")));
    }
    Ok((state, n))
}
