//! Thermodynamically consistent two-phase model with phase transitions for
//! equal densities, reduced to what can be computed and checked at desk
//! scale.
//!
//! * [`thermo`]: free-energy calculus of each phase and the interface jumps.
//! * [`equilibria`]: equilibrium temperature, radius and stability, plus the
//!   two-ball entropy landscape scan.
//! * [`geometry`]: height-function parameterization of an interface over a
//!   reference sphere (normals, curvature and its linearization, the
//!   extension map and its Jacobian).
//! * [`stefan`]: radially symmetric simulator with Gibbs–Thomson interface
//!   temperature and Stefan-law front motion, with energy and entropy
//!   diagnostics.
//! * [`config`] and [`cli`]: the `phasebench` executable.

// `!(x < limit)` is used on purpose so that NaN fails every guard
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod equilibria;
pub mod geometry;
pub mod roots;
pub mod stefan;
pub mod thermo;

pub use equilibria::{EquilibriumProblem, EquilibriumState};
pub use thermo::{Medium, PhaseMaterial};

/// Surface area `ω_n` of the unit sphere in `ℝⁿ`.
pub fn unit_sphere_area(n: usize) -> f64 {
    use std::f64::consts::PI;
    assert!(n >= 1, "dimension must be positive");
    // ω₁ = 2, ω₂ = 2π, ω_{n+2} = 2π ω_n / n
    let mut area = if n % 2 == 1 { 2.0 } else { 2.0 * PI };
    let mut k = if n % 2 == 1 { 1 } else { 2 };
    while k < n {
        area *= 2.0 * PI / k as f64;
        k += 2;
    }
    area
}

/// Volume `ω_n / n` of the unit ball in `ℝⁿ`.
pub fn unit_ball_volume(n: usize) -> f64 {
    unit_sphere_area(n) / n as f64
}

/// Volume of the ball of radius `r` in `ℝⁿ`.
pub fn ball_volume(n: usize, r: f64) -> f64 {
    unit_ball_volume(n) * r.powi(n as i32)
}
