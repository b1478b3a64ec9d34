//! Entropy landscape of two-ball configurations under the energy constraint.
//!
//! For radii `(R₁, R₂)` the temperature is taken uniform and fixed by
//!
//! ```text
//! |Ω| ε₂(θ) − V₁ [[ε(θ)]] + σ ω_n (R₁^{n−1} + R₂^{n−1}) = E₀,   V₁ = (ω_n/n)(R₁ⁿ + R₂ⁿ)
//! ```
//!
//! and the total entropy is `Φ = |Ω| η₂(θ) − V₁ [[η(θ)]]`. The symmetric
//! equilibrium `R₁ = R₂ = R*` is a critical point of `Φ` on this constraint
//! set; the scan checks that it is not a local maximum.

use rayon::prelude::*;

use super::{EquilibriumError, EquilibriumProblem};
use crate::roots::{geomspace, safeguarded_newton, sign_changes};
use crate::{unit_ball_volume, unit_sphere_area};

/// Relative size of the finite-difference step used for the gradient at the
/// symmetric point.
const GRADIENT_STEP: f64 = 1e-4;
/// Gradient tolerance relative to the size of the two terms that cancel at a
/// critical point, `ω_n R^{n−1} [[ψ]] / θ`.
const GRADIENT_RTOL: f64 = 1e-6;
const PROBE_DIRECTIONS: usize = 16;

#[derive(Debug, Clone)]
pub struct OstwaldReport {
    /// Radii of the scan grid (used for both balls).
    pub radii: Vec<f64>,
    /// `entropy[i][j]` at `(radii[i], radii[j])`; `None` where the
    /// temperature solve failed or the balls do not fit.
    pub entropy: Vec<Vec<Option<f64>>>,
    pub temperature: Vec<Vec<Option<f64>>>,
    pub symmetric_radius: f64,
    pub symmetric_theta: f64,
    pub symmetric_entropy: f64,
    /// Constrained entropy gradient `(∂Φ/∂R₁, ∂Φ/∂R₂)` at the symmetric point.
    pub gradient: [f64; 2],
    pub gradient_norm: f64,
    pub gradient_tolerance: f64,
    /// A direction `(cos α, sin α)` with the largest entropy gain found on a
    /// probe circle around the symmetric point, and that gain.
    pub best_direction: [f64; 2],
    pub max_gain: f64,
    /// Set when some admissible direction increases the entropy.
    pub not_local_max: bool,
    /// Largest entropy on the grid and where it was attained.
    pub grid_max: Option<(f64, f64, f64)>,
}

impl OstwaldReport {
    pub fn is_critical(&self) -> bool {
        self.gradient_norm < self.gradient_tolerance
    }
}

/// Uniform temperature and total entropy of the two-ball configuration
/// `(r1, r2)` with total energy `problem.e0`. `None` when no temperature in
/// `[theta_min, theta_max]` satisfies the constraint or the balls do not fit.
pub fn constrained_entropy(problem: &EquilibriumProblem, r1: f64, r2: f64) -> Option<(f64, f64)> {
    if r1 < 0.0 || r2 < 0.0 || r1 > problem.r_star_max || r2 > problem.r_star_max {
        return None;
    }
    let n = problem.n as i32;
    let med = &problem.medium;
    let v1 = unit_ball_volume(problem.n) * (r1.powi(n) + r2.powi(n));
    if v1 >= problem.omega_vol {
        return None;
    }
    let area = unit_sphere_area(problem.n) * (r1.powi(n - 1) + r2.powi(n - 1));
    let v2 = problem.omega_vol - v1;
    // |Ω|ε₂ − V₁[[ε]] = V₂ε₂ + V₁ε₁ is strictly increasing in θ.
    let f = |t: f64| v2 * med.phase2.eps(t) + v1 * med.phase1.eps(t) + med.sigma * area - problem.e0;
    let df = |t: f64| v2 * med.phase2.kappa(t) + v1 * med.phase1.kappa(t);
    let samples = geomspace(problem.theta_min, problem.theta_max, 64);
    let br = sign_changes(f, &samples).into_iter().next()?;
    let scale = problem.e0.abs().max(1.0);
    let theta = safeguarded_newton(f, df, br.lo, br.hi, 0.5 * (br.lo + br.hi), 1e-15 * scale, 0.0).ok()?;
    let entropy = v2 * med.phase2.eta(theta) + v1 * med.phase1.eta(theta);
    Some((theta, entropy))
}

/// Scan the two-ball entropy landscape on `radii × radii` and examine the
/// symmetric equilibrium.
pub fn ostwald_scan(problem: &EquilibriumProblem, radii: &[f64]) -> Result<OstwaldReport, EquilibriumError> {
    if problem.m != 2 {
        return Err(EquilibriumError::NotTwoBalls(problem.m));
    }
    let states = problem.solve();
    let sym = states.first().ok_or(EquilibriumError::NoSymmetricEquilibrium)?;
    let r_star = sym.radius;
    let (theta_star, s_star) =
        constrained_entropy(problem, r_star, r_star).ok_or(EquilibriumError::NoSymmetricEquilibrium)?;

    let rows: Vec<Vec<Option<(f64, f64)>>> =
        radii.par_iter().map(|&r1| radii.iter().map(|&r2| constrained_entropy(problem, r1, r2)).collect()).collect();
    let entropy: Vec<Vec<Option<f64>>> =
        rows.iter().map(|row| row.iter().map(|c| c.map(|(_, s)| s)).collect()).collect();
    let temperature: Vec<Vec<Option<f64>>> =
        rows.iter().map(|row| row.iter().map(|c| c.map(|(t, _)| t)).collect()).collect();

    let mut grid_max: Option<(f64, f64, f64)> = None;
    for (i, row) in entropy.iter().enumerate() {
        for (j, s) in row.iter().enumerate() {
            if let Some(s) = *s {
                if grid_max.is_none_or(|(_, _, best)| s > best) {
                    grid_max = Some((radii[i], radii[j], s));
                }
            }
        }
    }

    let at = |r1: f64, r2: f64| constrained_entropy(problem, r1, r2).map(|(_, s)| s);
    let delta = GRADIENT_STEP * r_star;
    let partial = |plus: (f64, f64), minus: (f64, f64)| -> f64 {
        match (at(plus.0, plus.1), at(minus.0, minus.1)) {
            (Some(a), Some(b)) => (a - b) / (2.0 * delta),
            _ => f64::NAN,
        }
    };
    let g1 = partial((r_star + delta, r_star), (r_star - delta, r_star));
    let g2 = partial((r_star, r_star + delta), (r_star, r_star - delta));
    let gradient_norm = g1.hypot(g2);
    let term_scale =
        unit_sphere_area(problem.n) * r_star.powi(problem.n as i32 - 1) * problem.medium.psi_jump(theta_star).abs()
            / theta_star;
    let gradient_tolerance = GRADIENT_RTOL * term_scale;

    let probe = if radii.len() >= 2 {
        let mut sorted = radii.to_vec();
        sorted.sort_by(f64::total_cmp);
        sorted.windows(2).map(|w| w[1] - w[0]).filter(|d| *d > 0.0).fold(f64::INFINITY, f64::min)
    } else {
        f64::INFINITY
    };
    let probe = if probe.is_finite() { probe.min(0.25 * r_star) } else { 0.05 * r_star };
    let mut best_direction = [0.0, 0.0];
    let mut max_gain = f64::NEG_INFINITY;
    for k in 0..PROBE_DIRECTIONS {
        let a = std::f64::consts::TAU * k as f64 / PROBE_DIRECTIONS as f64;
        let (c, s) = (a.cos(), a.sin());
        if let Some(v) = at(r_star + probe * c, r_star + probe * s) {
            if v - s_star > max_gain {
                max_gain = v - s_star;
                best_direction = [c, s];
            }
        }
    }
    let not_local_max = max_gain > 1e-12 * s_star.abs().max(1.0);

    Ok(OstwaldReport {
        radii: radii.to_vec(),
        entropy,
        temperature,
        symmetric_radius: r_star,
        symmetric_theta: theta_star,
        symmetric_entropy: s_star,
        gradient: [g1, g2],
        gradient_norm,
        gradient_tolerance,
        best_direction,
        max_gain,
        not_local_max,
        grid_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::linspace;
    use crate::thermo::Medium;
    use std::f64::consts::PI;

    fn two_ball_problem() -> EquilibriumProblem {
        let p = EquilibriumProblem::new(Medium::reference(), 3, 36.0 * PI, 2, 1.5, 0.0).unwrap();
        let e0 = p.phi(3.0).unwrap();
        p.with_energy(e0)
    }

    #[test]
    fn requires_two_balls() {
        let p = EquilibriumProblem { m: 1, ..two_ball_problem() };
        assert!(matches!(ostwald_scan(&p, &[0.5, 1.0]), Err(EquilibriumError::NotTwoBalls(1))));
    }

    #[test]
    fn symmetric_point_is_critical_saddle() {
        let p = two_ball_problem();
        let radii = linspace(0.0, 1.5, 31);
        let rep = ostwald_scan(&p, &radii).unwrap();
        assert!((rep.symmetric_radius - 1.0).abs() < 1e-9);
        assert!((rep.symmetric_theta - 3.0).abs() < 1e-9);
        assert!(rep.is_critical(), "gradient {} vs tol {}", rep.gradient_norm, rep.gradient_tolerance);
        assert!(rep.not_local_max);
        // the gain is along the antisymmetric direction: one ball grows, the other shrinks
        assert!(rep.best_direction[0] * rep.best_direction[1] < 0.0);
    }

    #[test]
    fn vanishing_second_ball_matches_single_ball() {
        let p = two_ball_problem();
        let single = EquilibriumProblem { m: 1, r_star_max: 3.0, ..p.clone() };
        let r1 = 1.2;
        let (theta, s) = constrained_entropy(&p, r1, 0.0).unwrap();
        let (theta1, s1) = constrained_entropy(&single, r1, 0.0).unwrap();
        assert_eq!((theta, s), (theta1, s1));
        // the single-ball energy evaluated directly at the solved temperature
        let med = &p.medium;
        let v1 = 4.0 * PI / 3.0 * r1.powi(3);
        let e = 36.0 * PI * med.phase2.eps(theta) - v1 * med.eps_jump(theta) + 4.0 * PI * r1 * r1;
        assert!((e - p.e0).abs() < 1e-12 * p.e0);
        let phi = 36.0 * PI * med.phase2.eta(theta) - v1 * med.eta_jump(theta);
        assert!((phi - s).abs() < 1e-12 * s.abs());
    }

    #[test]
    fn oversized_balls_are_invalid() {
        let p = two_ball_problem();
        assert!(constrained_entropy(&p, 1.6, 0.1).is_none());
        assert!(constrained_entropy(&p, -0.1, 0.1).is_none());
    }
}
