//! Equilibria: zero velocity, constant temperature, and `m` disjoint balls of
//! a common radius `R(θ) = (n−1)σ / [[ψ(θ)]]`.
//!
//! The total energy of such a configuration reduces to a function of the
//! temperature alone,
//!
//! ```text
//! φ(θ) = |Ω| ε₂(θ) − m (ω_n/n) Rⁿ(θ) [[ε(θ)]] + σ m ω_n R^{n−1}(θ),
//! ```
//!
//! and equilibria for a prescribed energy `E₀` are the roots of `φ(θ) = E₀`
//! on the admissible set `[[ψ(θ)]] > σ(n−1)/R_m*`. An equilibrium is stable
//! exactly when `m = 1` and `φ'(θ) < 0`.

mod ostwald;

pub use ostwald::{constrained_entropy, ostwald_scan, OstwaldReport};

use thiserror::Error;

use crate::roots::{geomspace, sign_changes, Bracket};
use crate::thermo::Medium;
use crate::{unit_ball_volume, unit_sphere_area};

/// Samples used to scan each admissible temperature interval for roots.
pub const SCAN_SAMPLES: usize = 512;
/// Bisection stops once the bracket is narrower than this.
pub const BISECTION_WIDTH: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EquilibriumError {
    #[error("inadmissible temperature {theta}: [[psi]] = {psi_jump} must be positive")]
    InadmissibleTemperature { theta: f64, psi_jump: f64 },
    #[error("invalid equilibrium problem: {0}")]
    InvalidProblem(String),
    #[error("ostwald scan requires m = 2 balls, got m = {0}")]
    NotTwoBalls(usize),
    #[error("no symmetric equilibrium exists for the prescribed energy")]
    NoSymmetricEquilibrium,
}

/// Data defining the equilibrium equation.
#[derive(Debug, Clone)]
pub struct EquilibriumProblem {
    pub medium: Medium,
    pub n: usize,
    /// `|Ω|`
    pub omega_vol: f64,
    /// Number of balls.
    pub m: usize,
    /// `R_m*`: largest radius of `m` disjoint balls fitting in `Ω`.
    pub r_star_max: f64,
    /// Prescribed total energy `E₀`.
    pub e0: f64,
    /// Lower end of the temperature scan.
    pub theta_min: f64,
    /// Upper end of the temperature scan.
    pub theta_max: f64,
}

/// One root of `φ(θ) = E₀` with its geometry and stability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumState {
    pub theta: f64,
    pub radius: f64,
    pub pressure_jump: f64,
    pub phi_val: f64,
    pub phi_prime: f64,
    pub stable: bool,
}

impl EquilibriumProblem {
    pub const DEFAULT_THETA_MIN: f64 = 1e-6;
    pub const DEFAULT_THETA_MAX: f64 = 1e3;

    pub fn new(
        medium: Medium,
        n: usize,
        omega_vol: f64,
        m: usize,
        r_star_max: f64,
        e0: f64,
    ) -> Result<Self, EquilibriumError> {
        let p = Self {
            medium,
            n,
            omega_vol,
            m,
            r_star_max,
            e0,
            theta_min: Self::DEFAULT_THETA_MIN,
            theta_max: Self::DEFAULT_THETA_MAX,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_theta_range(mut self, theta_min: f64, theta_max: f64) -> Result<Self, EquilibriumError> {
        self.theta_min = theta_min;
        self.theta_max = theta_max;
        self.validate()?;
        Ok(self)
    }

    pub fn with_energy(mut self, e0: f64) -> Self {
        self.e0 = e0;
        self
    }

    pub fn validate(&self) -> Result<(), EquilibriumError> {
        let bad = |msg: String| Err(EquilibriumError::InvalidProblem(msg));
        if self.n < 2 {
            return bad(format!("dimension must be at least 2, got {}", self.n));
        }
        if !(self.omega_vol > 0.0 && self.omega_vol.is_finite()) {
            return bad(format!("domain volume must be positive, got {}", self.omega_vol));
        }
        if self.m < 1 {
            return bad("at least one ball is required".into());
        }
        if !(self.r_star_max > 0.0 && self.r_star_max.is_finite()) {
            return bad(format!("R_m* must be positive, got {}", self.r_star_max));
        }
        if !self.e0.is_finite() {
            return bad("E0 must be finite".into());
        }
        if !(self.theta_min > 0.0 && self.theta_max > self.theta_min && self.theta_max.is_finite()) {
            return bad(format!("bad temperature range [{}, {}]", self.theta_min, self.theta_max));
        }
        Ok(())
    }

    fn sigma(&self) -> f64 {
        self.medium.sigma
    }

    /// `σ(n−1)/R_m*`: the smallest admissible value of `[[ψ]]`.
    pub fn psi_jump_threshold(&self) -> f64 {
        self.sigma() * (self.n - 1) as f64 / self.r_star_max
    }

    /// True when `[[ψ(θ)]] > σ(n−1)/R_m*`, i.e. `0 < R(θ) < R_m*`.
    pub fn is_admissible(&self, theta: f64) -> bool {
        theta > 0.0 && self.medium.psi_jump(theta) > self.psi_jump_threshold()
    }

    /// `R(θ) = (n−1)σ / [[ψ(θ)]]`.
    pub fn radius_of_temperature(&self, theta: f64) -> Result<f64, EquilibriumError> {
        let h = if theta > 0.0 { self.medium.psi_jump(theta) } else { f64::NAN };
        if !(h > 0.0) {
            return Err(EquilibriumError::InadmissibleTemperature { theta, psi_jump: h });
        }
        Ok((self.n - 1) as f64 * self.sigma() / h)
    }

    /// `c_n = m ω_n / (n(n−1)) · ((n−1)σ)ⁿ`.
    pub fn c_n(&self) -> f64 {
        let n = self.n as f64;
        self.m as f64 * unit_sphere_area(self.n) / (n * (n - 1.0)) * ((n - 1.0) * self.sigma()).powi(self.n as i32)
    }

    /// Both closed forms of `φ(θ)`: the direct energy sum and the `c_n` form
    /// written in terms of `h = [[ψ]]` and `h'`.
    pub fn phi_forms(&self, theta: f64) -> Result<(f64, f64), EquilibriumError> {
        let r = self.radius_of_temperature(theta)?;
        let n = self.n as i32;
        let m = self.m as f64;
        let wn = unit_sphere_area(self.n);
        let eps2 = self.medium.phase2.eps(theta);
        let direct = self.omega_vol * eps2 - m * unit_ball_volume(self.n) * r.powi(n) * self.medium.eps_jump(theta)
            + self.sigma() * m * wn * r.powi(n - 1);
        let h = self.medium.psi_jump(theta);
        let dh = self.medium.dpsi_jump(theta);
        let cn_form =
            self.omega_vol * eps2 + self.c_n() * (1.0 / h.powi(n - 1) + (n - 1) as f64 * theta * dh / h.powi(n));
        Ok((direct, cn_form))
    }

    /// Total energy `φ(θ)` of the `m`-ball equilibrium configuration at `θ`.
    pub fn phi(&self, theta: f64) -> Result<f64, EquilibriumError> {
        Ok(self.phi_forms(theta)?.0)
    }

    /// `(κ|1)_Ω = |Ω₂|κ₂ + |Ω₁|κ₁` with `|Ω₁| = m(ω_n/n)Rⁿ`.
    pub fn heat_capacity(&self, theta: f64, radius: f64) -> f64 {
        let v1 = self.m as f64 * unit_ball_volume(self.n) * radius.powi(self.n as i32);
        (self.omega_vol - v1) * self.medium.phase2.kappa(theta) + v1 * self.medium.phase1.kappa(theta)
    }

    /// `φ'(θ)` in the factored form
    /// `(κ|1)_Ω R²/(σ(n−1)) · {σ(n−1)/R² − l²|Γ| / (θ(κ|1)_Ω)}`.
    pub fn phi_prime(&self, theta: f64) -> Result<f64, EquilibriumError> {
        let r = self.radius_of_temperature(theta)?;
        let kappa = self.heat_capacity(theta, r);
        let sn = self.sigma() * (self.n - 1) as f64;
        let area = self.m as f64 * unit_sphere_area(self.n) * r.powi(self.n as i32 - 1);
        let l = theta * self.medium.dpsi_jump(theta);
        Ok(kappa * r * r / sn * (sn / (r * r) - l * l * area / (theta * kappa)))
    }

    fn state_at(&self, theta: f64) -> Result<EquilibriumState, EquilibriumError> {
        let radius = self.radius_of_temperature(theta)?;
        let phi_prime = self.phi_prime(theta)?;
        Ok(EquilibriumState {
            theta,
            radius,
            pressure_jump: -((self.n - 1) as f64) * self.sigma() / radius,
            phi_val: self.phi(theta)?,
            phi_prime,
            stable: self.m == 1 && phi_prime < 0.0,
        })
    }

    /// Maximal sub-intervals of `[theta_min, theta_max]` on which the
    /// temperature is admissible, with interior boundaries located by
    /// bisection on `[[ψ]] − σ(n−1)/R_m*`.
    pub fn admissible_intervals(&self) -> Vec<(f64, f64)> {
        let thr = self.psi_jump_threshold();
        let g = |t: f64| self.medium.psi_jump(t) - thr;
        let coarse = geomspace(self.theta_min, self.theta_max, SCAN_SAMPLES);
        let inside: Vec<bool> = coarse.iter().map(|&t| g(t) > 0.0).collect();
        // first admissible point next to the boundary between `out` and `inn`
        let refine = |out: f64, inn: f64| -> f64 {
            let (mut o, mut i) = (out, inn);
            for _ in 0..200 {
                let mid = 0.5 * (o + i);
                if mid == o || mid == i {
                    break;
                }
                if g(mid) > 0.0 {
                    i = mid;
                } else {
                    o = mid;
                }
            }
            i
        };
        let mut out = Vec::new();
        let mut k = 0;
        while k < coarse.len() {
            if !inside[k] {
                k += 1;
                continue;
            }
            let start = k;
            while k + 1 < coarse.len() && inside[k + 1] {
                k += 1;
            }
            let lo = if start == 0 { coarse[0] } else { refine(coarse[start - 1], coarse[start]) };
            let hi = if k + 1 == coarse.len() { coarse[k] } else { refine(coarse[k + 1], coarse[k]) };
            if hi > lo {
                out.push((lo, hi));
            }
            k += 1;
        }
        out
    }

    /// All roots of `φ(θ) = E₀` on the admissible set, sorted by temperature.
    ///
    /// Each admissible interval is scanned with [`SCAN_SAMPLES`] geometric
    /// samples, and sign changes of `φ'` are checked for a pair of roots
    /// around an extremum between samples. Every bracket is bisected to
    /// [`BISECTION_WIDTH`] and polished with one Newton step using
    /// [`Self::phi_prime`].
    pub fn solve(&self) -> Vec<EquilibriumState> {
        let resid = |t: f64| self.phi(t).map(|v| v - self.e0).unwrap_or(f64::NAN);
        let mut roots: Vec<f64> = Vec::new();
        let slope = |t: f64| self.phi_prime(t).unwrap_or(f64::NAN);
        for (lo, hi) in self.admissible_intervals() {
            let samples = geomspace(lo, hi, SCAN_SAMPLES);
            let mut brackets = sign_changes(resid, &samples);
            // two roots straddling an extremum inside one sample interval
            for ext in sign_changes(slope, &samples) {
                let (ra, rb) = (resid(ext.lo), resid(ext.hi));
                if ra.signum() != rb.signum() {
                    continue;
                }
                let Ok(te) = crate::roots::bisect(slope, ext.lo, ext.hi, BISECTION_WIDTH) else {
                    continue;
                };
                let re = resid(te);
                if re == 0.0 || re.signum() != ra.signum() {
                    brackets.push(Bracket { lo: ext.lo, hi: te });
                    brackets.push(Bracket { lo: te, hi: ext.hi });
                }
            }
            for br in brackets {
                let Ok(mut t) = crate::roots::bisect(resid, br.lo, br.hi, BISECTION_WIDTH) else {
                    continue;
                };
                if let Ok(d) = self.phi_prime(t) {
                    let polished = t - resid(t) / d;
                    if polished >= br.lo && polished <= br.hi && resid(polished).abs() <= resid(t).abs() {
                        t = polished;
                    }
                }
                if self.is_admissible(t) && !roots.iter().any(|&r| (r - t).abs() <= 4.0 * BISECTION_WIDTH) {
                    roots.push(t);
                }
            }
        }
        roots.sort_by(f64::total_cmp);
        roots.into_iter().filter_map(|t| self.state_at(t).ok()).collect()
    }
}

/// Free function form of [`EquilibriumProblem::solve`].
pub fn solve_equilibria(problem: &EquilibriumProblem) -> Vec<EquilibriumState> {
    problem.solve()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thermo::PhaseMaterial;
    use std::f64::consts::PI;

    fn reference_problem() -> EquilibriumProblem {
        EquilibriumProblem::new(Medium::reference(), 3, 36.0 * PI, 1, 3.0, 296.0 * PI / 3.0).unwrap()
    }

    #[test]
    fn radius_examples() {
        let p = reference_problem();
        assert!((p.radius_of_temperature(2.0).unwrap() - 2.0).abs() < 1e-15);
        assert!((p.radius_of_temperature(3.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(p.radius_of_temperature(1.0), Err(EquilibriumError::InadmissibleTemperature { .. })));
        assert!(p.radius_of_temperature(0.5).is_err());
    }

    #[test]
    fn phi_at_reference_point() {
        let p = reference_problem();
        let (a, b) = p.phi_forms(2.0).unwrap();
        // 72π + 32π/3 + 16π
        let expected = 72.0 * PI + 32.0 * PI / 3.0 + 16.0 * PI;
        assert!((a - expected).abs() < 1e-12 * expected);
        assert!((b - expected).abs() < 1e-12 * expected);
        assert!((p.c_n() - 16.0 * PI / 3.0).abs() < 1e-14);
    }

    #[test]
    fn phi_prime_at_reference_point() {
        let p = reference_problem();
        let d = p.phi_prime(2.0).unwrap();
        assert!((d + 28.0 * PI).abs() < 1e-12 * 28.0 * PI);
        // bracket terms: σ(n−1)/R² = 0.5, l²|Γ|/(θ(κ|1)) = 8/9
        let r = 2.0;
        let kappa = p.heat_capacity(2.0, r);
        assert!((kappa - 36.0 * PI).abs() < 1e-12);
        let term = 4.0 * 16.0 * PI / (2.0 * kappa);
        assert!((term - 8.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn reference_problem_has_stable_root_at_two() {
        let states = reference_problem().solve();
        let stable: Vec<_> = states.iter().filter(|s| s.stable).collect();
        assert_eq!(stable.len(), 1);
        let s = stable[0];
        assert!((s.theta - 2.0).abs() < 1e-9);
        assert!((s.radius - 2.0).abs() < 1e-9);
        assert!((s.pressure_jump + 1.0).abs() < 1e-9);
        // the energy curve turns back up: a second, unstable root sits near θ ≈ 2.41
        assert_eq!(states.len(), 2);
        assert!(!states[1].stable && states[1].phi_prime > 0.0);
        assert!(states[1].theta > 2.4 && states[1].theta < 2.45);
    }

    #[test]
    fn energy_below_minimum_gives_no_root() {
        let p = reference_problem().with_energy(50.0 * PI);
        assert!(p.solve().is_empty());
    }

    #[test]
    fn identical_phases_are_never_admissible() {
        let ph = PhaseMaterial::log_linear(1.0, 0.0, 1.0, 1.0, 1.0).unwrap();
        let medium = Medium::new(ph.clone(), ph, 1.0).unwrap();
        let p = EquilibriumProblem::new(medium, 3, 36.0 * PI, 1, 3.0, 100.0).unwrap();
        assert!(p.phi(2.0).is_err());
        assert!(p.admissible_intervals().is_empty());
        assert!(p.solve().is_empty());
    }

    #[test]
    fn two_balls_are_never_stable() {
        let base = reference_problem();
        let p = EquilibriumProblem { m: 2, r_star_max: 1.5, ..base };
        let e0 = p.phi(3.0).unwrap();
        let states = p.with_energy(e0).solve();
        assert!(!states.is_empty());
        assert!(states.iter().any(|s| (s.theta - 3.0).abs() < 1e-9));
        assert!(states.iter().all(|s| !s.stable));
    }

    #[test]
    fn admissible_interval_boundary() {
        let p = reference_problem();
        let iv = p.admissible_intervals();
        assert_eq!(iv.len(), 1);
        // [[ψ]] = θ − 1 > 2/3
        assert!((iv[0].0 - 5.0 / 3.0).abs() < 1e-13);
        assert_eq!(iv[0].1, p.theta_max);
    }

    #[test]
    fn rejects_invalid_problem() {
        let m = Medium::reference();
        assert!(EquilibriumProblem::new(m.clone(), 1, 1.0, 1, 1.0, 0.0).is_err());
        assert!(EquilibriumProblem::new(m.clone(), 3, -1.0, 1, 1.0, 0.0).is_err());
        assert!(EquilibriumProblem::new(m.clone(), 3, 1.0, 0, 1.0, 0.0).is_err());
        assert!(EquilibriumProblem::new(m, 3, 1.0, 1, 0.0, 0.0).is_err());
    }
}
