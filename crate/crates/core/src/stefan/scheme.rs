//! One time step: front update, then a backward-Euler finite-volume solve in
//! each phase on the moved cells.
//!
//! For a cell `C` with faces `a < b` the discrete balance is
//!
//! ```text
//! |C|ⁿ⁺¹ ε(θⁿ⁺¹) − |C|ⁿ εⁿ + Δt (A_b q_b − A_a q_a) − (ε_b ΔS_b − ε_a ΔS_a) = 0
//! ```
//!
//! where `q = −d ∂_r θ` is the radial heat flux, `A` the face area and `ΔS`
//! the exact volume swept by a face during the step. The swept-volume term is
//! upwinded; at the interface face it uses `ε(θ_Γ)` of the phase. Because
//! `ΔS` is exact, a spatially uniform field stays uniform on moving cells.

use super::grid::PhaseGrid;
use super::{
    interface_fluxes, interface_temperature_near, FrontUpdate, InterfaceFluxes, RadialConfig, RadialState, StefanError,
    FRONT_CFL,
};
use crate::thermo::PhaseMaterial;

const NEWTON_MAX_ITER: usize = 50;
const NEWTON_TOL: f64 = 1e-14;
const FRONT_MAX_ITER: usize = 40;
/// Tolerance on the implicit front equation, relative to `max(R, 1)`.
const FRONT_TOL: f64 = 1e-14;

/// Bookkeeping of a completed step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepInfo {
    /// Step size actually taken after the front CFL limit.
    pub dt: f64,
    /// Interface fluxes at the start of the step.
    pub fluxes: InterfaceFluxes,
    pub newton_iterations: usize,
    /// Secant iterations of the implicit front update.
    pub front_iterations: usize,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Inner,
    Outer,
}

struct PhaseProblem<'a> {
    phase: &'a PhaseMaterial,
    side: Side,
    old: &'a [f64],
    theta_gamma: f64,
    dt: f64,
    vol_old: Vec<f64>,
    vol_new: Vec<f64>,
    areas: Vec<f64>,
    swept: Vec<f64>,
    /// Conductivity at each face, lagged to the start of the step.
    dface: Vec<f64>,
    width: f64,
}

impl<'a> PhaseProblem<'a> {
    #[allow(clippy::too_many_arguments)]
    fn new(
        phase: &'a PhaseMaterial,
        side: Side,
        old: &'a [f64],
        theta_gamma_old: f64,
        theta_gamma: f64,
        old_grid: &PhaseGrid,
        new_grid: &PhaseGrid,
        dt: f64,
    ) -> Self {
        let n = old.len();
        let ev_old = old_grid.enclosed_volumes();
        let ev_new = new_grid.enclosed_volumes();
        let swept = ev_new.iter().zip(&ev_old).map(|(a, b)| a - b).collect();
        let mut dface = vec![0.0; n + 1];
        for k in 1..n {
            dface[k] = phase.conductivity(0.5 * (old[k - 1] + old[k]));
        }
        let dg = phase.conductivity(theta_gamma_old);
        match side {
            Side::Inner => dface[n] = dg,
            Side::Outer => dface[0] = dg,
        }
        Self {
            phase,
            side,
            old,
            theta_gamma,
            dt,
            vol_old: old_grid.volumes(),
            vol_new: new_grid.volumes(),
            areas: new_grid.areas(),
            swept,
            dface,
            width: new_grid.width(),
        }
    }

    /// Assemble the residual and its tridiagonal Jacobian at `theta`.
    fn assemble(&self, theta: &[f64], sub: &mut [f64], diag: &mut [f64], sup: &mut [f64], res: &mut [f64]) {
        let n = theta.len();
        let p = self.phase;
        for i in 0..n {
            res[i] = self.vol_new[i] * p.eps(theta[i]) - self.vol_old[i] * p.eps(self.old[i]);
            diag[i] = self.vol_new[i] * p.kappa(theta[i]);
            sub[i] = 0.0;
            sup[i] = 0.0;
        }
        // face k lies between cells k−1 and k; its term G_k enters F_{k−1}
        // with + and F_k with −
        let mut add = |cell: Option<usize>, sign: f64, value: f64, partials: &[(usize, f64)]| {
            let Some(i) = cell else { return };
            res[i] += sign * value;
            for &(j, d) in partials {
                let dv = sign * d;
                if j == i {
                    diag[i] += dv;
                } else if j + 1 == i {
                    sub[i] += dv;
                } else if j == i + 1 {
                    sup[i] += dv;
                } else {
                    unreachable!("stencil wider than tridiagonal");
                }
            }
        };
        let w = self.width;
        for k in 0..=n {
            let ds = self.swept[k];
            let a = self.areas[k];
            let dk = self.dface[k];
            let (value, partials): (f64, Vec<(usize, f64)>) = if k > 0 && k < n {
                let q = -dk * (theta[k] - theta[k - 1]) / w;
                let up = if ds > 0.0 { k } else { k - 1 };
                let g = self.dt * a * q - p.eps(theta[up]) * ds;
                let dq = self.dt * a * dk / w;
                let mut parts = vec![(k - 1, dq), (k, -dq)];
                for part in parts.iter_mut() {
                    if part.0 == up {
                        part.1 -= p.kappa(theta[up]) * ds;
                    }
                }
                (g, parts)
            } else if (k == n && self.side == Side::Inner) || (k == 0 && self.side == Side::Outer) {
                let tg = self.theta_gamma;
                let (grad, parts) = match self.side {
                    Side::Inner => (
                        (8.0 * tg - 9.0 * theta[n - 1] + theta[n - 2]) / (3.0 * w),
                        vec![(n - 1, -9.0 / (3.0 * w)), (n - 2, 1.0 / (3.0 * w))],
                    ),
                    Side::Outer => (
                        (-8.0 * tg + 9.0 * theta[0] - theta[1]) / (3.0 * w),
                        vec![(0, 9.0 / (3.0 * w)), (1, -1.0 / (3.0 * w))],
                    ),
                };
                let c = -self.dt * a * dk;
                let g = c * grad - p.eps(tg) * ds;
                (g, parts.into_iter().map(|(j, d)| (j, c * d)).collect())
            } else {
                // origin or outer wall: no flux and no motion
                continue;
            };
            add(k.checked_sub(1), 1.0, value, &partials);
            add((k < n).then_some(k), -1.0, value, &partials);
        }
    }

    fn solve(&self) -> Option<(Vec<f64>, usize)> {
        let n = self.old.len();
        let mut theta = self.old.to_vec();
        let (mut sub, mut diag, mut sup, mut res) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
        for it in 1..=NEWTON_MAX_ITER {
            self.assemble(&theta, &mut sub, &mut diag, &mut sup, &mut res);
            let delta = thomas(&sub, &diag, &sup, &res)?;
            let mut change = 0.0f64;
            let mut size = 0.0f64;
            for (t, d) in theta.iter_mut().zip(&delta) {
                *t -= d;
                change = change.max(d.abs());
                size = size.max(t.abs());
            }
            if !change.is_finite() {
                return None;
            }
            if change <= NEWTON_TOL * size.max(1.0) {
                return Some((theta, it));
            }
        }
        None
    }
}

/// Solve the tridiagonal system `(sub, diag, sup) x = rhs` with
/// `sub[0]` and `sup[n−1]` ignored.
fn thomas(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Option<Vec<f64>> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut beta = diag[0];
    if beta == 0.0 {
        return None;
    }
    c[0] = sup[0] / beta;
    d[0] = rhs[0] / beta;
    for i in 1..n {
        beta = diag[i] - sub[i] * c[i - 1];
        if beta == 0.0 || !beta.is_finite() {
            return None;
        }
        c[i] = if i + 1 < n { sup[i] / beta } else { 0.0 };
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / beta;
    }
    for i in (0..n - 1).rev() {
        d[i] -= c[i] * d[i + 1];
    }
    Some(d)
}

/// Temperatures on the cells of radius `r_new` after a step of size `dt`.
fn advance_to(
    state: &RadialState,
    config: &RadialConfig,
    dt: f64,
    r_new: f64,
) -> Result<(RadialState, usize), StefanError> {
    let t_new = state.t + dt;
    let (lo, hi) = (config.delta_r, config.r_out - config.delta_r);
    if !(r_new > lo && r_new < hi) {
        return Err(StefanError::BallCondition { t: t_new, radius: r_new, lo, hi });
    }
    let theta_gamma =
        interface_temperature_near(&config.medium, config.n, r_new, config.theta_max, Some(state.theta_gamma))?;
    let med = &config.medium;
    let (old_inner, old_outer) = (config.inner_grid(state.r), config.outer_grid(state.r));
    let (new_inner, new_outer) = (config.inner_grid(r_new), config.outer_grid(r_new));
    let p1 = PhaseProblem::new(
        &med.phase1,
        Side::Inner,
        &state.theta1,
        state.theta_gamma,
        theta_gamma,
        &old_inner,
        &new_inner,
        dt,
    );
    let p2 = PhaseProblem::new(
        &med.phase2,
        Side::Outer,
        &state.theta2,
        state.theta_gamma,
        theta_gamma,
        &old_outer,
        &new_outer,
        dt,
    );
    let (s1, s2) = rayon::join(|| p1.solve(), || p2.solve());
    let ((theta1, it1), (theta2, it2)) = match (s1, s2) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(StefanError::SolverFailure { t: t_new }),
    };
    if let Some(&v) = theta1.iter().chain(&theta2).find(|v| !(**v > 0.0)) {
        return Err(StefanError::TemperatureNonPositive { t: t_new, value: v });
    }
    Ok((RadialState { t: t_new, r: r_new, theta_gamma, theta1, theta2 }, it1.max(it2)))
}

/// Advance `state` by at most `dt`; the step is shortened to respect the
/// front CFL limit. Guard violations are reported as errors and leave
/// `state` untouched.
///
/// With [`FrontUpdate::Explicit`] the front moves with the velocity of the
/// old state. With [`FrontUpdate::Implicit`] the new radius solves
/// `R' = R + dt·V(R')`, where `V(R')` is the Stefan velocity of the
/// temperatures computed on the cells of radius `R'`; the scalar equation is
/// solved by secant iteration started from the explicit predictor.
pub fn step(state: &RadialState, config: &RadialConfig, dt: f64) -> Result<(RadialState, StepInfo), StefanError> {
    let fluxes = interface_fluxes(state, config)?;
    if !(dt > 0.0) {
        return Ok((state.clone(), StepInfo { dt: 0.0, fluxes, newton_iterations: 0, front_iterations: 0 }));
    }
    let min_width = (state.r / config.n1 as f64).min((config.r_out - state.r) / config.n2 as f64);
    let dt = if fluxes.v != 0.0 { dt.min(FRONT_CFL * min_width / fluxes.v.abs()) } else { dt };
    let predictor = state.r + dt * fluxes.v;
    let (next, newton) = advance_to(state, config, dt, predictor)?;
    if config.front == FrontUpdate::Explicit {
        return Ok((next, StepInfo { dt, fluxes, newton_iterations: newton, front_iterations: 0 }));
    }

    let velocity = |s: &RadialState| -> Result<f64, StefanError> { Ok(interface_fluxes(s, config)?.v) };
    let tol = FRONT_TOL * state.r.max(1.0);
    let (mut x0, mut g0) = (predictor, predictor - state.r - dt * velocity(&next)?);
    let mut best = next;
    let mut newton_max = newton;
    if g0.abs() <= tol {
        return Ok((best, StepInfo { dt, fluxes, newton_iterations: newton_max, front_iterations: 0 }));
    }
    let mut x1 = x0 - g0;
    for it in 1..=FRONT_MAX_ITER {
        let (cand, nit) = advance_to(state, config, dt, x1)?;
        newton_max = newton_max.max(nit);
        let g1 = x1 - state.r - dt * velocity(&cand)?;
        best = cand;
        if g1.abs() <= tol {
            return Ok((best, StepInfo { dt, fluxes, newton_iterations: newton_max, front_iterations: it }));
        }
        let slope = (g1 - g0) / (x1 - x0);
        let next_x = if slope.is_finite() && slope != 0.0 { x1 - g1 / slope } else { x1 - g1 };
        (x0, g0, x1) = (x1, g1, next_x);
    }
    Err(StefanError::SolverFailure { t: best.t })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stefan::{interface_temperature, InitialProfile};
    use crate::thermo::Medium;

    fn config() -> RadialConfig {
        RadialConfig::new(Medium::reference(), 3, 3.0, 2.0, 16, 16, 1e-3, 1.0)
    }

    #[test]
    fn thomas_solves_a_small_system() {
        let x = thomas(&[0.0, 1.0, 1.0], &[4.0, 4.0, 4.0], &[1.0, 1.0, 0.0], &[5.0, 6.0, 5.0]).unwrap();
        for v in x {
            assert!((v - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn equilibrium_is_a_fixed_point() {
        let cfg = config();
        let s = cfg.initial_state().unwrap();
        let (next, info) = step(&s, &cfg, 1e-2).unwrap();
        assert_eq!(next.r, s.r);
        assert!(next.theta1.iter().chain(&next.theta2).all(|t| (t - s.theta_gamma).abs() < 1e-12));
        assert_eq!(info.dt, 1e-2);
    }

    #[test]
    fn zero_step_changes_nothing() {
        let cfg = config().with_init(InitialProfile::Uniform(2.3));
        let s = cfg.initial_state().unwrap();
        let (next, info) = step(&s, &cfg, 0.0).unwrap();
        assert_eq!(next, s);
        assert_eq!(info.dt, 0.0);
    }

    #[test]
    fn uniform_field_stays_uniform_on_moving_cells() {
        let cfg = config();
        let phase = &cfg.medium.phase1;
        let old = vec![2.0; 16];
        let (g0, g1) = (cfg.inner_grid(2.0), cfg.inner_grid(2.01));
        let p = PhaseProblem::new(phase, Side::Inner, &old, 2.0, 2.0, &g0, &g1, 1e-2);
        let (theta, _) = p.solve().unwrap();
        assert!(theta.iter().all(|t| (t - 2.0).abs() < 1e-13));
        let (h0, h1) = (cfg.outer_grid(2.0), cfg.outer_grid(1.99));
        let p = PhaseProblem::new(&cfg.medium.phase2, Side::Outer, &old, 2.0, 2.0, &h0, &h1, 1e-2);
        let (theta, _) = p.solve().unwrap();
        assert!(theta.iter().all(|t| (t - 2.0).abs() < 1e-13));
    }

    #[test]
    fn warm_start_heats_toward_the_interface() {
        let cfg = config().with_init(InitialProfile::Uniform(2.05));
        let s = cfg.initial_state().unwrap();
        assert!((s.theta_gamma - interface_temperature(&cfg.medium, 3, 2.0, 1e3).unwrap()).abs() < 1e-15);
        let (next, _) = step(&s, &cfg, 1e-3).unwrap();
        // the interface is the coldest point: cells next to it cool first
        assert!(next.theta1[15] < 2.05 && next.theta2[0] < 2.05);
        assert!(next.theta1[0] <= 2.05 + 1e-12 && next.theta2[15] <= 2.05 + 1e-12);
        assert!(next.theta1[15] < next.theta1[0]);
        assert!(next.theta2[0] < next.theta2[15]);
    }
}
