//! Radially symmetric two-phase Stefan problem with Gibbs–Thomson interface
//! temperature.
//!
//! The domain is the ball `B_{R_out}` in `ℝⁿ` (`n` = 2 or 3), with phase 1 in
//! `r < R(t)` and phase 2 in `R(t) < r < R_out`. With equal densities the
//! velocity field of the full model vanishes identically in this symmetry
//! class: `div u = 0` forces `u_r = c/r^{n−1}`, and regularity at the origin
//! together with `u = 0` on the outer boundary gives `c = 0`. What remains is
//!
//! ```text
//! ∂_t ε(θ) = div(d(θ)∇θ)                 in each phase
//! [[ψ(θ)]] = σ(n−1)/R                    at r = R   (Gibbs–Thomson)
//! l(θ) j + [[d(θ)∂_r θ]] = 0,  Ṙ = −j    at r = R   (Stefan law)
//! ∂_r θ = 0                              at r = R_out
//! ```
//!
//! Each phase is mapped onto a fixed reference interval (`ξ = r/R` inside,
//! `η = (r−R)/(R_out−R)` outside) and discretized by conservative finite
//! volumes on the moving cells. Diffusion is backward Euler. The front is
//! advanced either explicitly or implicitly (see [`FrontUpdate`]). The
//! discrete total energy `Σ ε(θ_i)|C_i| + σ ω_n R^{n−1}` changes only through
//! the time discretization of the front: by `O(dt·V̇)` per step for the
//! explicit update and by `O(ΔR²)` for the implicit one.

mod checkpoint;
mod diagnostics;
mod grid;
mod run;
mod scheme;

pub use checkpoint::{read_checkpoint, write_checkpoint, CHECKPOINT_TAG};
pub use diagnostics::mean_temperature;
pub use diagnostics::{diagnostics, DiagnosticsRecord, CSV_HEADER};
pub use grid::PhaseGrid;
pub use run::{run, run_from, RunOutcome, RunReport};
pub use scheme::{step, StepInfo};

use thiserror::Error;

use crate::roots::{geomspace, safeguarded_newton, sign_changes};
use crate::thermo::Medium;

/// Lower end of the Gibbs–Thomson temperature scan.
pub const GT_THETA_FLOOR: f64 = 1e-10;
/// Samples in the Gibbs–Thomson temperature scan.
const GT_SCAN_SAMPLES: usize = 512;
/// Accepted Gibbs–Thomson residual `|[[ψ(θ_Γ)]] − σ(n−1)/R|`.
pub const GT_RESIDUAL_TOL: f64 = 1e-10;
/// Front CFL number: `dt ≤ CFL · min cell width / |V|`.
pub const FRONT_CFL: f64 = 0.4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StefanError {
    #[error("invalid simulation setup: {0}")]
    InvalidConfig(String),
    #[error("temperature became non-positive ({value:e}) at t = {t}")]
    TemperatureNonPositive { t: f64, value: f64 },
    #[error("uniform ball condition violated: R = {radius} left ({lo}, {hi}) at t = {t}")]
    BallCondition { t: f64, radius: f64, lo: f64, hi: f64 },
    #[error("latent-heat degeneracy: |l(theta_gamma)| = {:e} < {l_min:e} at t = {t}", .latent.abs())]
    LatentHeatDegeneracy { t: f64, latent: f64, l_min: f64 },
    #[error("Gibbs-Thomson law unsolvable at radius {radius}")]
    GibbsThomsonUnsolvable { radius: f64 },
    #[error("Gibbs-Thomson law needs a non-positive temperature at radius {radius}")]
    GibbsThomsonNonPositive { radius: f64 },
    #[error("implicit temperature solve did not converge at t = {t}")]
    SolverFailure { t: f64 },
    #[error("checkpoint: {0}")]
    Checkpoint(String),
}

impl StefanError {
    /// Short machine-readable reason.
    pub fn slug(&self) -> &'static str {
        match self {
            StefanError::InvalidConfig(_) => "invalid-config",
            StefanError::TemperatureNonPositive { .. } | StefanError::GibbsThomsonNonPositive { .. } => {
                "temperature-nonpositive"
            }
            StefanError::BallCondition { .. } => "ball-condition",
            StefanError::LatentHeatDegeneracy { .. } => "latent-heat-degeneracy",
            StefanError::GibbsThomsonUnsolvable { .. } => "gibbs-thomson-unsolvable",
            StefanError::SolverFailure { .. } => "solver-failure",
            StefanError::Checkpoint(_) => "checkpoint",
        }
    }

    /// True for the guard violations that end a run early.
    pub fn is_guard(&self) -> bool {
        !matches!(self, StefanError::InvalidConfig(_) | StefanError::Checkpoint(_))
    }
}

/// Initial temperature profile.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialProfile {
    /// `θ₀ ≡ value`.
    Uniform(f64),
    /// `θ₀ = inner` for `r < R₀`, `outer` for `r > R₀`.
    TwoPhase { inner: f64, outer: f64 },
    /// `θ₀ ≡ θ_Γ(R₀)`: a steady state.
    Equilibrium,
    /// Smooth data compatible with the interface conditions at `t = 0`:
    /// `θ_Γ + A(1 − (r/R₀)²)³` inside and `θ_Γ + A sin⁴(π(r−R₀)/(2(R_out−R₀)))`
    /// outside, with `θ_Γ = θ_Γ(R₀)`. The one-sided gradients and Laplacians
    /// vanish at the interface, so the front starts at rest and the
    /// interface temperature is stationary to leading order.
    Bump { amplitude: f64 },
}

/// How the interface radius is advanced over a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrontUpdate {
    /// `R ← R + dt·V(tⁿ)`.
    Explicit,
    /// `R ← R + dt·V(tⁿ⁺¹)`, coupled to the temperature solve.
    Implicit,
}

#[derive(Debug, Clone)]
pub struct RadialConfig {
    pub medium: Medium,
    pub n: usize,
    pub r_out: f64,
    pub r0: f64,
    pub n1: usize,
    pub n2: usize,
    pub dt: f64,
    pub t_end: f64,
    pub init: InitialProfile,
    /// Minimal distance of the front to the origin and to the outer boundary.
    pub delta_r: f64,
    /// Minimal admissible `|l(θ_Γ)|`.
    pub l_min: f64,
    /// Record diagnostics every this many steps.
    pub output_every: usize,
    /// Upper end of the Gibbs–Thomson temperature scan.
    pub theta_max: f64,
    pub front: FrontUpdate,
}

impl RadialConfig {
    pub const DEFAULT_L_MIN: f64 = 1e-6;
    pub const DEFAULT_THETA_MAX: f64 = 1e3;

    /// Configuration with default guards (`δ_R = 10⁻³ R_out`,
    /// `l_min = 10⁻⁶`), equilibrium initial data, implicit front update and
    /// output at every step.
    #[allow(clippy::too_many_arguments)]
    pub fn new(medium: Medium, n: usize, r_out: f64, r0: f64, n1: usize, n2: usize, dt: f64, t_end: f64) -> Self {
        Self {
            medium,
            n,
            r_out,
            r0,
            n1,
            n2,
            dt,
            t_end,
            init: InitialProfile::Equilibrium,
            delta_r: 1e-3 * r_out,
            l_min: Self::DEFAULT_L_MIN,
            output_every: 1,
            theta_max: Self::DEFAULT_THETA_MAX,
            front: FrontUpdate::Implicit,
        }
    }

    pub fn with_front(mut self, front: FrontUpdate) -> Self {
        self.front = front;
        self
    }

    pub fn with_init(mut self, init: InitialProfile) -> Self {
        self.init = init;
        self
    }

    pub fn with_guards(mut self, delta_r: f64, l_min: f64) -> Self {
        self.delta_r = delta_r;
        self.l_min = l_min;
        self
    }

    pub fn with_output_every(mut self, every: usize) -> Self {
        self.output_every = every;
        self
    }

    pub fn validate(&self) -> Result<(), StefanError> {
        let bad = |m: String| Err(StefanError::InvalidConfig(m));
        if !(self.n == 2 || self.n == 3) {
            return bad(format!("dimension must be 2 or 3, got {}", self.n));
        }
        if !(self.r_out > 0.0 && self.r_out.is_finite()) {
            return bad(format!("R_out must be positive, got {}", self.r_out));
        }
        if !(self.delta_r > 0.0 && self.delta_r < self.r0 && self.r0 < self.r_out - self.delta_r) {
            return bad(format!(
                "need 0 < delta_R < R0 < R_out - delta_R, got delta_R = {}, R0 = {}, R_out = {}",
                self.delta_r, self.r0, self.r_out
            ));
        }
        if self.n1 < 16 || self.n2 < 16 {
            return bad(format!("N1 and N2 must be at least 16, got {} and {}", self.n1, self.n2));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad(format!("dt must be positive, got {}", self.dt));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return bad(format!("t_end must be non-negative, got {}", self.t_end));
        }
        if !(self.l_min >= 0.0 && self.l_min.is_finite()) {
            return bad(format!("l_min must be non-negative, got {}", self.l_min));
        }
        if self.output_every == 0 {
            return bad("output_every must be at least 1".into());
        }
        if !(self.theta_max > GT_THETA_FLOOR && self.theta_max.is_finite()) {
            return bad(format!("theta_max must exceed {GT_THETA_FLOOR}, got {}", self.theta_max));
        }
        match self.init {
            InitialProfile::Uniform(v) if !(v > 0.0 && v.is_finite()) => {
                return bad(format!("initial temperature must be positive, got {v}"))
            }
            InitialProfile::TwoPhase { inner, outer } if !(inner > 0.0 && outer > 0.0) => {
                return bad(format!("initial temperatures must be positive, got {inner} and {outer}"))
            }
            InitialProfile::Bump { amplitude } if !amplitude.is_finite() => {
                return bad("bump amplitude must be finite".into())
            }
            _ => {}
        }
        Ok(())
    }

    pub fn inner_grid(&self, r: f64) -> PhaseGrid {
        PhaseGrid::new(self.n, 0.0, r, self.n1)
    }

    pub fn outer_grid(&self, r: f64) -> PhaseGrid {
        PhaseGrid::new(self.n, r, self.r_out, self.n2)
    }

    /// Initial state built from [`Self::init`].
    pub fn initial_state(&self) -> Result<RadialState, StefanError> {
        self.validate()?;
        let theta_gamma = interface_temperature(&self.medium, self.n, self.r0, self.theta_max)?;
        let inner = self.inner_grid(self.r0);
        let outer = self.outer_grid(self.r0);
        let (theta1, theta2): (Vec<f64>, Vec<f64>) = match self.init {
            InitialProfile::Uniform(v) => (vec![v; self.n1], vec![v; self.n2]),
            InitialProfile::TwoPhase { inner, outer } => (vec![inner; self.n1], vec![outer; self.n2]),
            InitialProfile::Equilibrium => (vec![theta_gamma; self.n1], vec![theta_gamma; self.n2]),
            InitialProfile::Bump { amplitude } => {
                let r0 = self.r0;
                let width = self.r_out - r0;
                let t1 = inner
                    .centers()
                    .iter()
                    .map(|&r| {
                        let s = 1.0 - (r / r0).powi(2);
                        theta_gamma + amplitude * s * s * s
                    })
                    .collect();
                let t2 = outer
                    .centers()
                    .iter()
                    .map(|&r| theta_gamma + amplitude * (std::f64::consts::FRAC_PI_2 * (r - r0) / width).sin().powi(4))
                    .collect();
                (t1, t2)
            }
        };
        if let Some(&v) = theta1.iter().chain(&theta2).find(|v| !(**v > 0.0)) {
            return Err(StefanError::TemperatureNonPositive { t: 0.0, value: v });
        }
        Ok(RadialState { t: 0.0, r: self.r0, theta_gamma, theta1, theta2 })
    }
}

/// Interface radius and cell-center temperatures.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialState {
    pub t: f64,
    pub r: f64,
    /// Shared interface temperature `θ_Γ(R)`.
    pub theta_gamma: f64,
    /// Inner-phase cell temperatures, ordered from the origin outwards.
    pub theta1: Vec<f64>,
    /// Outer-phase cell temperatures, ordered from the interface outwards.
    pub theta2: Vec<f64>,
}

fn gt_target(medium: &Medium, n: usize, r: f64) -> f64 {
    medium.sigma * (n - 1) as f64 / r
}

/// Solve the Gibbs–Thomson law `[[ψ(θ)]] = σ(n−1)/R` for `θ ∈ (0, θ_max]`.
///
/// The temperature axis is scanned geometrically from [`GT_THETA_FLOOR`]; the
/// lowest bracketed root is refined by safeguarded Newton. When no root is
/// bracketed and the residual is smallest at the floor, the law is asking for
/// a non-positive temperature.
pub fn interface_temperature(medium: &Medium, n: usize, r: f64, theta_max: f64) -> Result<f64, StefanError> {
    interface_temperature_near(medium, n, r, theta_max, None)
}

/// [`interface_temperature`] warm-started from `guess`: the root on the
/// branch through `guess` is preferred when one is bracketed nearby.
pub fn interface_temperature_near(
    medium: &Medium,
    n: usize,
    r: f64,
    theta_max: f64,
    guess: Option<f64>,
) -> Result<f64, StefanError> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(StefanError::GibbsThomsonUnsolvable { radius: r });
    }
    let target = gt_target(medium, n, r);
    let f = |t: f64| medium.psi_jump(t) - target;
    let df = |t: f64| medium.dpsi_jump(t);
    let ftol = 1e-14 * target.abs().max(1.0);
    let polish = |lo: f64, hi: f64, x0: f64| -> Option<f64> {
        let t = safeguarded_newton(f, df, lo, hi, x0, ftol, 0.0).ok()?;
        (t > 0.0 && f(t).abs() < GT_RESIDUAL_TOL).then_some(t)
    };
    if let Some(g) = guess.filter(|g| *g > 0.0 && *g <= theta_max) {
        let lo = (0.5 * g).max(GT_THETA_FLOOR);
        let hi = (2.0 * g).min(theta_max);
        if lo < hi && f(lo).signum() != f(hi).signum() {
            if let Some(t) = polish(lo, hi, g) {
                return Ok(t);
            }
        }
    }
    let samples = geomspace(GT_THETA_FLOOR, theta_max, GT_SCAN_SAMPLES);
    let brackets = sign_changes(f, &samples);
    if let Some(br) = brackets.first() {
        return polish(br.lo, br.hi, 0.5 * (br.lo + br.hi)).ok_or(StefanError::GibbsThomsonUnsolvable { radius: r });
    }
    let closest = samples
        .iter()
        .enumerate()
        .map(|(i, &t)| (i, f(t).abs()))
        .filter(|(_, v)| v.is_finite())
        .min_by(|a, b| a.1.total_cmp(&b.1));
    match closest {
        Some((0, _)) => Err(StefanError::GibbsThomsonNonPositive { radius: r }),
        _ => Err(StefanError::GibbsThomsonUnsolvable { radius: r }),
    }
}

/// Interface state derived from the one-sided temperature gradients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfaceFluxes {
    pub theta_gamma: f64,
    /// `∂_r θ` at `r = R⁻` (phase 1) and `r = R⁺` (phase 2).
    pub grad_inner: f64,
    pub grad_outer: f64,
    pub latent: f64,
    pub j: f64,
    pub v: f64,
}

/// Stefan law `j = −(d₂∂_rθ|₂ − d₁∂_rθ|₁)/l(θ_Γ)` and `V = −j`.
pub fn stefan_flux(medium: &Medium, theta_gamma: f64, grad_inner: f64, grad_outer: f64) -> (f64, f64) {
    let d1 = medium.phase1.conductivity(theta_gamma);
    let d2 = medium.phase2.conductivity(theta_gamma);
    let j = -(d2 * grad_outer - d1 * grad_inner) / medium.latent(theta_gamma);
    (j, -j)
}

/// Second-order one-sided gradients at the interface from the quadratic
/// through `θ_Γ` and the two nearest cell centers of each phase.
pub fn interface_gradients(state: &RadialState, config: &RadialConfig) -> (f64, f64) {
    let d_in = state.r / config.n1 as f64;
    let d_out = (config.r_out - state.r) / config.n2 as f64;
    let k = config.n1;
    let g1 = (8.0 * state.theta_gamma - 9.0 * state.theta1[k - 1] + state.theta1[k - 2]) / (3.0 * d_in);
    let g2 = (-8.0 * state.theta_gamma + 9.0 * state.theta2[0] - state.theta2[1]) / (3.0 * d_out);
    (g1, g2)
}

/// Phase flux and front velocity of `state`, guarded by `|l(θ_Γ)| ≥ l_min`.
pub fn interface_fluxes(state: &RadialState, config: &RadialConfig) -> Result<InterfaceFluxes, StefanError> {
    let latent = config.medium.latent(state.theta_gamma);
    if !(latent.abs() >= config.l_min) || latent == 0.0 {
        return Err(StefanError::LatentHeatDegeneracy { t: state.t, latent, l_min: config.l_min });
    }
    let (grad_inner, grad_outer) = interface_gradients(state, config);
    let (j, v) = stefan_flux(&config.medium, state.theta_gamma, grad_inner, grad_outer);
    Ok(InterfaceFluxes { theta_gamma: state.theta_gamma, grad_inner, grad_outer, latent, j, v })
}
