//! Helmholtz free-energy calculus for the two phases.
//!
//! Every phase is described by its free energy `ψ(θ)`; entropy, internal
//! energy and heat capacity follow from
//!
//! ```text
//! η = −ψ'(θ),   ε = ψ + θη,   κ = ε'(θ) = −θψ''(θ)
//! ```
//!
//! Jumps across the interface are always `[[v]] = v₂ − v₁` (outer phase minus
//! inner phase), and the latent heat is `l(θ) = θ[[ψ']] = −θ[[η]]`.
//! Densities are fixed to one in both phases.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ThermoError {
    #[error("temperature must be positive and finite, got {0}")]
    NonPositiveTemperature(f64),
    #[error("invalid material parameter: {0}")]
    InvalidParameter(String),
}

/// A user-supplied free energy `ψ(θ)` together with its first two
/// derivatives. Implementations must satisfy `ψ'' < 0` on `θ > 0` so that the
/// heat capacity stays positive.
pub trait FreeEnergy: Send + Sync {
    fn psi(&self, theta: f64) -> f64;
    fn dpsi(&self, theta: f64) -> f64;
    fn d2psi(&self, theta: f64) -> f64;
}

/// The built-in family `ψ(θ) = −c θ log θ + dlin θ + e0`.
///
/// It has constant heat capacity `κ = c`, affine internal energy
/// `ε = cθ + e0` and entropy `η = c log θ + c − dlin`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogLinear {
    pub c: f64,
    pub dlin: f64,
    pub e0: f64,
}

impl FreeEnergy for LogLinear {
    fn psi(&self, theta: f64) -> f64 {
        -self.c * theta * theta.ln() + self.dlin * theta + self.e0
    }

    fn dpsi(&self, theta: f64) -> f64 {
        -self.c * theta.ln() - self.c + self.dlin
    }

    fn d2psi(&self, theta: f64) -> f64 {
        -self.c / theta
    }
}

#[derive(Clone)]
enum FreeEnergyModel {
    LogLinear(LogLinear),
    Custom(Arc<dyn FreeEnergy>),
}

/// A transport coefficient (viscosity or heat conductivity) as a function of
/// temperature.
#[derive(Clone)]
pub enum Coefficient {
    Constant(f64),
    Function(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl Coefficient {
    pub fn eval(&self, theta: f64) -> f64 {
        match self {
            Coefficient::Constant(v) => *v,
            Coefficient::Function(f) => f(theta),
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Coefficient::Constant(_))
    }
}

impl fmt::Debug for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Constant(v) => write!(f, "Constant({v})"),
            Coefficient::Function(_) => f.write_str("Function(..)"),
        }
    }
}

impl From<f64> for Coefficient {
    fn from(v: f64) -> Self {
        Coefficient::Constant(v)
    }
}

/// Values of the thermodynamic potentials of one phase at one temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoEval {
    pub psi: f64,
    pub eta: f64,
    pub eps: f64,
    pub kappa: f64,
}

/// Across-interface jumps at one temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpEval {
    pub psi_jump: f64,
    pub eta_jump: f64,
    pub eps_jump: f64,
    pub latent: f64,
}

/// One phase: free energy plus viscosity `mu` and heat conductivity `dcond`.
#[derive(Clone)]
pub struct PhaseMaterial {
    model: FreeEnergyModel,
    pub mu: Coefficient,
    pub dcond: Coefficient,
}

impl fmt::Debug for PhaseMaterial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = f.debug_struct("PhaseMaterial");
        match &self.model {
            FreeEnergyModel::LogLinear(p) => s.field("free_energy", p),
            FreeEnergyModel::Custom(_) => s.field("free_energy", &"custom"),
        };
        s.field("mu", &self.mu).field("dcond", &self.dcond).finish()
    }
}

fn check_theta(theta: f64) -> Result<(), ThermoError> {
    if theta > 0.0 && theta.is_finite() {
        Ok(())
    } else {
        Err(ThermoError::NonPositiveTemperature(theta))
    }
}

fn check_positive(name: &str, v: f64) -> Result<(), ThermoError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(ThermoError::InvalidParameter(format!("{name} must be positive, got {v}")))
    }
}

impl PhaseMaterial {
    /// Built-in log-linear phase with constant transport coefficients.
    pub fn log_linear(c: f64, dlin: f64, e0: f64, mu: f64, dcond: f64) -> Result<Self, ThermoError> {
        check_positive("c", c)?;
        check_positive("mu", mu)?;
        check_positive("dcond", dcond)?;
        if !dlin.is_finite() || !e0.is_finite() {
            return Err(ThermoError::InvalidParameter("dlin and e0 must be finite".into()));
        }
        Ok(Self {
            model: FreeEnergyModel::LogLinear(LogLinear { c, dlin, e0 }),
            mu: Coefficient::Constant(mu),
            dcond: Coefficient::Constant(dcond),
        })
    }

    /// A phase with a user-supplied free energy.
    pub fn custom(free_energy: Arc<dyn FreeEnergy>, mu: Coefficient, dcond: Coefficient) -> Self {
        Self { model: FreeEnergyModel::Custom(free_energy), mu, dcond }
    }

    pub fn with_conductivity(mut self, dcond: Coefficient) -> Self {
        self.dcond = dcond;
        self
    }

    pub fn with_viscosity(mut self, mu: Coefficient) -> Self {
        self.mu = mu;
        self
    }

    /// The log-linear parameters, if this phase uses the built-in family.
    pub fn log_linear_params(&self) -> Option<LogLinear> {
        match &self.model {
            FreeEnergyModel::LogLinear(p) => Some(*p),
            FreeEnergyModel::Custom(_) => None,
        }
    }

    fn energy(&self) -> &dyn FreeEnergy {
        match &self.model {
            FreeEnergyModel::LogLinear(p) => p,
            FreeEnergyModel::Custom(f) => f.as_ref(),
        }
    }

    pub fn psi(&self, theta: f64) -> f64 {
        self.energy().psi(theta)
    }

    pub fn dpsi(&self, theta: f64) -> f64 {
        self.energy().dpsi(theta)
    }

    pub fn d2psi(&self, theta: f64) -> f64 {
        self.energy().d2psi(theta)
    }

    pub fn eta(&self, theta: f64) -> f64 {
        match &self.model {
            FreeEnergyModel::LogLinear(p) => p.c * theta.ln() + p.c - p.dlin,
            FreeEnergyModel::Custom(f) => -f.dpsi(theta),
        }
    }

    pub fn eps(&self, theta: f64) -> f64 {
        self.psi(theta) + theta * self.eta(theta)
    }

    pub fn kappa(&self, theta: f64) -> f64 {
        match &self.model {
            FreeEnergyModel::LogLinear(p) => p.c,
            FreeEnergyModel::Custom(f) => -theta * f.d2psi(theta),
        }
    }

    pub fn conductivity(&self, theta: f64) -> f64 {
        self.dcond.eval(theta)
    }

    pub fn viscosity(&self, theta: f64) -> f64 {
        self.mu.eval(theta)
    }

    /// `ψ, η, ε, κ` at `theta`.
    pub fn eval(&self, theta: f64) -> Result<ThermoEval, ThermoError> {
        check_theta(theta)?;
        let psi = self.psi(theta);
        let eta = self.eta(theta);
        Ok(ThermoEval { psi, eta, eps: psi + theta * eta, kappa: self.kappa(theta) })
    }
}

/// Free function form of [`PhaseMaterial::eval`].
pub fn eval_phase(phase: &PhaseMaterial, theta: f64) -> Result<ThermoEval, ThermoError> {
    phase.eval(theta)
}

/// Two phases plus the (constant) surface tension.
#[derive(Debug, Clone)]
pub struct Medium {
    pub phase1: PhaseMaterial,
    pub phase2: PhaseMaterial,
    pub sigma: f64,
}

impl Medium {
    pub fn new(phase1: PhaseMaterial, phase2: PhaseMaterial, sigma: f64) -> Result<Self, ThermoError> {
        check_positive("sigma", sigma)?;
        Ok(Self { phase1, phase2, sigma })
    }

    /// Reference medium: `c₁=c₂=1, d₁=0, d₂=1, e₁=1, e₂=0, σ=1`, unit transport
    /// coefficients. Its free-energy jump is `[[ψ]](θ) = θ − 1`.
    pub fn reference() -> Self {
        Self {
            phase1: PhaseMaterial::log_linear(1.0, 0.0, 1.0, 1.0, 1.0).unwrap(),
            phase2: PhaseMaterial::log_linear(1.0, 1.0, 0.0, 1.0, 1.0).unwrap(),
            sigma: 1.0,
        }
    }

    pub fn phase(&self, index: usize) -> &PhaseMaterial {
        match index {
            1 => &self.phase1,
            2 => &self.phase2,
            _ => panic!("phase index must be 1 or 2, got {index}"),
        }
    }

    /// `h(θ) = [[ψ(θ)]]`.
    pub fn psi_jump(&self, theta: f64) -> f64 {
        self.phase2.psi(theta) - self.phase1.psi(theta)
    }

    /// `h'(θ) = [[ψ'(θ)]]`.
    pub fn dpsi_jump(&self, theta: f64) -> f64 {
        self.phase2.dpsi(theta) - self.phase1.dpsi(theta)
    }

    /// `h''(θ) = [[ψ''(θ)]]`.
    pub fn d2psi_jump(&self, theta: f64) -> f64 {
        self.phase2.d2psi(theta) - self.phase1.d2psi(theta)
    }

    pub fn eps_jump(&self, theta: f64) -> f64 {
        self.phase2.eps(theta) - self.phase1.eps(theta)
    }

    pub fn eta_jump(&self, theta: f64) -> f64 {
        self.phase2.eta(theta) - self.phase1.eta(theta)
    }

    /// `l(θ) = −θ[[η(θ)]]`.
    pub fn latent(&self, theta: f64) -> f64 {
        -theta * self.eta_jump(theta)
    }

    pub fn eval_jumps(&self, theta: f64) -> Result<JumpEval, ThermoError> {
        let a = self.phase1.eval(theta)?;
        let b = self.phase2.eval(theta)?;
        let eta_jump = b.eta - a.eta;
        let latent = -theta * eta_jump;
        let latent_from_psi = theta * self.dpsi_jump(theta);
        let scale = theta * (a.eta.abs() + b.eta.abs()).max(1.0);
        debug_assert!(
            (latent - latent_from_psi).abs() <= 1e-12 * scale,
            "latent heat mismatch: {latent} vs {latent_from_psi}"
        );
        Ok(JumpEval { psi_jump: b.psi - a.psi, eta_jump, eps_jump: b.eps - a.eps, latent })
    }
}

/// Free function form of [`Medium::eval_jumps`].
pub fn eval_jumps(medium: &Medium, theta: f64) -> Result<JumpEval, ThermoError> {
    medium.eval_jumps(theta)
}
