use super::{interface_gradients, stefan_flux, RadialConfig, RadialState};
use crate::unit_sphere_area;

/// Column names of the simulation CSV, in order.
pub const CSV_HEADER: &str = "t,R,theta_gamma,j,V,E,Phi,production";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub r: f64,
    pub theta_gamma: f64,
    pub j: f64,
    pub v: f64,
    /// Total energy `∫ ε(θ) + σ|Γ|`.
    pub energy: f64,
    /// Total entropy `∫ η(θ)`.
    pub entropy: f64,
    /// Entropy production `∫ d(θ)|∇θ|²/θ²`.
    pub production: f64,
}

impl DiagnosticsRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            self.t, self.r, self.theta_gamma, self.j, self.v, self.energy, self.entropy, self.production
        )
    }
}

/// Energy and entropy as cell sums `Σ f(θ_i)|C_i|` over the finite volumes
/// (the same cells whose balance the scheme conserves); the entropy
/// production by the trapezoidal rule between cell faces, with face
/// gradients from the scheme's fluxes.
pub fn diagnostics(state: &RadialState, config: &RadialConfig) -> DiagnosticsRecord {
    let med = &config.medium;
    let inner = config.inner_grid(state.r);
    let outer = config.outer_grid(state.r);
    let v1 = inner.volumes();
    let v2 = outer.volumes();
    let cell_sum = |vals: &[f64], vols: &[f64], f: &dyn Fn(f64) -> f64| -> f64 {
        vals.iter().zip(vols).map(|(&t, &v)| f(t) * v).sum()
    };
    let surface = med.sigma * unit_sphere_area(config.n) * state.r.powi(config.n as i32 - 1);
    let energy = cell_sum(&state.theta1, &v1, &|t| med.phase1.eps(t))
        + cell_sum(&state.theta2, &v2, &|t| med.phase2.eps(t))
        + surface;
    let entropy =
        cell_sum(&state.theta1, &v1, &|t| med.phase1.eta(t)) + cell_sum(&state.theta2, &v2, &|t| med.phase2.eta(t));

    let (g1, g2) = interface_gradients(state, config);
    let tg = state.theta_gamma;
    // integrand d|∂_rθ|²/θ² at every face
    let face_density = |theta: &[f64], w: f64, d: &dyn Fn(f64) -> f64, g_iface: f64, inner_side: bool| -> Vec<f64> {
        let n = theta.len();
        let mut out = vec![0.0; n + 1];
        for k in 1..n {
            let tf = 0.5 * (theta[k - 1] + theta[k]);
            let g = (theta[k] - theta[k - 1]) / w;
            out[k] = d(tf) * g * g / (tf * tf);
        }
        let iface = d(tg) * g_iface * g_iface / (tg * tg);
        if inner_side {
            out[n] = iface;
        } else {
            out[0] = iface;
        }
        out
    };
    let trapezoid = |dens: &[f64], vols: &[f64]| -> f64 {
        vols.iter().enumerate().map(|(i, v)| 0.5 * (dens[i] + dens[i + 1]) * v).sum()
    };
    let d1 = |t: f64| med.phase1.conductivity(t);
    let d2 = |t: f64| med.phase2.conductivity(t);
    let production = trapezoid(&face_density(&state.theta1, inner.width(), &d1, g1, true), &v1)
        + trapezoid(&face_density(&state.theta2, outer.width(), &d2, g2, false), &v2);

    let (j, v) = stefan_flux(med, tg, g1, g2);
    DiagnosticsRecord { t: state.t, r: state.r, theta_gamma: tg, j, v, energy, entropy, production }
}

/// Volume-averaged temperature.
pub fn mean_temperature(state: &RadialState, config: &RadialConfig) -> f64 {
    let v1 = config.inner_grid(state.r).volumes();
    let v2 = config.outer_grid(state.r).volumes();
    let total: f64 = v1.iter().chain(&v2).sum();
    let weighted: f64 = state.theta1.iter().zip(&v1).map(|(t, v)| t * v).sum::<f64>()
        + state.theta2.iter().zip(&v2).map(|(t, v)| t * v).sum::<f64>();
    weighted / total
}
