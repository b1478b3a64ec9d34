use log::{debug, info, warn};

use super::diagnostics::mean_temperature;
use super::{diagnostics, step, DiagnosticsRecord, RadialConfig, RadialState, StefanError};
use crate::ball_volume;
use crate::equilibria::{EquilibriumProblem, EquilibriumState};

/// Summary of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub steps: usize,
    pub t_final: f64,
    pub initial_energy: f64,
    /// `max_t |E(t) − E(0)| / |E(0)|` over every step.
    pub max_energy_drift: f64,
    pub initial_entropy: f64,
    /// Smallest per-step entropy change `Φ(t_{k+1}) − Φ(t_k)`.
    pub min_entropy_increment: f64,
    /// Largest `|ΔΦ/Δt − P|` over the steps, with `P` the trapezoidal
    /// average of the production at both ends of the step.
    pub max_budget_residual: f64,
    /// Largest Gibbs–Thomson residual `|[[ψ(θ_Γ)]] − σ(n−1)/R|`.
    pub max_gt_residual: f64,
    pub terminal_theta_mean: f64,
    pub terminal_r: f64,
    /// Stable equilibrium predicted for `E₀ = E(0)`, if any.
    pub predicted: Option<EquilibriumState>,
    pub abort: Option<StefanError>,
}

impl RunReport {
    /// Relative deviation of the terminal `(θ̄, R)` from the prediction.
    pub fn terminal_deviation(&self) -> Option<(f64, f64)> {
        self.predicted.map(|p| {
            (
                (self.terminal_theta_mean - p.theta).abs() / p.theta.abs(),
                (self.terminal_r - p.radius).abs() / p.radius.abs(),
            )
        })
    }

    /// `key = value` lines.
    pub fn to_text(&self) -> String {
        let f = |v: f64| format!("{v:.16e}");
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(&v);
            out.push('\n');
        };
        kv("status", if self.abort.is_some() { "aborted".into() } else { "completed".into() });
        kv("steps", self.steps.to_string());
        kv("t_final", f(self.t_final));
        kv("initial_energy", f(self.initial_energy));
        kv("max_energy_drift", f(self.max_energy_drift));
        kv("initial_entropy", f(self.initial_entropy));
        kv("min_entropy_increment", f(self.min_entropy_increment));
        kv("max_budget_residual", f(self.max_budget_residual));
        kv("max_gt_residual", f(self.max_gt_residual));
        kv("terminal_theta_mean", f(self.terminal_theta_mean));
        kv("terminal_R", f(self.terminal_r));
        match self.predicted {
            Some(p) => {
                kv("predicted_theta", f(p.theta));
                kv("predicted_R", f(p.radius));
            }
            None => {
                kv("predicted_theta", "none".into());
                kv("predicted_R", "none".into());
            }
        }
        match &self.abort {
            Some(e) => {
                kv("abort_reason", e.slug().into());
                kv("abort_message", e.to_string());
            }
            None => kv("abort_reason", "none".into()),
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub records: Vec<DiagnosticsRecord>,
    pub report: RunReport,
    /// Last state reached (the state before the failed step on abort).
    pub state: RadialState,
}

/// Run from the configured initial data to `t_end`.
pub fn run(config: &RadialConfig) -> Result<RunOutcome, StefanError> {
    let state = config.initial_state()?;
    run_from(config, state)
}

/// Stable equilibrium for the energy `e0` nearest to radius `r`.
fn predict(config: &RadialConfig, e0: f64, r: f64) -> Option<EquilibriumState> {
    let problem = EquilibriumProblem::new(
        config.medium.clone(),
        config.n,
        ball_volume(config.n, config.r_out),
        1,
        config.r_out,
        e0,
    )
    .ok()?
    .with_theta_range(EquilibriumProblem::DEFAULT_THETA_MIN, config.theta_max)
    .ok()?;
    problem
        .solve()
        .into_iter()
        .filter(|s| s.stable)
        .min_by(|a, b| (a.radius - r).abs().total_cmp(&(b.radius - r).abs()))
}

fn gt_residual(config: &RadialConfig, state: &RadialState) -> f64 {
    let target = config.medium.sigma * (config.n - 1) as f64 / state.r;
    (config.medium.psi_jump(state.theta_gamma) - target).abs()
}

/// Run from `state` (for example a resumed checkpoint) to `t_end`.
pub fn run_from(config: &RadialConfig, mut state: RadialState) -> Result<RunOutcome, StefanError> {
    config.validate()?;
    if state.theta1.len() != config.n1 || state.theta2.len() != config.n2 {
        return Err(StefanError::InvalidConfig(format!(
            "state has {}+{} cells, configuration expects {}+{}",
            state.theta1.len(),
            state.theta2.len(),
            config.n1,
            config.n2
        )));
    }
    let first = diagnostics(&state, config);
    let e0 = first.energy;
    let mut records = vec![first];
    let mut prev = first;
    let mut report = RunReport {
        steps: 0,
        t_final: state.t,
        initial_energy: e0,
        max_energy_drift: 0.0,
        initial_entropy: first.entropy,
        min_entropy_increment: f64::INFINITY,
        max_budget_residual: 0.0,
        max_gt_residual: gt_residual(config, &state),
        terminal_theta_mean: 0.0,
        terminal_r: state.r,
        predicted: None,
        abort: None,
    };
    let horizon_slack = 1e-12 * config.t_end.max(1.0);
    while state.t < config.t_end - horizon_slack {
        let dt = config.dt.min(config.t_end - state.t);
        match step(&state, config, dt) {
            Ok((next, info)) => {
                state = next;
                report.steps += 1;
                let rec = diagnostics(&state, config);
                report.max_energy_drift = report.max_energy_drift.max((rec.energy - e0).abs() / e0.abs());
                let d_phi = rec.entropy - prev.entropy;
                report.min_entropy_increment = report.min_entropy_increment.min(d_phi);
                let budget = (d_phi / info.dt - 0.5 * (rec.production + prev.production)).abs();
                report.max_budget_residual = report.max_budget_residual.max(budget);
                report.max_gt_residual = report.max_gt_residual.max(gt_residual(config, &state));
                if report.steps.is_multiple_of(config.output_every) {
                    records.push(rec);
                }
                if report.steps.is_multiple_of(10_000) {
                    debug!("t = {:.6}, R = {:.12}, E drift = {:.3e}", state.t, state.r, report.max_energy_drift);
                }
                prev = rec;
            }
            Err(e) if e.is_guard() => {
                warn!("run aborted at t = {}: {e}", state.t);
                report.abort = Some(e);
                break;
            }
            Err(e) => return Err(e),
        }
    }
    if records.last().map(|r| r.t) != Some(prev.t) {
        records.push(prev);
    }
    if report.steps == 0 {
        report.min_entropy_increment = 0.0;
    }
    report.t_final = state.t;
    report.terminal_r = state.r;
    report.terminal_theta_mean = mean_temperature(&state, config);
    report.predicted = predict(config, e0, state.r);
    info!(
        "run finished: {} steps, t = {}, R = {}, energy drift {:.3e}",
        report.steps, report.t_final, report.terminal_r, report.max_energy_drift
    );
    Ok(RunOutcome { records, report, state })
}
