//! Convergence and identity checks of the curvature and extension-map code
//! against independent references, reported as table rows.

use super::{curvature, curvature_linearized, curvature_oracle, jacobian_m1, GeometryError, SphereChart};

/// Grid ladder of the convergence families.
pub const LADDER: [usize; 4] = [64, 128, 256, 512];
/// Center offset of the shifted unit circle.
pub const OFFSET: f64 = 0.1;
/// Semi-axes of the ellipse family and the radius of its chart.
pub const ELLIPSE_AXES: (f64, f64) = (1.0, 1.2);
pub const ELLIPSE_CHART_RADIUS: f64 = 1.1;
/// Amplitude used for the linearization check.
pub const LINEARIZATION_EPS: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    pub test: &'static str,
    pub grid_n: usize,
    pub sup_error: f64,
    /// `log₂(e_{N/2}/e_N)` for rows of a doubling ladder after the first.
    pub observed_order: Option<f64>,
}

impl CheckRow {
    pub fn csv_row(&self) -> String {
        let order = self.observed_order.map(|p| format!("{p:.16e}")).unwrap_or_default();
        format!("{},{},{:.16e},{}", self.test, self.grid_n, self.sup_error, order)
    }
}

pub const CHECK_CSV_HEADER: &str = "test,grid_N,sup_error,observed_order";

fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Sup error of `curvature()` against the polar oracle for the curve
/// `r(φ)` drawn on a circle chart of radius `r_chart`.
pub fn oracle_error(r_chart: f64, grid_n: usize, r: impl Fn(f64) -> f64) -> Result<f64, GeometryError> {
    let chart = SphereChart::with_max_tube(2, r_chart, grid_n)?;
    let radii: Vec<f64> = chart.angles().into_iter().map(&r).collect();
    let h = chart.sampled_height(radii.iter().map(|v| v - r_chart).collect())?;
    Ok(sup_diff(&curvature(&chart, &h)?, &curvature_oracle(&radii)?))
}

/// Polar radius of the unit circle centered at `(δ, 0)`.
pub fn shifted_circle(delta: f64) -> impl Fn(f64) -> f64 {
    move |phi: f64| delta * phi.cos() + (1.0 - (delta * phi.sin()).powi(2)).sqrt()
}

/// Polar radius of the ellipse with semi-axes `a` (along x) and `b`.
pub fn ellipse(a: f64, b: f64) -> impl Fn(f64) -> f64 {
    move |phi: f64| a * b / ((b * phi.cos()).powi(2) + (a * phi.sin()).powi(2)).sqrt()
}

fn ladder(test: &'static str, r_chart: f64, r: &dyn Fn(f64) -> f64) -> Result<Vec<CheckRow>, GeometryError> {
    let mut rows: Vec<CheckRow> = Vec::with_capacity(LADDER.len());
    for &n in &LADDER {
        let e = oracle_error(r_chart, n, r)?;
        let observed_order = rows.last().map(|p| (p.sup_error / e).log2());
        rows.push(CheckRow { test, grid_n: n, sup_error: e, observed_order });
    }
    Ok(rows)
}

/// Sup distance between a Richardson-extrapolated difference quotient of
/// `curvature` at amplitude `eps` and `curvature_linearized`, for the height
/// `cos 3φ + 0.5 sin 2φ` on a chart of radius `r_sigma`.
pub fn linearization_error(r_sigma: f64, grid_n: usize, eps: f64) -> Result<f64, GeometryError> {
    let chart = SphereChart::with_max_tube(2, r_sigma, grid_n)?;
    let h = chart.height_from_fn(|p| (3.0 * p).cos() + 0.5 * (2.0 * p).sin())?;
    let base = curvature(&chart, &chart.constant_height(0.0)?)?;
    let quotient = |s: f64| -> Result<Vec<f64>, GeometryError> {
        let k = curvature(&chart, &chart.scale_height(&h, s)?)?;
        Ok(k.iter().zip(&base).map(|(a, b)| (a - b) / s).collect())
    };
    let full = quotient(eps)?;
    let half = quotient(0.5 * eps)?;
    let slope: Vec<f64> = half.iter().zip(&full).map(|(h, f)| 2.0 * h - f).collect();
    Ok(sup_diff(&slope, &curvature_linearized(&chart, &h)?))
}

/// Largest `‖(I − M₁ᵀ)(I + Dξ) − I‖` over a fixed set of points in the
/// tube for a small two-mode height field.
pub fn jacobian_identity_error(r_sigma: f64, grid_n: usize, a: f64) -> Result<f64, GeometryError> {
    let chart = SphereChart::new(2, r_sigma, grid_n, a)?;
    // sup|h| = 1.5 amp, half the height limit
    let amp = chart.height_limit() / 3.0;
    let h = chart.height_from_fn(|p| amp * ((2.0 * p).cos() + 0.5 * (3.0 * p).sin()))?;
    let mut worst: f64 = 0.0;
    for k in 0..8 {
        let phi = 0.7 + k as f64 * std::f64::consts::TAU / 8.0;
        for s in [-0.5, 0.0, 0.25, 0.6] {
            let rho = r_sigma + s * a;
            let j = jacobian_m1(&chart, &h, &[rho * phi.cos(), rho * phi.sin()])?;
            worst = worst.max(j.identity_residual());
        }
    }
    Ok(worst)
}

/// Every check: both convergence ladders, the constant-height row, the
/// linearization row and the Jacobian identity row. `r_sigma`, `grid_n` and
/// `a` set the chart of the last three.
pub fn run_checks(r_sigma: f64, grid_n: usize, a: f64) -> Result<Vec<CheckRow>, GeometryError> {
    let mut rows = ladder("off-center-circle", 1.0, &shifted_circle(OFFSET))?;
    let (ea, eb) = ELLIPSE_AXES;
    rows.extend(ladder("ellipse", ELLIPSE_CHART_RADIUS, &ellipse(ea, eb))?);

    let chart = SphereChart::new(2, r_sigma, grid_n, a)?;
    let c = 0.25 * r_sigma;
    let k = curvature(&chart, &chart.constant_height(c)?)?;
    let exact = -1.0 / (r_sigma + c);
    rows.push(CheckRow {
        test: "constant-height",
        grid_n,
        sup_error: k.iter().map(|v| (v - exact).abs()).fold(0.0, f64::max),
        observed_order: None,
    });
    rows.push(CheckRow {
        test: "linearization",
        grid_n,
        sup_error: linearization_error(r_sigma, grid_n, LINEARIZATION_EPS)?,
        observed_order: None,
    });
    rows.push(CheckRow {
        test: "jacobian-identity",
        grid_n,
        sup_error: jacobian_identity_error(r_sigma, grid_n, a)?,
        observed_order: None,
    });
    Ok(rows)
}
