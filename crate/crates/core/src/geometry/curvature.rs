//! Normal, curvature and normal velocity of `Γ = {p + h(p)ν_Σ(p)}`.
//!
//! On the circle `S_R ⊂ ℝ²` with tangent `τ = (−sin φ, cos φ)` everything
//! reduces to scalar components along `τ`:
//!
//! ```text
//! M₀ = R/(R+h),   α = a τ,  a = h'/(R+h),   β = (1+a²)^{−1/2}
//! ∇_Σ α (tangential part) = a'/R
//! H = β { M₀(L + a'/R) − β² M₀ a² a'/R },   L = −1/R
//! ```
//!
//! with `'` = `d/dφ`. Angular derivatives of the samples use fourth-order
//! periodic differences.

use super::periodic::{d1, d2, spectral_derivatives};
use super::{GeometryError, HeightField, SphereChart};

/// Pointwise surface fields at the chart's sample points.
#[derive(Debug, Clone)]
pub struct SurfaceQuantities {
    /// Sample points on `Σ`, given by their unit normals `ν_Σ`.
    pub normals: Vec<Vec<f64>>,
    pub nu_gamma: Vec<Vec<f64>>,
    /// `α(h) = M₀(h)∇_Σ h` as an ambient vector.
    pub alpha: Vec<Vec<f64>>,
    pub beta: Vec<f64>,
    /// `M₀(h)` is a multiple of the tangential identity on a sphere; this is
    /// that multiple.
    pub m0: Vec<f64>,
}

#[derive(Debug, Clone, Copy)]
struct CircleTerms {
    h: f64,
    dh: f64,
    d2h: f64,
}

/// Values and angular derivatives of `h` at the chart samples. Constant
/// fields produce exact zeros.
fn circle_terms(chart: &SphereChart, h: &HeightField) -> Vec<CircleTerms> {
    match h.samples() {
        Some(values) => {
            let dphi = chart.d_phi();
            let dh = d1(values, dphi);
            let d2h = d2(values, dphi);
            values.iter().zip(dh).zip(d2h).map(|((&h, dh), d2h)| CircleTerms { h, dh, d2h }).collect()
        }
        None => {
            let c = h.constant_value().unwrap_or(0.0);
            vec![CircleTerms { h: c, dh: 0.0, d2h: 0.0 }; chart.grid_n()]
        }
    }
}

pub fn surface_quantities(chart: &SphereChart, h: &HeightField) -> Result<SurfaceQuantities, GeometryError> {
    chart.check_invertible(h)?;
    let r = chart.r_sigma();
    let normals = chart.sample_normals();
    if chart.n() == 2 {
        let terms = circle_terms(chart, h);
        let mut out = SurfaceQuantities {
            normals: Vec::with_capacity(terms.len()),
            nu_gamma: Vec::with_capacity(terms.len()),
            alpha: Vec::with_capacity(terms.len()),
            beta: Vec::with_capacity(terms.len()),
            m0: Vec::with_capacity(terms.len()),
        };
        for (nu, t) in normals.into_iter().zip(terms) {
            let tau = [-nu[1], nu[0]];
            let a = t.dh / (r + t.h);
            let beta = 1.0 / a.hypot(1.0);
            out.alpha.push(vec![a * tau[0], a * tau[1]]);
            out.nu_gamma.push(vec![beta * (nu[0] - a * tau[0]), beta * (nu[1] - a * tau[1])]);
            out.beta.push(beta);
            out.m0.push(r / (r + t.h));
            out.normals.push(nu);
        }
        Ok(out)
    } else {
        let c = h.constant_value().ok_or_else(|| unsupported(chart))?;
        let k = normals.len();
        Ok(SurfaceQuantities {
            nu_gamma: normals.clone(),
            alpha: vec![vec![0.0; chart.n()]; k],
            beta: vec![1.0; k],
            m0: vec![r / (r + c); k],
            normals,
        })
    }
}

fn unsupported(chart: &SphereChart) -> GeometryError {
    GeometryError::Unsupported(format!("nonconstant height fields need n = 2, chart has n = {}", chart.n()))
}

/// Mean curvature `H_Γ(h)` at the chart samples; a sphere of radius `R` has
/// `H = −(n−1)/R`.
pub fn curvature(chart: &SphereChart, h: &HeightField) -> Result<Vec<f64>, GeometryError> {
    chart.check_invertible(h)?;
    let r = chart.r_sigma();
    let n = chart.n();
    if let Some(c) = h.constant_value() {
        let k = chart.sample_normals().len();
        return Ok(vec![-((n - 1) as f64) / (r + c); k]);
    }
    if n != 2 {
        return Err(unsupported(chart));
    }
    let l = -1.0 / r;
    Ok(circle_terms(chart, h)
        .into_iter()
        .map(|t| {
            let rh = r + t.h;
            let m0 = r / rh;
            let a = t.dh / rh;
            let da = t.d2h / rh - t.dh * t.dh / (rh * rh);
            let grad_alpha = da / r;
            let beta = 1.0 / a.hypot(1.0);
            beta * (m0 * (l + grad_alpha) - beta * beta * m0 * a * a * grad_alpha)
        })
        .collect())
}

/// `H'_Γ(0)h = (tr L_Σ²)h + Δ_Σ h`; on the circle `(h + h'')/R²`.
pub fn curvature_linearized(chart: &SphereChart, h: &HeightField) -> Result<Vec<f64>, GeometryError> {
    let r = chart.r_sigma();
    if let Some(c) = h.constant_value() {
        let k = chart.sample_normals().len();
        return Ok(vec![chart.weingarten_trace_sq() * c; k]);
    }
    if chart.n() != 2 {
        return Err(unsupported(chart));
    }
    Ok(circle_terms(chart, h).into_iter().map(|t| (t.h + t.d2h) / (r * r)).collect())
}

/// Curvature of the polar curve `r(φ)` from `r`, `r'` and `r''`, signed so that
/// a circle of radius `ρ` has `−1/ρ`.
pub fn polar_curvature(r: f64, dr: f64, d2r: f64) -> f64 {
    -(r * r + 2.0 * dr * dr - r * d2r) / (r * r + dr * dr).powf(1.5)
}

/// Reference curvature of the closed curve `r(φ_j)` sampled on the uniform
/// grid `φ_j = 2πj/N`, with spectrally computed derivatives.
pub fn curvature_oracle(r: &[f64]) -> Result<Vec<f64>, GeometryError> {
    if let Some((index, &value)) = r.iter().enumerate().find(|(_, v)| !(**v > 0.0)) {
        return Err(GeometryError::NonPositiveRadius { index, value });
    }
    let (dr, d2r) = spectral_derivatives(r);
    Ok(r.iter().zip(dr).zip(d2r).map(|((&r, dr), d2r)| polar_curvature(r, dr, d2r)).collect())
}

/// `V_Γ = β(h) ∂_t h`.
pub fn normal_velocity(beta: &[f64], dh_dt: &[f64]) -> Result<Vec<f64>, GeometryError> {
    if beta.len() != dh_dt.len() {
        return Err(GeometryError::ShapeMismatch { expected: beta.len(), got: dh_dt.len() });
    }
    Ok(beta.iter().zip(dh_dt).map(|(b, v)| b * v).collect())
}
