//! The Hanzawa extension `Ξ_h(x) = x + χ(d_Σ(x)/a) h(Π_Σ(x)) ν_Σ(Π_Σ(x))` and
//! the tensor `M₁(h)` defined by `[DΞ_h]⁻¹ = I − M₁(h)ᵀ`.
//!
//! For the sphere `d_Σ(x) = |x| − R_Σ` and `ν_Σ(Π_Σ(x)) = x/|x|`.

use nalgebra::DMatrix;

use super::{GeometryError, HeightField, SphereChart};

/// Largest accepted condition number of `I + Dξ_h`.
pub const MAX_CONDITION: f64 = 1e3;
/// Finite-difference step for `Dξ_h`, relative to the tube half-width `a`.
const FD_STEP: f64 = 1e-5;

fn check_point(chart: &SphereChart, x: &[f64]) -> Result<(), GeometryError> {
    if x.len() != chart.n() {
        return Err(GeometryError::ShapeMismatch { expected: chart.n(), got: x.len() });
    }
    Ok(())
}

/// `ξ_h(x) = Ξ_h(x) − x`, without admissibility checks.
fn displacement(chart: &SphereChart, h: &HeightField, x: &[f64]) -> Vec<f64> {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let chi = chart.cutoff().value((norm - chart.r_sigma()) / chart.a());
    if chi == 0.0 {
        return vec![0.0; x.len()];
    }
    let nu: Vec<f64> = x.iter().map(|v| v / norm).collect();
    let s = chi * h.value_at(&nu);
    nu.iter().map(|v| s * v).collect()
}

pub fn hanzawa_map(chart: &SphereChart, h: &HeightField, x: &[f64]) -> Result<Vec<f64>, GeometryError> {
    check_point(chart, x)?;
    chart.check_hanzawa(h)?;
    Ok(x.iter().zip(displacement(chart, h, x)).map(|(a, b)| a + b).collect())
}

#[derive(Debug, Clone)]
pub struct HanzawaJacobian {
    /// `Dξ_h(x)`, by central differences.
    pub dxi: DMatrix<f64>,
    /// `M₁(h)(x) = ([I + Dξ_h]⁻¹ Dξ_h)ᵀ`.
    pub m1: DMatrix<f64>,
    /// Condition number of `I + Dξ_h` in the spectral norm.
    pub condition: f64,
}

impl HanzawaJacobian {
    /// `‖(I − M₁ᵀ)(I + Dξ_h) − I‖` in the Frobenius norm.
    pub fn identity_residual(&self) -> f64 {
        let n = self.dxi.nrows();
        let id = DMatrix::<f64>::identity(n, n);
        ((&id - self.m1.transpose()) * (&id + &self.dxi) - &id).norm()
    }
}

pub fn jacobian_m1(chart: &SphereChart, h: &HeightField, x: &[f64]) -> Result<HanzawaJacobian, GeometryError> {
    check_point(chart, x)?;
    chart.check_hanzawa(h)?;
    let n = chart.n();
    let step = FD_STEP * chart.a();
    let mut dxi = DMatrix::<f64>::zeros(n, n);
    let mut probe = x.to_vec();
    for k in 0..n {
        probe[k] = x[k] + step;
        let plus = displacement(chart, h, &probe);
        probe[k] = x[k] - step;
        let minus = displacement(chart, h, &probe);
        probe[k] = x[k];
        for i in 0..n {
            dxi[(i, k)] = (plus[i] - minus[i]) / (2.0 * step);
        }
    }
    let jac = DMatrix::<f64>::identity(n, n) + &dxi;
    let sv = jac.singular_values();
    let smax = sv.max();
    let smin = sv.min();
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !(condition <= MAX_CONDITION) {
        return Err(GeometryError::NearSingular(condition));
    }
    let inv = jac.try_inverse().ok_or(GeometryError::NearSingular(condition))?;
    let m1 = (inv * &dxi).transpose();
    Ok(HanzawaJacobian { dxi, m1, condition })
}
