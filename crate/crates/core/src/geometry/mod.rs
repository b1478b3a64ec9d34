//! Interfaces parameterized as normal graphs over a reference sphere `Σ`.
//!
//! A height function `h` on `Σ` describes `Γ = {p + h(p) ν_Σ(p)}`. For the
//! sphere of radius `R_Σ` the Weingarten tensor is `L_Σ = −(1/R_Σ) Id` on the
//! tangent space, so `M₀(h) = (I − hL_Σ)⁻¹ = R_Σ/(R_Σ + h)`, and curvature is
//! signed so that a sphere of radius `R` has `H = −(n−1)/R`.
//!
//! Nonconstant height fields are supported for `n = 2` (circle charts,
//! angular grid of `N` points); in higher dimensions only constant heights
//! are accepted.

pub mod checks;
mod curvature;
mod cutoff;
mod hanzawa;
pub mod periodic;

pub use curvature::{
    curvature, curvature_linearized, curvature_oracle, normal_velocity, polar_curvature, surface_quantities,
    SurfaceQuantities,
};
pub use cutoff::Cutoff;
pub use hanzawa::{hanzawa_map, jacobian_m1, HanzawaJacobian, MAX_CONDITION};

use std::f64::consts::TAU;
use std::fmt;

use thiserror::Error;

use periodic::PeriodicInterpolant;

/// Bound on `|∇_Σ h|_∞` for the extension map to be invertible.
pub const GRADIENT_LIMIT: f64 = 1.0 / 3.0;

/// The smallness conditions on a height field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    /// `|h|_∞ < (1/3) min{a/|χ'|_∞, 1/|L_Σ|_∞}`
    HeightSup,
    /// `|∇_Σ h|_∞ < 1/3`
    GradientSup,
    /// `|h|_∞ |L_Σ|_∞ < 1`, needed for `I − hL_Σ` to be invertible.
    WeingartenInvertibility,
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Bound::HeightSup => "height-sup",
            Bound::GradientSup => "gradient-sup",
            Bound::WeingartenInvertibility => "weingarten-invertibility",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("inadmissible height field: bound {bound} violated ({value} >= {limit})")]
    Inadmissible { bound: Bound, value: f64, limit: f64 },
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("shape mismatch: expected {expected} samples, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("non-positive radius {value} at sample {index}")]
    NonPositiveRadius { index: usize, value: f64 },
    #[error("I + Dxi is near-singular (condition number {0:.3e})")]
    NearSingular(f64),
}

/// Reference sphere `Σ = S_{R_Σ}(0) ⊂ ℝⁿ` with its tubular half-width `a` and
/// cutoff profile.
#[derive(Debug, Clone)]
pub struct SphereChart {
    n: usize,
    r_sigma: f64,
    grid_n: usize,
    a: f64,
    cutoff: Cutoff,
}

impl SphereChart {
    pub fn new(n: usize, r_sigma: f64, grid_n: usize, a: f64) -> Result<Self, GeometryError> {
        if n < 2 {
            return Err(GeometryError::InvalidChart(format!("dimension must be at least 2, got {n}")));
        }
        if !(r_sigma > 0.0 && r_sigma.is_finite()) {
            return Err(GeometryError::InvalidChart(format!("R_sigma must be positive, got {r_sigma}")));
        }
        if grid_n < 16 || !grid_n.is_multiple_of(2) {
            return Err(GeometryError::InvalidChart(format!("grid size must be even and >= 16, got {grid_n}")));
        }
        // a = ½ min{r_Σ, 1/|κ_j|} with r_Σ = R_Σ = 1/|κ_j| on a sphere
        if !(a > 0.0 && a <= 0.5 * r_sigma) {
            return Err(GeometryError::InvalidChart(format!("a must lie in (0, R_sigma/2], got {a}")));
        }
        Ok(Self { n, r_sigma, grid_n, a, cutoff: Cutoff::quintic() })
    }

    /// Chart with the largest allowed tubular half-width `a = R_Σ/2`.
    pub fn with_max_tube(n: usize, r_sigma: f64, grid_n: usize) -> Result<Self, GeometryError> {
        Self::new(n, r_sigma, grid_n, 0.5 * r_sigma)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r_sigma(&self) -> f64 {
        self.r_sigma
    }

    pub fn grid_n(&self) -> usize {
        self.grid_n
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn cutoff(&self) -> &Cutoff {
        &self.cutoff
    }

    /// Angular spacing of the circle grid.
    pub fn d_phi(&self) -> f64 {
        TAU / self.grid_n as f64
    }

    pub fn angles(&self) -> Vec<f64> {
        (0..self.grid_n).map(|j| TAU * j as f64 / self.grid_n as f64).collect()
    }

    /// `|L_Σ|_∞ = 1/R_Σ`.
    pub fn weingarten_sup(&self) -> f64 {
        1.0 / self.r_sigma
    }

    /// `tr L_Σ² = (n−1)/R_Σ²`.
    pub fn weingarten_trace_sq(&self) -> f64 {
        (self.n - 1) as f64 / (self.r_sigma * self.r_sigma)
    }

    /// `(1/3) min{a/|χ'|_∞, 1/|L_Σ|_∞}`.
    pub fn height_limit(&self) -> f64 {
        (1.0 / 3.0) * f64::min(self.a / self.cutoff.derivative_sup(), 1.0 / self.weingarten_sup())
    }

    /// The invertibility condition for the extension map, as a predicate on
    /// `|h|_∞` and `|∇_Σ h|_∞`. Both inequalities are strict.
    pub fn check_bounds(&self, sup_h: f64, sup_grad: f64) -> Result<(), GeometryError> {
        let limit = self.height_limit();
        if !(sup_h < limit) {
            return Err(GeometryError::Inadmissible { bound: Bound::HeightSup, value: sup_h, limit });
        }
        if !(sup_grad < GRADIENT_LIMIT) {
            return Err(GeometryError::Inadmissible {
                bound: Bound::GradientSup,
                value: sup_grad,
                limit: GRADIENT_LIMIT,
            });
        }
        Ok(())
    }

    pub fn check_hanzawa(&self, h: &HeightField) -> Result<(), GeometryError> {
        self.check_bounds(h.sup_h, h.sup_grad)
    }

    /// `|h|_∞ |L_Σ|_∞ < 1`.
    pub fn check_invertible(&self, h: &HeightField) -> Result<(), GeometryError> {
        let value = h.sup_h * self.weingarten_sup();
        if !(value < 1.0) {
            return Err(GeometryError::Inadmissible { bound: Bound::WeingartenInvertibility, value, limit: 1.0 });
        }
        Ok(())
    }

    pub fn constant_height(&self, c: f64) -> Result<HeightField, GeometryError> {
        if !c.is_finite() {
            return Err(GeometryError::InvalidChart("height must be finite".into()));
        }
        Ok(HeightField { repr: HeightRepr::Constant(c), sup_h: c.abs(), sup_grad: 0.0 })
    }

    /// Sampled height on the circle grid (`n = 2` only).
    pub fn sampled_height(&self, values: Vec<f64>) -> Result<HeightField, GeometryError> {
        if self.n != 2 {
            return Err(GeometryError::Unsupported(format!(
                "nonconstant height fields need n = 2, chart has n = {}",
                self.n
            )));
        }
        if values.len() != self.grid_n {
            return Err(GeometryError::ShapeMismatch { expected: self.grid_n, got: values.len() });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(GeometryError::InvalidChart("height samples must be finite".into()));
        }
        let sup_h = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let sup_grad = periodic::d1(&values, self.d_phi()).iter().fold(0.0f64, |m, v| m.max(v.abs())) / self.r_sigma;
        let interp = PeriodicInterpolant::new(&values);
        Ok(HeightField { repr: HeightRepr::Sampled { values, interp }, sup_h, sup_grad })
    }

    pub fn height_from_fn(&self, f: impl Fn(f64) -> f64) -> Result<HeightField, GeometryError> {
        self.sampled_height(self.angles().into_iter().map(f).collect())
    }

    /// Points of `Σ` (as unit normals) at which surface fields are reported:
    /// the angular grid for `n = 2`, the `2n` points `±e_i` otherwise.
    pub fn sample_normals(&self) -> Vec<Vec<f64>> {
        if self.n == 2 {
            self.angles().into_iter().map(|t| vec![t.cos(), t.sin()]).collect()
        } else {
            let mut out = Vec::with_capacity(2 * self.n);
            for i in 0..self.n {
                for s in [1.0, -1.0] {
                    let mut e = vec![0.0; self.n];
                    e[i] = s;
                    out.push(e);
                }
            }
            out
        }
    }
}

#[derive(Debug, Clone)]
enum HeightRepr {
    Constant(f64),
    Sampled { values: Vec<f64>, interp: PeriodicInterpolant },
}

/// Height function on `Σ` together with its sup norms.
#[derive(Debug, Clone)]
pub struct HeightField {
    repr: HeightRepr,
    pub sup_h: f64,
    /// `|∇_Σ h|_∞`, from fourth-order differences of the samples.
    pub sup_grad: f64,
}

impl HeightField {
    pub fn constant_value(&self) -> Option<f64> {
        match self.repr {
            HeightRepr::Constant(c) => Some(c),
            HeightRepr::Sampled { .. } => None,
        }
    }

    pub fn samples(&self) -> Option<&[f64]> {
        match &self.repr {
            HeightRepr::Constant(_) => None,
            HeightRepr::Sampled { values, .. } => Some(values),
        }
    }

    /// `h` at the point of `Σ` with unit normal `normal`; nonconstant fields
    /// are interpolated trigonometrically in the polar angle.
    pub fn value_at(&self, normal: &[f64]) -> f64 {
        match &self.repr {
            HeightRepr::Constant(c) => *c,
            HeightRepr::Sampled { interp, .. } => interp.value(normal[1].atan2(normal[0])),
        }
    }

    /// `∂h/∂φ` at polar angle `phi` (zero for constant fields).
    pub fn angular_derivative(&self, phi: f64) -> f64 {
        match &self.repr {
            HeightRepr::Constant(_) => 0.0,
            HeightRepr::Sampled { interp, .. } => interp.derivative(phi),
        }
    }

    /// Scale the field by `s`.
    fn scaled(&self, chart: &SphereChart, s: f64) -> Result<HeightField, GeometryError> {
        match &self.repr {
            HeightRepr::Constant(c) => chart.constant_height(s * c),
            HeightRepr::Sampled { values, .. } => chart.sampled_height(values.iter().map(|v| s * v).collect()),
        }
    }
}

impl SphereChart {
    /// `s·h` as a height field on this chart.
    pub fn scale_height(&self, h: &HeightField, s: f64) -> Result<HeightField, GeometryError> {
        h.scaled(self, s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chart_validation() {
        assert!(SphereChart::new(1, 1.0, 64, 0.5).is_err());
        assert!(SphereChart::new(2, 0.0, 64, 0.5).is_err());
        assert!(SphereChart::new(2, 1.0, 15, 0.5).is_err());
        assert!(SphereChart::new(2, 1.0, 18, 0.5).is_ok());
        assert!(SphereChart::new(2, 1.0, 17, 0.5).is_err());
        assert!(SphereChart::new(2, 1.0, 64, 0.51).is_err());
        assert!(SphereChart::new(3, 2.0, 16, 1.0).is_ok());
    }

    #[test]
    fn admissibility_is_strict_at_the_boundary() {
        let chart = SphereChart::new(2, 1.0, 64, 0.5).unwrap();
        let lim = (1.0 / 3.0) * f64::min(0.5 / (45.0 / 8.0), 1.0 / 1.0);
        assert_eq!(chart.height_limit(), lim);
        assert!(chart.check_bounds(lim, 0.0).is_err());
        assert!(chart.check_bounds(lim.next_down(), 0.0).is_ok());
        let err = chart.check_bounds(0.0, 1.0 / 3.0).unwrap_err();
        assert!(matches!(err, GeometryError::Inadmissible { bound: Bound::GradientSup, .. }));
        assert!(chart.check_bounds(0.0, (1.0f64 / 3.0).next_down()).is_ok());
    }

    #[test]
    fn three_d_rejects_sampled_fields() {
        let chart = SphereChart::new(3, 2.0, 64, 1.0).unwrap();
        assert!(matches!(chart.sampled_height(vec![0.0; 64]), Err(GeometryError::Unsupported(_))));
        assert_eq!(chart.sample_normals().len(), 6);
    }

    #[test]
    fn sampled_height_norms() {
        let chart = SphereChart::new(2, 2.0, 256, 1.0).unwrap();
        let h = chart.height_from_fn(|t| 0.1 * t.cos()).unwrap();
        assert!((h.sup_h - 0.1).abs() < 1e-12);
        // |∇_Σ h| = |h'|/R = 0.1/2
        assert!((h.sup_grad - 0.05).abs() < 1e-6);
        assert!(matches!(chart.sampled_height(vec![0.0; 10]), Err(GeometryError::ShapeMismatch { .. })));
    }
}
