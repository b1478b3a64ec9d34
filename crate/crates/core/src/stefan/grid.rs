use crate::{unit_ball_volume, unit_sphere_area};

/// Uniform radial cells on `[lo, hi]` measured with `r^{n−1} dr`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseGrid {
    pub n: usize,
    pub lo: f64,
    pub hi: f64,
    faces: Vec<f64>,
}

impl PhaseGrid {
    pub fn new(n: usize, lo: f64, hi: f64, cells: usize) -> Self {
        let w = (hi - lo) / cells as f64;
        let mut faces: Vec<f64> = (0..=cells).map(|k| lo + w * k as f64).collect();
        faces[0] = lo;
        faces[cells] = hi;
        Self { n, lo, hi, faces }
    }

    pub fn cells(&self) -> usize {
        self.faces.len() - 1
    }

    pub fn width(&self) -> f64 {
        (self.hi - self.lo) / self.cells() as f64
    }

    pub fn faces(&self) -> &[f64] {
        &self.faces
    }

    pub fn centers(&self) -> Vec<f64> {
        self.faces.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    /// `ω_n rⁿ/n` at every face.
    pub fn enclosed_volumes(&self) -> Vec<f64> {
        let c = unit_ball_volume(self.n);
        self.faces.iter().map(|r| c * r.powi(self.n as i32)).collect()
    }

    pub fn volumes(&self) -> Vec<f64> {
        self.enclosed_volumes().windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// `ω_n r^{n−1}` at every face.
    pub fn areas(&self) -> Vec<f64> {
        let c = unit_sphere_area(self.n);
        self.faces.iter().map(|r| c * r.powi(self.n as i32 - 1)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn volumes_tile_the_shell() {
        let g = PhaseGrid::new(3, 2.0, 3.0, 16);
        let total: f64 = g.volumes().iter().sum();
        assert!((total - 4.0 * PI / 3.0 * 19.0).abs() < 1e-12);
        assert_eq!(g.faces()[16], 3.0);
        assert!((g.areas()[0] - 16.0 * PI).abs() < 1e-12);
        assert!((g.width() - 1.0 / 16.0).abs() < 1e-15);
    }
}
