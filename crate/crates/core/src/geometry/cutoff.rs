/// Smooth cutoff `χ` with `χ = 1` on `|r| ≤ 1/3` and `χ = 0` on `|r| ≥ 2/3`.
///
/// The transition is the quintic smoothstep `1 − S(3|r| − 1)`,
/// `S(s) = 10s³ − 15s⁴ + 6s⁵`, which is C² and has
/// `|χ'|_∞ = 3 · max S' = 3 · 15/8 = 45/8`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cutoff {
    _private: (),
}

impl Cutoff {
    pub const DERIVATIVE_SUP: f64 = 45.0 / 8.0;

    pub fn quintic() -> Self {
        Self { _private: () }
    }

    pub fn value(&self, r: f64) -> f64 {
        let x = r.abs();
        if x <= 1.0 / 3.0 {
            1.0
        } else if x >= 2.0 / 3.0 {
            0.0
        } else {
            let s = 3.0 * x - 1.0;
            1.0 - s * s * s * (10.0 - 15.0 * s + 6.0 * s * s)
        }
    }

    pub fn derivative(&self, r: f64) -> f64 {
        let x = r.abs();
        if x <= 1.0 / 3.0 || x >= 2.0 / 3.0 {
            0.0
        } else {
            let s = 3.0 * x - 1.0;
            -3.0 * 30.0 * s * s * (1.0 - s) * (1.0 - s) * r.signum()
        }
    }

    /// `|χ'|_∞`
    pub fn derivative_sup(&self) -> f64 {
        Self::DERIVATIVE_SUP
    }
}
