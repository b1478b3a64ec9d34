//! Scalar root finding: sign-change scans, bisection and safeguarded Newton.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RootError {
    #[error("no sign change on [{lo}, {hi}] (f = {flo}, {fhi})")]
    NoSignChange { lo: f64, hi: f64, flo: f64, fhi: f64 },
    #[error("function returned a non-finite value at x = {0}")]
    NotFinite(f64),
    #[error("invalid bracket [{0}, {1}]")]
    InvalidBracket(f64, f64),
}

/// `n ≥ 2` geometrically spaced points from `lo` to `hi` inclusive (`0 < lo < hi`).
pub fn geomspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2 && lo > 0.0 && hi > lo);
    let ratio = (hi / lo).ln() / (n - 1) as f64;
    let mut xs: Vec<f64> = (0..n).map(|i| lo * (ratio * i as f64).exp()).collect();
    xs[0] = lo;
    xs[n - 1] = hi;
    xs
}

/// `n ≥ 2` uniformly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2);
    let h = (hi - lo) / (n - 1) as f64;
    let mut xs: Vec<f64> = (0..n).map(|i| lo + h * i as f64).collect();
    xs[n - 1] = hi;
    xs
}

/// A bracket `[lo, hi]` on which `f` changes sign (or vanishes at an end).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
}

/// Evaluate `f` on the sorted `samples` and return every adjacent pair across
/// which it changes sign. A sample where `f` is exactly zero yields a
/// degenerate bracket `[x, x]`. Non-finite samples split the scan.
pub fn sign_changes<F: FnMut(f64) -> f64>(mut f: F, samples: &[f64]) -> Vec<Bracket> {
    let mut out = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for &x in samples {
        let fx = f(x);
        if !fx.is_finite() {
            prev = None;
            continue;
        }
        if fx == 0.0 {
            out.push(Bracket { lo: x, hi: x });
        } else if let Some((xp, fp)) = prev {
            if fp != 0.0 && fp.signum() != fx.signum() {
                out.push(Bracket { lo: xp, hi: x });
            }
        }
        prev = Some((x, fx));
    }
    out
}

/// Bisection on a sign-changing bracket until its width is below `xtol`.
/// Returns the midpoint of the final bracket.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, xtol: f64) -> Result<f64, RootError> {
    if !(lo <= hi) {
        return Err(RootError::InvalidBracket(lo, hi));
    }
    let (mut a, mut b) = (lo, hi);
    let mut fa = f(a);
    let fb = f(b);
    if !fa.is_finite() {
        return Err(RootError::NotFinite(a));
    }
    if !fb.is_finite() {
        return Err(RootError::NotFinite(b));
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(RootError::NoSignChange { lo, hi, flo: fa, fhi: fb });
    }
    // 200 halvings exhaust any f64 interval.
    for _ in 0..200 {
        if b - a <= xtol {
            break;
        }
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if !fm.is_finite() {
            return Err(RootError::NotFinite(m));
        }
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Newton iteration kept inside a sign-changing bracket; a step that leaves
/// the bracket or fails to halve the residual falls back to bisection.
/// Stops when `|f| ≤ ftol` or the bracket is narrower than `xtol`.
pub fn safeguarded_newton<F, D>(
    mut f: F,
    mut df: D,
    lo: f64,
    hi: f64,
    guess: f64,
    ftol: f64,
    xtol: f64,
) -> Result<f64, RootError>
where
    F: FnMut(f64) -> f64,
    D: FnMut(f64) -> f64,
{
    if !(lo <= hi) {
        return Err(RootError::InvalidBracket(lo, hi));
    }
    let (mut a, mut b) = (lo, hi);
    let fa = f(a);
    let fb = f(b);
    if !fa.is_finite() || !fb.is_finite() {
        return Err(RootError::NotFinite(if fa.is_finite() { b } else { a }));
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(RootError::NoSignChange { lo, hi, flo: fa, fhi: fb });
    }
    let sa = fa.signum();
    let mut x = if guess > a && guess < b { guess } else { 0.5 * (a + b) };
    let mut fx = f(x);
    for _ in 0..200 {
        if !fx.is_finite() {
            return Err(RootError::NotFinite(x));
        }
        if fx.abs() <= ftol || b - a <= xtol {
            return Ok(x);
        }
        if fx.signum() == sa {
            a = x;
        } else {
            b = x;
        }
        let d = df(x);
        let newton = x - fx / d;
        let candidate = if d != 0.0 && d.is_finite() && newton > a && newton < b { newton } else { 0.5 * (a + b) };
        let fc = f(candidate);
        if fc.is_finite() && fc.abs() <= 0.5 * fx.abs() {
            x = candidate;
            fx = fc;
        } else {
            let m = 0.5 * (a + b);
            x = m;
            fx = if m == candidate { fc } else { f(m) };
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_finds_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn bisect_rejects_same_sign() {
        assert!(matches!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12), Err(RootError::NoSignChange { .. })));
    }

    #[test]
    fn newton_matches_bisection() {
        let f = |x: f64| x.cos() - x;
        let r1 = safeguarded_newton(f, |x| -x.sin() - 1.0, 0.0, 1.0, 0.9, 1e-15, 1e-15).unwrap();
        let r2 = bisect(f, 0.0, 1.0, 1e-15).unwrap();
        assert!((r1 - r2).abs() < 1e-14);
    }

    #[test]
    fn newton_survives_bad_derivative() {
        // zero derivative at the initial guess forces bisection
        let r = safeguarded_newton(|x| x * x * x - 0.5, |_| 0.0, 0.0, 2.0, 1.0, 1e-14, 1e-15).unwrap();
        assert!((r - 0.5f64.cbrt()).abs() < 1e-12);
    }

    #[test]
    fn sign_change_scan() {
        let xs = linspace(-3.0, 3.0, 61);
        let br = sign_changes(|x| (x - 0.55) * (x + 1.25), &xs);
        assert_eq!(br.len(), 2);
        assert!(br[0].lo < -1.25 && br[0].hi > -1.25);
        assert!(br[1].lo < 0.55 && br[1].hi > 0.55);
    }

    #[test]
    fn spacing_helpers_hit_endpoints() {
        let g = geomspace(1e-3, 1e3, 512);
        assert_eq!((g[0], g[511]), (1e-3, 1e3));
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        let l = linspace(0.5, 4.0, 8);
        assert_eq!((l[0], l[7]), (0.5, 4.0));
    }
}
