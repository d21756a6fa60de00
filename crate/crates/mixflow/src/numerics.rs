//! Scalar root finding and quadrature shared by the conductivity models.

use crate::error::{Error, Result};

/// Relative residual tolerance used when inverting the forward map.
pub const INVERT_RTOL: f64 = 1e-13;
/// Iteration cap for the safeguarded Newton inverter.
pub const INVERT_MAX_ITERS: usize = 200;

/// Solve `f(s) = target` for a strictly increasing `f` on `(0, ∞)`.
///
/// `bracket = (lo, hi)` must satisfy `f(lo) <= target <= f(hi)`. Newton steps
/// are taken when they stay inside the current bracket; otherwise the bracket
/// is bisected geometrically (the admissible `s` spans many decades, so the
/// geometric mean is the safe midpoint). `start`, when given, seeds the first
/// iterate (clamped into the bracket) so warm calls converge in a few steps.
/// Converges when the residual drops below `rtol·max(1, |target|)` or the
/// bracket collapses to rounding width.
pub fn invert_increasing<F, D>(
    f: F,
    df: D,
    target: f64,
    bracket: (f64, f64),
    start: Option<f64>,
    rtol: f64,
    max_iters: usize,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let (mut lo, mut hi) = bracket;
    if !(lo > 0.0 && hi >= lo) {
        return Err(Error::Domain(format!(
            "invalid bracket [{lo:e}, {hi:e}] for inversion"
        )));
    }
    // sqrt(lo)·sqrt(hi) instead of sqrt(lo·hi): the product can underflow
    // when both ends are subnormal-adjacent
    let geo_mean = |a: f64, b: f64| a.sqrt() * b.sqrt();
    let tol = rtol * target.abs().max(f64::MIN_POSITIVE);
    let mut s = match start {
        Some(s0) if s0.is_finite() && s0 > 0.0 => s0.clamp(lo, hi),
        _ => geo_mean(lo, hi),
    };
    for iter in 0..max_iters {
        let r = f(s) - target;
        if r.abs() <= tol {
            return Ok(s);
        }
        if r > 0.0 {
            hi = s;
        } else {
            lo = s;
        }
        if hi - lo <= f64::EPSILON * hi {
            return Ok(0.5 * (lo + hi));
        }
        let d = df(s);
        let newton = s - r / d;
        s = if d.is_finite() && d > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            geo_mean(lo, hi)
        };
        let _ = iter;
    }
    Err(Error::NonConvergence {
        iters: max_iters,
        lo,
        hi,
    })
}

/// One Simpson estimate on `[a, b]`.
fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

fn adaptive_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let diff = left + right - whole;
    if diff.abs() <= 15.0 * tol || b - a <= f64::EPSILON * (a.abs() + b.abs()) {
        return Ok(left + right + diff / 15.0);
    }
    if depth == 0 {
        return Err(Error::Quadrature { a, b });
    }
    let l = adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?;
    let r = adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?;
    Ok(l + r)
}

/// Adaptive Simpson quadrature of `f` over `[a, b]`.
///
/// Accepts when the local error estimate is below
/// `max(abs_tol, rel_tol·|coarse estimate|)` distributed over the recursion.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_depth: u32,
) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let fb = f(b);
    let whole = simpson(fa, fm, fb, b - a);
    let tol = abs_tol.max(rel_tol * whole.abs());
    adaptive_step(&f, a, b, fa, fm, fb, whole, tol, max_depth)
}

/// Least-squares slope of `ln y` against `ln x`.
///
/// Points with a response below `drop_below` are discarded (they sit at
/// rounding level and would corrupt the fit). Returns `None` when fewer than
/// two usable points remain.
pub fn loglog_slope(points: &[(f64, f64)], drop_below: f64) -> Option<f64> {
    let usable: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|&(x, y)| x > 0.0 && y > drop_below)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if usable.len() < 2 {
        return None;
    }
    let n = usable.len() as f64;
    let sx: f64 = usable.iter().map(|p| p.0).sum();
    let sy: f64 = usable.iter().map(|p| p.1).sum();
    let sxx: f64 = usable.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = usable.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom == 0.0 {
        return None;
    }
    Some((n * sxy - sx * sy) / denom)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverts_monotone_cubic() {
        let f = |s: f64| s * s * s;
        let df = |s: f64| 3.0 * s * s;
        let s = invert_increasing(f, df, 8.0, (1e-6, 1e6), None, 1e-13, 200).unwrap();
        assert!((s - 2.0).abs() < 1e-12);
        let warm = invert_increasing(f, df, 8.0, (1e-6, 1e6), Some(1.9), 1e-13, 200).unwrap();
        assert!((warm - 2.0).abs() < 1e-12);
    }

    #[test]
    fn inversion_rejects_bad_bracket() {
        let err = invert_increasing(|s| s, |_| 1.0, 1.0, (-1.0, 2.0), None, 1e-13, 200);
        assert!(matches!(err, Err(Error::Domain(_))));
    }

    #[test]
    fn simpson_integrates_power_law() {
        // ∫_0^2 u^{3/2} du = 2/5 · 2^{5/2}
        let v = adaptive_simpson(|u| u.powf(1.5), 0.0, 2.0, 0.0, 1e-12, 60).unwrap();
        let exact = 0.4 * 2f64.powf(2.5);
        assert!((v - exact).abs() <= 1e-11 * exact);
    }

    #[test]
    fn slope_of_pure_power_is_exact() {
        let pts: Vec<(f64, f64)> = (1..6).map(|k| {
            let x = 10f64.powi(-k);
            (x, 3.0 * x.powf(0.75))
        }).collect();
        let s = loglog_slope(&pts, 0.0).unwrap();
        assert!((s - 0.75).abs() < 1e-12);
    }
}
