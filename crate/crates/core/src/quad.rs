//! Adaptive quadrature on finite intervals.


use crate::{Error, Result};

const MAX_DEPTH: u32 = 48;

/// Integrates `f` over `[a, b]` to relative tolerance `rel_tol`.
///
/// Adaptive Simpson: each panel compares one trapezoid-refined Simpson
/// estimate with its two halves and applies the Richardson correction once
/// they agree.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::InvalidArgument("integration bounds must be finite with a < b".into()));
    }
    if !(rel_tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    // a coarse 16-panel pass sets the absolute scale
    let panels = 16;
    let h = (b - a) / panels as f64;
    let mut coarse = 0.0;
    let mut ends = [(0.0, 0.0, 0.0); 16];
    for (i, slot) in ends.iter_mut().enumerate() {
        let x0 = a + h * i as f64;
        let x1 = if i + 1 == panels { b } else { x0 + h };
        let (f0, fm, f1) = (f(x0), f(0.5 * (x0 + x1)), f(x1));
        coarse += (x1 - x0) * (f0 + 4.0 * fm + f1) / 6.0;
        *slot = (f0, fm, f1);
    }
    if !coarse.is_finite() {
        return Err(Error::NonFinite("integrand"));
    }
    let tol = (rel_tol * coarse.abs()).max(f64::MIN_POSITIVE);
    let mut total = 0.0;
    for (i, &(f0, fm, f1)) in ends.iter().enumerate() {
        let x0 = a + h * i as f64;
        let x1 = if i + 1 == panels { b } else { x0 + h };
        let whole = (x1 - x0) * (f0 + 4.0 * fm + f1) / 6.0;
        total += panel(&f, x0, x1, f0, fm, f1, whole, tol / panels as f64, MAX_DEPTH)?;
    }
    Ok(total)
}

#[allow(clippy::too_many_arguments)]
fn panel<F: Fn(f64) -> f64>(
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
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) * (fa + 4.0 * flm + fm) / 6.0;
    let right = (b - m) * (fm + 4.0 * frm + fb) / 6.0;
    let delta = left + right - whole;
    if !delta.is_finite() {
        return Err(Error::NonFinite("integrand"));
    }
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::NoConvergence { what: "adaptive quadrature", iterations: MAX_DEPTH as usize });
    }
    Ok(panel(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
        + panel(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?)
}
