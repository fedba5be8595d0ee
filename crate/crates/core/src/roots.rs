//! Bracketed scalar root finding.

use crate::error::Result;

/// Safeguarded Newton iteration on a bracket `[a, b]` with `f(a)·f(b) ≤ 0`.
///
/// `f` returns `(value, derivative)`. A Newton step is taken when it stays
/// inside the current bracket and shrinks the residual fast enough; otherwise
/// the bracket is bisected. Terminates when the bracket or the step is below
/// `rel_tol·(1 + |x|)`.
pub fn newton_bisect<F>(mut f: F, a: f64, b: f64, rel_tol: f64, max_iter: usize) -> Result<f64>
where
    F: FnMut(f64) -> Result<(f64, f64)>,
{
    let (fa, _) = f(a)?;
    if fa == 0.0 {
        return Ok(a);
    }
    let (fb, _) = f(b)?;
    if fb == 0.0 {
        return Ok(b);
    }
    debug_assert!(fa.signum() != fb.signum(), "root not bracketed");
    // orient so that f(lo) < 0 < f(hi)
    let (mut lo, mut hi) = if fa < 0.0 { (a, b) } else { (b, a) };
    let mut x = 0.5 * (a + b);
    let mut dx_old = (b - a).abs();
    let mut dx = dx_old;
    let (mut fx, mut dfx) = f(x)?;
    for _ in 0..max_iter {
        if fx == 0.0 {
            return Ok(x);
        }
        let newton_out = ((x - hi) * dfx - fx) * ((x - lo) * dfx - fx) > 0.0;
        let slow = (2.0 * fx).abs() > (dx_old * dfx).abs();
        dx_old = dx;
        if newton_out || slow || dfx == 0.0 {
            dx = 0.5 * (hi - lo);
            x = lo + dx;
        } else {
            dx = fx / dfx;
            x -= dx;
        }
        let tol = rel_tol * (1.0 + x.abs());
        if dx.abs() < tol || (hi - lo).abs() < tol {
            return Ok(x);
        }
        let (v, d) = f(x)?;
        fx = v;
        dfx = d;
        if fx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
    }
    Ok(x)
}

/// Plain bisection on `[a, b]` with `f(a)·f(b) ≤ 0`.
pub fn bisect<F>(mut f: F, a: f64, b: f64, abs_tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let fa = f(a)?;
    if fa == 0.0 {
        return Ok(a);
    }
    let (mut lo, mut hi) = (a, b);
    let neg_at_lo = fa < 0.0;
    while (hi - lo).abs() > abs_tol {
        let m = 0.5 * (lo + hi);
        if m == lo || m == hi {
            break;
        }
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if (fm < 0.0) == neg_at_lo {
            lo = m;
        } else {
            hi = m;
        }
    }
    Ok(0.5 * (lo + hi))
}
