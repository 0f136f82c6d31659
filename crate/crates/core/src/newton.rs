//! Safeguarded Newton iteration on a bracketed monotone function.

use crate::error::{Error, Result};

/// Solves `g(x) = target` for strictly increasing `g` on `[lo, hi]`.
///
/// `eval` returns `(g(x), g'(x))`. Newton steps are taken from `x0` and
/// rejected in favour of bisection whenever they leave the current bracket.
/// Convergence is declared on the residual, `|g(x) − target| ≤ tol`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn newton_bisect<F>(
    eval: F,
    target: f64,
    lo: f64,
    hi: f64,
    x0: f64,
    tol: f64,
    max_iter: usize,
    context: &'static str,
) -> Result<f64>
where
    F: Fn(f64) -> Result<(f64, f64)>,
{
    debug_assert!(lo <= hi);
    let mut lo = lo;
    let mut hi = hi;
    let mut x = x0.clamp(lo, hi);
    // The target function may be singular at the bracket ends (√f poles);
    // never evaluate exactly there.
    if x <= lo || x >= hi {
        x = 0.5 * (lo + hi);
    }

    for _ in 0..max_iter {
        let (g, dg) = eval(x)?;
        let resid = g - target;
        if resid.abs() <= tol {
            return Ok(x);
        }
        if resid > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let newton = x - resid / dg;
        x = if dg.is_finite() && dg > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        // Bracket collapsed to machine width: accept the midpoint.
        if hi - lo <= f64::EPSILON * (1.0 + lo.abs().max(hi.abs())) {
            return Ok(x);
        }
    }
    Err(Error::NonConvergence {
        context,
        iterations: max_iter,
    })
}
