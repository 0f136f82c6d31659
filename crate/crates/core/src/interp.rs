//! Monotone piecewise-cubic Hermite interpolation.

use crate::error::{Error, Result};

/// A C¹ piecewise-cubic Hermite interpolant with slopes limited to the
/// Fritsch–Carlson monotone region.
#[derive(Debug, Clone)]
pub struct CubicHermite {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl CubicHermite {
    /// Classic PCHIP: slopes estimated from the data (weighted harmonic
    /// means inside, shape-preserving three-point formulas at the ends).
    pub fn fritsch_carlson(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        let slopes = fc_slopes(&xs, &ys)?;
        Self::with_slopes(xs, ys, slopes)
    }

    /// Hermite interpolant with caller-supplied slopes, clamped into the
    /// Fritsch–Carlson region so monotone data stays monotone.
    pub fn with_slopes(xs: Vec<f64>, ys: Vec<f64>, mut slopes: Vec<f64>) -> Result<Self> {
        validate_strictly_increasing(&xs)?;
        if ys.len() != xs.len() || slopes.len() != xs.len() {
            return Err(Error::Domain(
                "interpolation columns must have equal lengths".into(),
            ));
        }
        if xs.len() < 2 {
            return Err(Error::Domain("need at least two knots".into()));
        }
        limit_to_monotone_region(&xs, &ys, &mut slopes);
        Ok(Self { xs, ys, slopes })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.xs[0], *self.xs.last().unwrap())
    }

    pub fn knots(&self) -> &[f64] {
        &self.xs
    }

    /// Evaluates at `x`; inputs within a few ulps of the domain are clamped,
    /// anything farther out is a domain error.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let (lo, hi) = self.domain();
        let slack = 4.0 * f64::EPSILON * (hi - lo).abs();
        if !(x >= lo - slack && x <= hi + slack) {
            return Err(Error::Domain(format!(
                "x = {x} outside the interpolation domain [{lo}, {hi}]"
            )));
        }
        let x = x.clamp(lo, hi);
        let i = match self
            .xs
            .binary_search_by(|v| v.partial_cmp(&x).unwrap())
        {
            Ok(i) => {
                if i == self.xs.len() - 1 {
                    return Ok(self.ys[i]);
                }
                i
            }
            Err(i) => i - 1,
        };
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let t2 = t * t;
        let h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
        let h10 = t * (1.0 - t) * (1.0 - t);
        let h01 = t2 * (3.0 - 2.0 * t);
        let h11 = t2 * (t - 1.0);
        Ok(h00 * self.ys[i]
            + h10 * h * self.slopes[i]
            + h01 * self.ys[i + 1]
            + h11 * h * self.slopes[i + 1])
    }

    /// Derivative of the interpolant at `x`.
    pub fn eval_deriv(&self, x: f64) -> Result<f64> {
        let (lo, hi) = self.domain();
        let slack = 4.0 * f64::EPSILON * (hi - lo).abs();
        if !(x >= lo - slack && x <= hi + slack) {
            return Err(Error::Domain(format!(
                "x = {x} outside the interpolation domain [{lo}, {hi}]"
            )));
        }
        let x = x.clamp(lo, hi);
        let i = match self.xs.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
            Ok(i) => i.min(self.xs.len() - 2),
            Err(i) => i - 1,
        };
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let d00 = 6.0 * t * (t - 1.0) / h;
        let d10 = (1.0 - t) * (1.0 - 3.0 * t);
        let d01 = -d00;
        let d11 = t * (3.0 * t - 2.0);
        Ok(d00 * self.ys[i]
            + d10 * self.slopes[i]
            + d01 * self.ys[i + 1]
            + d11 * self.slopes[i + 1])
    }
}

fn validate_strictly_increasing(xs: &[f64]) -> Result<()> {
    use std::cmp::Ordering;
    for i in 1..xs.len() {
        // partial_cmp keeps NaN-contaminated tables out.
        if xs[i].partial_cmp(&xs[i - 1]) != Some(Ordering::Greater) {
            return Err(Error::NonMonotoneInput { index: i });
        }
    }
    Ok(())
}

/// Fritsch–Carlson slope estimates for monotone data.
fn fc_slopes(xs: &[f64], ys: &[f64]) -> Result<Vec<f64>> {
    validate_strictly_increasing(xs)?;
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return Err(Error::Domain("need at least two knots".into()));
    }
    let h: Vec<f64> = (0..n - 1).map(|i| xs[i + 1] - xs[i]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();
    let mut d = vec![0.0; n];
    if n == 2 {
        d[0] = delta[0];
        d[1] = delta[0];
        return Ok(d);
    }
    d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    for i in 1..n - 1 {
        let (d_prev, d_next) = (delta[i - 1], delta[i]);
        if d_prev == 0.0 || d_next == 0.0 || d_prev.signum() != d_next.signum() {
            d[i] = 0.0;
        } else {
            let w1 = 2.0 * h[i] + h[i - 1];
            let w2 = h[i] + 2.0 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / d_prev + w2 / d_next);
        }
    }
    Ok(d)
}

/// Shape-preserving three-point end slope.
fn end_slope(h0: f64, h1: f64, del0: f64, del1: f64) -> f64 {
    let mut d = ((2.0 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
    if d.signum() != del0.signum() {
        d = 0.0;
    } else if del0.signum() != del1.signum() && d.abs() > 3.0 * del0.abs() {
        d = 3.0 * del0;
    }
    d
}

/// Scales `(d_i, d_{i+1})` into the circle of radius 3 around the secant
/// slope; a cubic Hermite piece with slopes inside that region is monotone.
fn limit_to_monotone_region(xs: &[f64], ys: &[f64], slopes: &mut [f64]) {
    for i in 0..xs.len() - 1 {
        let delta = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
        if delta == 0.0 {
            slopes[i] = 0.0;
            slopes[i + 1] = 0.0;
            continue;
        }
        let alpha = slopes[i] / delta;
        let beta = slopes[i + 1] / delta;
        if alpha < 0.0 {
            slopes[i] = 0.0;
        }
        if beta < 0.0 {
            slopes[i + 1] = 0.0;
        }
        let r = (slopes[i] / delta).hypot(slopes[i + 1] / delta);
        if r > 3.0 {
            let s = 3.0 / r;
            slopes[i] *= s;
            slopes[i + 1] *= s;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_knots_exactly() {
        let xs = vec![0.0, 1.0, 2.5, 4.0];
        let ys = vec![1.0, 2.0, 2.5, 7.0];
        let h = CubicHermite::fritsch_carlson(xs.clone(), ys.clone()).unwrap();
        for (x, y) in xs.iter().zip(&ys) {
            assert_eq!(h.eval(*x).unwrap(), *y);
        }
    }

    #[test]
    fn two_knot_table_is_linear() {
        let h = CubicHermite::fritsch_carlson(vec![0.0, 2.0], vec![1.0, 3.0]).unwrap();
        assert!((h.eval(1.0).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn monotone_on_monotone_data() {
        let xs: Vec<f64> = (0..20).map(|i| i as f64 * 0.3).collect();
        let ys: Vec<f64> = xs.iter().map(|x| x * x * x + 0.1 * x).collect();
        let h = CubicHermite::fritsch_carlson(xs, ys).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for k in 0..=500 {
            let x = 19.0 * 0.3 * k as f64 / 500.0;
            let y = h.eval(x).unwrap();
            assert!(y >= prev - 1e-12, "non-monotone at x = {x}");
            prev = y;
        }
    }

    #[test]
    fn rejects_decreasing_abscissae() {
        assert!(matches!(
            CubicHermite::fritsch_carlson(vec![0.0, 1.0, 0.5], vec![0.0, 1.0, 2.0]),
            Err(Error::NonMonotoneInput { index: 2 })
        ));
    }

    #[test]
    fn rejects_out_of_domain() {
        let h = CubicHermite::fritsch_carlson(vec![0.0, 1.0], vec![0.0, 1.0]).unwrap();
        assert!(h.eval(-0.5).is_err());
        assert!(h.eval(1.5).is_err());
    }

    #[test]
    fn supplied_slopes_are_limited() {
        // Wild slopes must not break monotonicity.
        let h = CubicHermite::with_slopes(
            vec![0.0, 1.0, 2.0],
            vec![0.0, 1.0, 2.0],
            vec![50.0, -80.0, 50.0],
        )
        .unwrap();
        let mut prev = f64::NEG_INFINITY;
        for k in 0..=200 {
            let y = h.eval(2.0 * k as f64 / 200.0).unwrap();
            assert!(y >= prev - 1e-12);
            prev = y;
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let xs: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| (x * 0.4).sin() + x).collect();
        let h = CubicHermite::fritsch_carlson(xs, ys).unwrap();
        let eps = 1e-6;
        for &x in &[0.5, 3.3, 7.7] {
            let fd = (h.eval(x + eps).unwrap() - h.eval(x - eps).unwrap()) / (2.0 * eps);
            assert!((h.eval_deriv(x).unwrap() - fd).abs() < 1e-6);
        }
    }
}
