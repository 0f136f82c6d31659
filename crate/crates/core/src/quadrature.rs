//! Adaptive Gauss–Kronrod quadrature (7-point Gauss, 15-point Kronrod).
//!
//! Used by the forward conformal maps after the endpoint substitutions have
//! removed the `1/√` singularities; the integrands seen here are smooth.

use crate::error::{Error, Result};

/// Positive Kronrod abscissae for the 15-point rule (descending, ends at 0).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

/// Kronrod weights matching `XGK`.
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

/// Weights of the embedded 7-point Gauss rule (odd-index abscissae of `XGK`).
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

const MAX_PANELS: usize = 4096;
const MAX_DEPTH: usize = 48;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Quadrature {
    pub value: f64,
    pub error: f64,
}

/// QUADPACK-style error rescaling: sharpens the raw `|K − G|` difference
/// using the measure of integrand variation `res_asc`.
fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let min_err = 50.0 * f64::EPSILON * res_abs;
        if min_err > scaled {
            scaled = min_err;
        }
    }
    scaled
}

/// One 15-point Kronrod panel on `[a, b]`; returns (value, error estimate,
/// integral of |f|).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);

    let mut fv = [0.0f64; 15];
    fv[7] = f_center;
    let mut kronrod = WGK[7] * f_center;
    let mut gauss = WG[3] * f_center;
    let mut res_abs = kronrod.abs();
    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv[j] = f1;
        fv[14 - j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv[j] - mean).abs() + (fv[14 - j] - mean).abs());
    }
    let value = kronrod * half;
    let res_abs = res_abs * half.abs();
    let err = rescale_error((kronrod - gauss) * half, res_abs, res_asc * half.abs());
    (value, err, res_abs)
}

/// Integrates `f` over `[a, b]` to absolute tolerance `abs_tol` by recursive
/// bisection of Kronrod panels.
pub(crate) fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, abs_tol: f64) -> Result<Quadrature> {
    if a == b {
        return Ok(Quadrature { value: 0.0, error: 0.0 });
    }
    let mut panels = 0usize;
    let mut total = Quadrature { value: 0.0, error: 0.0 };
    refine(f, a, b, abs_tol, 0, &mut panels, &mut total)?;
    Ok(total)
}

fn refine<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    depth: usize,
    panels: &mut usize,
    total: &mut Quadrature,
) -> Result<()> {
    *panels += 1;
    if *panels > MAX_PANELS {
        return Err(Error::NonConvergence {
            context: "adaptive Gauss-Kronrod quadrature",
            iterations: MAX_PANELS,
        });
    }
    let (value, err, res_abs) = gk15(f, a, b);
    // Accept at tolerance or at the rounding floor: the error estimate of a
    // converged panel never drops below ~50ε·∫|f|, so demanding less would
    // recurse forever.
    if err <= tol.max(64.0 * f64::EPSILON * res_abs) || depth >= MAX_DEPTH {
        total.value += value;
        total.error += err;
        return Ok(());
    }
    let mid = 0.5 * (a + b);
    refine(f, a, mid, 0.5 * tol, depth + 1, panels, total)?;
    refine(f, mid, b, 0.5 * tol, depth + 1, panels, total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        // 15-point Kronrod integrates degree-22 polynomials exactly.
        let q = integrate(&|x: f64| x * x * x - 2.0 * x + 1.0, 0.0, 2.0, 1e-14).unwrap();
        // ∫₀² (x³ − 2x + 1) dx = 4 − 4 + 2 = 2
        assert!((q.value - 2.0).abs() < 1e-14);
    }

    #[test]
    fn smooth_transcendental() {
        let q = integrate(&|x: f64| x.exp(), 0.0, 1.0, 1e-14).unwrap();
        assert!((q.value - (1f64.exp() - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn needs_subdivision() {
        // A narrow peak forces adaptive refinement.
        let q = integrate(&|x: f64| 1.0 / (1e-4 + x * x), -1.0, 1.0, 1e-12).unwrap();
        let exact = 2.0 * (1.0 / 1e-2) * (1.0 / 1e-2f64).atan();
        assert!((q.value - exact).abs() < 1e-9 * exact);
    }

    #[test]
    fn empty_interval() {
        let q = integrate(&|_| 1.0, 1.5, 1.5, 1e-14).unwrap();
        assert_eq!(q.value, 0.0);
    }
}
