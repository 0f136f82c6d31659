//! Carlson symmetric integrals, the incomplete elliptic integral of the
//! third kind, and the generalized Jacobi amplitude.
//!
//! The integral of the third kind uses the convention
//!
//! ```text
//!              φ
//!             ⌠                dθ
//! Π(n; φ|m) = │  ─────────────────────────────
//!             │  (1 − n sin²θ) √(1 − m sin²θ)
//!             ⌡
//!            0
//! ```
//!
//! with characteristic `n` and parameter `m`, and is evaluated through the
//! Carlson forms on the principal branch:
//!
//! ```text
//! Π(n; φ|m) = sinφ·RF(cos²φ, 1−m sin²φ, 1) + (n/3)·sin³φ·RJ(cos²φ, 1−m sin²φ, 1, 1−n sin²φ)
//! ```
//!
//! Amplitudes are supported on the real and the imaginary axis; that is all
//! the conformal maps require. On the imaginary axis `φ = iψ` the identity
//! `Π(n; iψ|m) = i·∫₀^ψ dτ/((1+n sinh²τ)√(1+m sinh²τ))` keeps every Carlson
//! argument real.
//!
//! `RF`/`RJ` follow Carlson's duplication algorithm with a fifth/seventh
//! order series tail (Carlson 1995, Numerische Mathematik 33; DLMF §19.36),
//! which applies verbatim to complex arguments off the negative real axis.

use std::f64::consts::{FRAC_PI_2, PI};

use num::complex::Complex64;

use crate::error::{Error, Result};
use crate::newton::newton_bisect;

/// Complex scalar used for amplitudes and Carlson arguments.
pub type ComplexValue = Complex64;

/// Arguments of `Π(n; φ|m)`.
#[derive(Debug, Clone, Copy)]
pub struct EllipticArgs {
    /// Characteristic.
    pub n: f64,
    /// Amplitude in radians; real or purely imaginary.
    pub phi: ComplexValue,
    /// Parameter (the square of the modulus).
    pub m: f64,
}

impl EllipticArgs {
    pub fn new(n: f64, phi: ComplexValue, m: f64) -> Self {
        Self { n, phi, m }
    }

    pub fn real(n: f64, phi: f64, m: f64) -> Self {
        Self {
            n,
            phi: ComplexValue::new(phi, 0.0),
            m,
        }
    }
}

/// Tolerances of the amplitude inversion.
#[derive(Debug, Clone, Copy)]
pub struct AmConfig {
    /// Mixed tolerance on the residual: `|Π(φ) − z| ≤ tol·(1 + |z|)`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for AmConfig {
    fn default() -> Self {
        Self {
            tol: 1e-13,
            max_iter: 100,
        }
    }
}

const MAX_DUPLICATIONS: usize = 100;
/// Series truncation target of the duplication tails; the stopping rule
/// turns this into ~machine-precision results.
const RF_TARGET: f64 = 1e-18;

fn check_finite(w: Complex64) -> Result<()> {
    if w.re.is_finite() && w.im.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain("non-finite Carlson argument".into()))
    }
}

fn on_negative_axis(w: Complex64) -> bool {
    w.im == 0.0 && w.re < 0.0
}

fn is_zero(w: Complex64) -> bool {
    w.re == 0.0 && w.im == 0.0
}

/// Carlson symmetric integral of the first kind,
/// `RF(x,y,z) = ½∫₀^∞ dt/√((t+x)(t+y)(t+z))`.
///
/// Arguments must lie off the negative real axis and at most one may be zero.
pub fn carlson_rf(x: ComplexValue, y: ComplexValue, z: ComplexValue) -> Result<ComplexValue> {
    for w in [x, y, z] {
        check_finite(w)?;
        if on_negative_axis(w) {
            return Err(Error::Domain(
                "carlson_rf: argument on the negative real axis".into(),
            ));
        }
    }
    let zeros = [x, y, z].iter().filter(|w| is_zero(**w)).count();
    if zeros > 1 {
        return Err(Error::Domain(
            "carlson_rf: at most one argument may be zero".into(),
        ));
    }

    let a0 = (x + y + z) / 3.0;
    let q = (3.0 * RF_TARGET).powf(-1.0 / 6.0)
        * [(a0 - x).norm(), (a0 - y).norm(), (a0 - z).norm()]
            .into_iter()
            .fold(0.0, f64::max);
    let (mut xm, mut ym, mut zm, mut a) = (x, y, z, a0);
    let mut scale = 1.0f64;
    for _ in 0..MAX_DUPLICATIONS {
        if scale * q < a.norm() {
            let dx = (a0 - x) * scale / a;
            let dy = (a0 - y) * scale / a;
            let dz = -dx - dy;
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            let tail = 1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0
                - 5.0 * e2 * e2 * e2 / 208.0
                + 3.0 * e3 * e3 / 104.0
                + e2 * e2 * e3 / 16.0;
            return Ok(tail / a.sqrt());
        }
        let (sx, sy, sz) = (xm.sqrt(), ym.sqrt(), zm.sqrt());
        let lam = sx * sy + sy * sz + sz * sx;
        xm = (xm + lam) * 0.25;
        ym = (ym + lam) * 0.25;
        zm = (zm + lam) * 0.25;
        a = (a + lam) * 0.25;
        scale *= 0.25;
    }
    Err(Error::NonConvergence {
        context: "carlson_rf duplication",
        iterations: MAX_DUPLICATIONS,
    })
}

/// Degenerate case `RC(x, y) = RF(x, y, y)`; used inside `carlson_rj`.
pub(crate) fn carlson_rc(x: ComplexValue, y: ComplexValue) -> Result<ComplexValue> {
    carlson_rf(x, y, y)
}

/// Carlson symmetric integral of the third kind,
/// `RJ(x,y,z,p) = (3/2)∫₀^∞ dt/((t+p)√((t+x)(t+y)(t+z)))`.
pub fn carlson_rj(
    x: ComplexValue,
    y: ComplexValue,
    z: ComplexValue,
    p: ComplexValue,
) -> Result<ComplexValue> {
    for w in [x, y, z, p] {
        check_finite(w)?;
        if on_negative_axis(w) {
            return Err(Error::Domain(
                "carlson_rj: argument on the negative real axis".into(),
            ));
        }
    }
    if is_zero(p) {
        return Err(Error::Domain("carlson_rj: p must be nonzero".into()));
    }
    let zeros = [x, y, z].iter().filter(|w| is_zero(**w)).count();
    if zeros > 1 {
        return Err(Error::Domain(
            "carlson_rj: at most one of x, y, z may be zero".into(),
        ));
    }

    let a0 = (x + y + z + 2.0 * p) / 5.0;
    let delta = (p - x) * (p - y) * (p - z);
    let q = (0.25 * RF_TARGET).powf(-1.0 / 6.0)
        * [
            (a0 - x).norm(),
            (a0 - y).norm(),
            (a0 - z).norm(),
            (a0 - p).norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max);
    let (mut xm, mut ym, mut zm, mut pm, mut a) = (x, y, z, p, a0);
    let mut scale = 1.0f64;
    let mut sum = Complex64::new(0.0, 0.0);
    for _ in 0..MAX_DUPLICATIONS {
        if scale * q < a.norm() {
            let dx = (a0 - x) * scale / a;
            let dy = (a0 - y) * scale / a;
            let dz = (a0 - z) * scale / a;
            let dp = (-dx - dy - dz) / 2.0;
            let e2 = dx * dy + dx * dz + dy * dz - 3.0 * dp * dp;
            let e3 = dx * dy * dz + 2.0 * e2 * dp + 4.0 * dp * dp * dp;
            let e4 = (2.0 * dx * dy * dz + e2 * dp + 3.0 * dp * dp * dp) * dp;
            let e5 = dx * dy * dz * dp * dp;
            let tail = 1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0
                - 3.0 * e4 / 22.0
                - 9.0 * e2 * e3 / 52.0
                + 3.0 * e5 / 26.0;
            return Ok(scale * tail / (a * a.sqrt()) + 6.0 * sum);
        }
        let (sx, sy, sz, sp) = (xm.sqrt(), ym.sqrt(), zm.sqrt(), pm.sqrt());
        let lam = sx * sy + sy * sz + sz * sx;
        let d = (sp + sx) * (sp + sy) * (sp + sz);
        let e = scale * scale * scale * delta / (d * d);
        sum += scale / d * carlson_rc(Complex64::new(1.0, 0.0), 1.0 + e)?;
        xm = (xm + lam) * 0.25;
        ym = (ym + lam) * 0.25;
        zm = (zm + lam) * 0.25;
        pm = (pm + lam) * 0.25;
        a = (a + lam) * 0.25;
        scale *= 0.25;
    }
    Err(Error::NonConvergence {
        context: "carlson_rj duplication",
        iterations: MAX_DUPLICATIONS,
    })
}

fn rf_real(x: f64, y: f64, z: f64) -> Result<f64> {
    Ok(carlson_rf(
        Complex64::new(x, 0.0),
        Complex64::new(y, 0.0),
        Complex64::new(z, 0.0),
    )?
    .re)
}

fn rj_real(x: f64, y: f64, z: f64, p: f64) -> Result<f64> {
    Ok(carlson_rj(
        Complex64::new(x, 0.0),
        Complex64::new(y, 0.0),
        Complex64::new(z, 0.0),
        Complex64::new(p, 0.0),
    )?
    .re)
}

/// Incomplete elliptic integral of the third kind, `Π(n; φ|m)`.
///
/// Real amplitudes yield real values; purely imaginary amplitudes yield
/// purely imaginary values. Any other amplitude is outside the supported
/// branch and rejected.
pub fn ellint_pi(args: &EllipticArgs) -> Result<ComplexValue> {
    let EllipticArgs { n, phi, m } = *args;
    if !(n.is_finite() && m.is_finite()) {
        return Err(Error::Domain("non-finite characteristic or parameter".into()));
    }
    check_finite(phi)?;
    if phi.im == 0.0 {
        Ok(ComplexValue::new(pi_real(n, phi.re, m)?, 0.0))
    } else if phi.re == 0.0 {
        Ok(ComplexValue::new(0.0, pi_imag_axis(n, phi.im, m)?))
    } else {
        Err(Error::Domain(
            "Π amplitude must be real or purely imaginary".into(),
        ))
    }
}

/// `Π(n; φ|m)` for real `φ`, with reduction `Π(φ + kπ) = 2k·Π(π/2) + Π(φ)`.
fn pi_real(n: f64, phi: f64, m: f64) -> Result<f64> {
    if phi == 0.0 {
        return Ok(0.0);
    }
    if phi < 0.0 {
        return Ok(-pi_real(n, -phi, m)?);
    }
    if phi > FRAC_PI_2 {
        if m >= 1.0 || n >= 1.0 {
            return Err(Error::Domain(format!(
                "Π(n={n}; φ={phi}|m={m}): amplitude beyond π/2 needs n < 1 and m < 1"
            )));
        }
        let wraps = ((phi + FRAC_PI_2) / PI).floor();
        let rem = phi - wraps * PI;
        let complete = pi_real_base(n, FRAC_PI_2, m)?;
        return Ok(2.0 * wraps * complete + pi_real_base(n, rem, m)?);
    }
    pi_real_base(n, phi, m)
}

/// Carlson evaluation of `Π` for `φ ∈ [−π/2, π/2]`.
fn pi_real_base(n: f64, phi: f64, m: f64) -> Result<f64> {
    if phi == 0.0 {
        return Ok(0.0);
    }
    if phi < 0.0 {
        return Ok(-pi_real_base(n, -phi, m)?);
    }
    let s = phi.sin();
    let s2 = s * s;
    let c2 = (1.0 - s) * (1.0 + s);
    let y = clamp_near_zero(1.0 - m * s2, m.abs() * s2);
    if y < 0.0 {
        return Err(Error::Domain(format!(
            "Π: 1 − m sin²θ changes sign on the path (m = {m}, φ = {phi})"
        )));
    }
    let p = 1.0 - n * s2;
    if p <= 0.0 {
        return Err(Error::Domain(format!(
            "Π: the pole n sin²θ = 1 lies on the path (n = {n}, φ = {phi})"
        )));
    }
    let rf = rf_real(c2, y, 1.0)?;
    let rj = rj_real(c2, y, 1.0, p)?;
    Ok(s * rf + n / 3.0 * s * s2 * rj)
}

/// `G(ψ)` with `Π(n; iψ|m) = i·G(ψ)`:
/// `G(ψ) = ∫₀^ψ dτ/((1 + n sinh²τ)√(1 + m sinh²τ))`.
fn pi_imag_axis(n: f64, psi: f64, m: f64) -> Result<f64> {
    if psi == 0.0 {
        return Ok(0.0);
    }
    if psi < 0.0 {
        return Ok(-pi_imag_axis(n, -psi, m)?);
    }
    let sh = psi.sinh();
    let sh2 = sh * sh;
    let ch2 = 1.0 + sh2;
    let y = clamp_near_zero(1.0 + m * sh2, m.abs() * sh2);
    if y < 0.0 {
        return Err(Error::Domain(format!(
            "Π: 1 + m sinh²τ changes sign on the imaginary path (m = {m}, ψ = {psi})"
        )));
    }
    let p = 1.0 + n * sh2;
    if p <= 0.0 {
        return Err(Error::Domain(format!(
            "Π: pole on the imaginary path (n = {n}, ψ = {psi})"
        )));
    }
    let rf = rf_real(ch2, y, 1.0)?;
    let rj = rj_real(ch2, y, 1.0, p)?;
    Ok(sh * rf - n / 3.0 * sh * sh2 * rj)
}

/// Rounding guard: `1 − m sin²φ` comes out as `±O(ε)` where it vanishes
/// analytically (complete-integral endpoints). RF/RJ see that argument under
/// a square root, so an O(ε) residue costs O(√ε) accuracy; snapping to the
/// exact zero restores the complete-integral value.
fn clamp_near_zero(value: f64, magnitude: f64) -> f64 {
    if value.abs() <= 16.0 * f64::EPSILON * (1.0 + magnitude) {
        0.0
    } else {
        value
    }
}

/// Generalized Jacobi amplitude `am(n; z|m)`: the inverse of `φ ↦ Π(n; φ|m)`
/// on the principal monotone branch. Reduces to the classical amplitude at
/// `n = 0`.
pub fn gen_jacobi_am(n: f64, z: ComplexValue, m: f64) -> Result<ComplexValue> {
    gen_jacobi_am_with(n, z, m, &AmConfig::default())
}

/// As [`gen_jacobi_am`] with explicit tolerances.
pub fn gen_jacobi_am_with(
    n: f64,
    z: ComplexValue,
    m: f64,
    cfg: &AmConfig,
) -> Result<ComplexValue> {
    check_finite(z)?;
    if z.im == 0.0 {
        Ok(ComplexValue::new(am_real(n, z.re, m, cfg)?, 0.0))
    } else if z.re == 0.0 {
        Ok(ComplexValue::new(0.0, am_imag(n, z.im, m, cfg)?))
    } else {
        Err(Error::Domain(
            "am argument must be real or purely imaginary".into(),
        ))
    }
}

/// Generalized Jacobi elliptic function `sn(n; z|m) = sin(am(n; z|m))`.
pub fn gen_jacobi_sn(n: f64, z: ComplexValue, m: f64) -> Result<ComplexValue> {
    Ok(gen_jacobi_am(n, z, m)?.sin())
}

fn am_real(n: f64, z: f64, m: f64, cfg: &AmConfig) -> Result<f64> {
    if z == 0.0 {
        return Ok(0.0);
    }
    if z < 0.0 {
        return Ok(-am_real(n, -z, m, cfg)?);
    }
    let tol = cfg.tol * (1.0 + z.abs());
    if m < 1.0 && n < 1.0 {
        // The integrand is positive and π-periodic: reduce by whole periods.
        let complete = pi_real_base(n, FRAC_PI_2, m)?;
        let wraps = (z / (2.0 * complete)).round();
        let z_red = z - 2.0 * wraps * complete;
        let phi = newton_bisect(
            |phi| {
                Ok((
                    pi_real_base(n, phi, m)?,
                    pi_real_integrand(n, phi, m)?,
                ))
            },
            z_red,
            -FRAC_PI_2,
            FRAC_PI_2,
            z_red.clamp(-FRAC_PI_2, FRAC_PI_2),
            tol,
            cfg.max_iter,
            "gen_jacobi_am (real branch)",
        )?;
        return Ok(wraps * PI + phi);
    }

    // Restricted branch: the amplitude is capped by the first singularity.
    let phi_m = if m > 1.0 { (1.0 / m.sqrt()).asin() } else { FRAC_PI_2 };
    let phi_n = if n > 1.0 { (1.0 / n.sqrt()).asin() } else { FRAC_PI_2 };
    if m > 1.0 && phi_m < phi_n {
        // √ endpoint: Π stays finite up to φ_m; beyond is out of range.
        let z_max = pi_real_base(n, phi_m, m)?;
        if z > z_max * (1.0 + 1e-12) {
            return Err(Error::Domain(format!(
                "am: z = {z} beyond the branch end Π = {z_max}"
            )));
        }
        if z >= z_max {
            return Ok(phi_m);
        }
        return newton_bisect(
            |phi| Ok((pi_real_base(n, phi, m)?, pi_real_integrand(n, phi, m)?)),
            z,
            0.0,
            phi_m,
            z.min(phi_m),
            tol,
            cfg.max_iter,
            "gen_jacobi_am (restricted branch)",
        );
    }
    // Pole endpoint: Π → ∞ as φ → φ_lim, every z ≥ 0 is reachable.
    let phi_lim = phi_m.min(phi_n);
    let mut hi = phi_lim * (1.0 - 1e-3);
    for _ in 0..60 {
        if pi_real_base(n, hi, m)? >= z {
            break;
        }
        hi = phi_lim - (phi_lim - hi) * 0.125;
    }
    newton_bisect(
        |phi| Ok((pi_real_base(n, phi, m)?, pi_real_integrand(n, phi, m)?)),
        z,
        0.0,
        hi,
        z.min(hi),
        tol,
        cfg.max_iter,
        "gen_jacobi_am (pole branch)",
    )
}

/// dΠ/dφ = 1/((1 − n sin²φ)√(1 − m sin²φ)).
fn pi_real_integrand(n: f64, phi: f64, m: f64) -> Result<f64> {
    let s2 = phi.sin().powi(2);
    let y = 1.0 - m * s2;
    let p = 1.0 - n * s2;
    if y <= 0.0 || p == 0.0 {
        return Err(Error::Domain(format!(
            "Π integrand singular at φ = {phi} (n = {n}, m = {m})"
        )));
    }
    Ok(1.0 / (p * y.sqrt()))
}

/// dG/dψ = 1/((1 + n sinh²ψ)√(1 + m sinh²ψ)).
fn imag_integrand(n: f64, psi: f64, m: f64) -> Result<f64> {
    let sh2 = psi.sinh().powi(2);
    let y = 1.0 + m * sh2;
    let p = 1.0 + n * sh2;
    if y <= 0.0 || p == 0.0 {
        return Err(Error::Domain(format!(
            "G integrand singular at ψ = {psi} (n = {n}, m = {m})"
        )));
    }
    Ok(1.0 / (p * y.sqrt()))
}

/// Solves `G(ψ) = η` on the imaginary axis (`z = iη`, result `φ = iψ`).
fn am_imag(n: f64, eta: f64, m: f64, cfg: &AmConfig) -> Result<f64> {
    if eta == 0.0 {
        return Ok(0.0);
    }
    if eta < 0.0 {
        return Ok(-am_imag(n, -eta, m, cfg)?);
    }
    let tol = cfg.tol * (1.0 + eta.abs());
    let psi_m = if m < 0.0 {
        (1.0 / (-m).sqrt()).asinh()
    } else {
        f64::INFINITY
    };
    let psi_n = if n < 0.0 {
        (1.0 / (-n).sqrt()).asinh()
    } else {
        f64::INFINITY
    };

    if psi_m <= psi_n {
        if psi_m.is_finite() {
            // √ endpoint at ψ_m: G(ψ_m) is finite (complete integral).
            let g_max = pi_imag_axis(n, psi_m, m)?;
            if eta > g_max * (1.0 + 1e-12) {
                return Err(Error::Domain(format!(
                    "am: iη with η = {eta} beyond the branch end G = {g_max}"
                )));
            }
            if eta >= g_max {
                return Ok(psi_m);
            }
            return newton_bisect(
                |psi| Ok((pi_imag_axis(n, psi, m)?, imag_integrand(n, psi, m)?)),
                eta,
                0.0,
                psi_m,
                eta.min(psi_m),
                tol,
                cfg.max_iter,
                "gen_jacobi_am (imaginary branch)",
            );
        }
        // No singularity at all (n, m ≥ 0): G may plateau; expand the bracket.
        let mut hi = eta.max(1.0);
        const PSI_CAP: f64 = 30.0;
        while pi_imag_axis(n, hi, m)? < eta {
            hi *= 2.0;
            if hi > PSI_CAP {
                if pi_imag_axis(n, PSI_CAP, m)? < eta {
                    return Err(Error::Domain(format!(
                        "am: iη with η = {eta} beyond the range of G"
                    )));
                }
                hi = PSI_CAP;
                break;
            }
        }
        return newton_bisect(
            |psi| Ok((pi_imag_axis(n, psi, m)?, imag_integrand(n, psi, m)?)),
            eta,
            0.0,
            hi,
            eta.min(hi),
            tol,
            cfg.max_iter,
            "gen_jacobi_am (imaginary branch)",
        );
    }
    // Pole endpoint at ψ_n: G → ∞, every η ≥ 0 is reachable.
    let mut hi = psi_n * (1.0 - 1e-3);
    for _ in 0..60 {
        if pi_imag_axis(n, hi, m)? >= eta {
            break;
        }
        hi = psi_n - (psi_n - hi) * 0.125;
    }
    newton_bisect(
        |psi| Ok((pi_imag_axis(n, psi, m)?, imag_integrand(n, psi, m)?)),
        eta,
        0.0,
        hi,
        eta.min(hi),
        tol,
        cfg.max_iter,
        "gen_jacobi_am (imaginary pole branch)",
    )
}
