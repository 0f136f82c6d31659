//! Oracles shared by the integration tests: double-exponential quadrature of
//! defining integrals and a bisection amplitude solver. Deliberately
//! independent of the production evaluation paths (Carlson duplication,
//! Gauss–Kronrod panels, Newton inversion).

use std::f64::consts::FRAC_PI_2;

/// Tanh-sinh quadrature on a finite interval; handles integrable endpoint
/// singularities. Levels are doubled until the value stabilizes.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let node = |t: f64| -> (f64, f64) {
        let u = FRAC_PI_2 * t.sinh();
        let x = mid + half * u.tanh();
        let w = half * FRAC_PI_2 * t.cosh() / (u.cosh() * u.cosh());
        (x, w)
    };
    let eval = |x: f64, w: f64| -> f64 {
        if !(x > a && x < b) || w < 1e-300 {
            return 0.0;
        }
        let v = f(x) * w;
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };

    let t_max = 6.5;
    let mut h = 1.0;
    let (x0, w0) = node(0.0);
    let mut sum = eval(x0, w0);
    let mut k = 1;
    while k as f64 * h <= t_max {
        let t = k as f64 * h;
        let (xp, wp) = node(t);
        let (xm, wm) = node(-t);
        sum += eval(xp, wp) + eval(xm, wm);
        k += 1;
    }
    let mut value = h * sum;
    for _ in 0..10 {
        h *= 0.5;
        let mut odd = 0.0;
        let mut k = 1;
        while k as f64 * h <= t_max {
            let t = k as f64 * h;
            let (xp, wp) = node(t);
            let (xm, wm) = node(-t);
            odd += eval(xp, wp) + eval(xm, wm);
            k += 2;
        }
        let next = 0.5 * value + h * odd;
        if (next - value).abs() <= 1e-15 * (1.0 + next.abs()) {
            return next;
        }
        value = next;
    }
    value
}

/// Tanh-sinh quadrature where the integrand receives the distances to the
/// two endpoints, `(x − a, b − x)`, computed without cancellation. Required
/// for `1/√` endpoint singularities: forming `x` first and subtracting would
/// destroy the small distance and with it the integrand accuracy.
pub fn tanh_sinh_endpoints<F: Fn(f64, f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    // (1 ± tanh u) via the exponential forms, monotone and cancellation-free.
    let node = |t: f64| -> (f64, f64, f64) {
        let u = FRAC_PI_2 * t.sinh();
        let da = half * 2.0 / (1.0 + (-2.0 * u).exp());
        let db = half * 2.0 / (1.0 + (2.0 * u).exp());
        let w = half * FRAC_PI_2 * t.cosh() / (u.cosh() * u.cosh());
        (da, db, w)
    };
    let eval = |da: f64, db: f64, w: f64| -> f64 {
        if da <= 0.0 || db <= 0.0 || w < 1e-300 {
            return 0.0;
        }
        let v = f(da, db) * w;
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    let t_max = 6.5;
    let mut h = 1.0;
    let (da0, db0, w0) = node(0.0);
    let mut sum = eval(da0, db0, w0);
    let mut k = 1;
    while k as f64 * h <= t_max {
        let t = k as f64 * h;
        let (dap, dbp, wp) = node(t);
        let (dam, dbm, wm) = node(-t);
        sum += eval(dap, dbp, wp) + eval(dam, dbm, wm);
        k += 1;
    }
    let mut value = h * sum;
    for _ in 0..10 {
        h *= 0.5;
        let mut odd = 0.0;
        let mut k = 1;
        while k as f64 * h <= t_max {
            let t = k as f64 * h;
            let (dap, dbp, wp) = node(t);
            let (dam, dbm, wm) = node(-t);
            odd += eval(dap, dbp, wp) + eval(dam, dbm, wm);
            k += 2;
        }
        let next = 0.5 * value + h * odd;
        if (next - value).abs() <= 1e-15 * (1.0 + next.abs()) {
            return next;
        }
        value = next;
    }
    value
}

/// Exp-sinh quadrature on `[0, ∞)` for integrands decaying at least like
/// `t^{−3/2}`.
pub fn exp_sinh<F: Fn(f64) -> f64>(f: F) -> f64 {
    let node = |t: f64| -> (f64, f64) {
        let x = (FRAC_PI_2 * t.sinh()).exp();
        let w = FRAC_PI_2 * t.cosh() * x;
        (x, w)
    };
    let eval = |x: f64, w: f64| -> f64 {
        if !x.is_finite() || w < 1e-300 || !w.is_finite() {
            return 0.0;
        }
        let v = f(x) * w;
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    let t_max = 6.0;
    let mut h = 1.0;
    let (x0, w0) = node(0.0);
    let mut sum = eval(x0, w0);
    let mut k = 1;
    while k as f64 * h <= t_max {
        let t = k as f64 * h;
        let (xp, wp) = node(t);
        let (xm, wm) = node(-t);
        sum += eval(xp, wp) + eval(xm, wm);
        k += 1;
    }
    let mut value = h * sum;
    for _ in 0..10 {
        h *= 0.5;
        let mut odd = 0.0;
        let mut k = 1;
        while k as f64 * h <= t_max {
            let t = k as f64 * h;
            let (xp, wp) = node(t);
            let (xm, wm) = node(-t);
            odd += eval(xp, wp) + eval(xm, wm);
            k += 2;
        }
        let next = 0.5 * value + h * odd;
        if (next - value).abs() <= 1e-15 * (1.0 + next.abs()) {
            return next;
        }
        value = next;
    }
    value
}

/// Defining integral of `RF`: `½∫₀^∞ dt/√((t+x)(t+y)(t+z))`.
pub fn rf_integral(x: f64, y: f64, z: f64) -> f64 {
    exp_sinh(|t| 0.5 / ((t + x) * (t + y) * (t + z)).sqrt())
}

/// Defining integral of `RJ`: `(3/2)∫₀^∞ dt/((t+p)√((t+x)(t+y)(t+z)))`.
pub fn rj_integral(x: f64, y: f64, z: f64, p: f64) -> f64 {
    exp_sinh(|t| 1.5 / ((t + p) * ((t + x) * (t + y) * (t + z)).sqrt()))
}

/// Defining integral of `Π(n; φ|m)` for real amplitude.
pub fn pi_integral(n: f64, phi: f64, m: f64) -> f64 {
    tanh_sinh(
        |theta| {
            let s2 = theta.sin().powi(2);
            1.0 / ((1.0 - n * s2) * (1.0 - m * s2).sqrt())
        },
        0.0,
        phi,
    )
}

/// The real integral `G(ψ)` with `Π(n; iψ|m) = i G(ψ)`.
pub fn pi_imag_integral(n: f64, psi: f64, m: f64) -> f64 {
    tanh_sinh(
        |tau| {
            let sh2 = tau.sinh().powi(2);
            1.0 / ((1.0 + n * sh2) * (1.0 + m * sh2).sqrt())
        },
        0.0,
        psi,
    )
}

/// First-kind integral `F(φ|m)` by quadrature.
pub fn f_integral(phi: f64, m: f64) -> f64 {
    pi_integral(0.0, phi, m)
}

/// Classical amplitude by bisection on `F(φ|m) = z`.
pub fn bisect_amplitude(z: f64, m: f64) -> f64 {
    let mut lo = 0.0f64;
    let mut hi = FRAC_PI_2;
    while f_integral(hi, m) < z {
        hi += FRAC_PI_2;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f_integral(mid, m) < z {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-14 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Forward map `X(u)` by tanh-sinh quadrature of the raw singular integrand
/// `√(+f)` on `[b², u]` (no substitution: an independent route). On that
/// interval `f = t/((a²−t)(t−b²)(t−c²))` with `t − b² = da` taken directly
/// from the node to keep the `1/√` endpoint accurate.
pub fn x_raw_integral(a2: f64, b2: f64, c2: f64, u: f64) -> f64 {
    tanh_sinh_endpoints(
        |da, db| {
            let t = b2 + da;
            ((b2 + da) / (((a2 - u) + db) * da * (t - c2))).sqrt()
        },
        b2,
        u,
    )
}

/// Forward map `Y(v)` by tanh-sinh quadrature of `√(−f)` on `[c², v]`, with
/// `−f = t/((a²−t)(b²−t)(t−c²))` and `t − c² = da` from the node.
pub fn y_raw_integral(a2: f64, b2: f64, c2: f64, v: f64) -> f64 {
    tanh_sinh_endpoints(
        |da, db| {
            let t = c2 + da;
            (t / ((a2 - t) * ((b2 - v) + db) * da)).sqrt()
        },
        c2,
        v,
    )
}
