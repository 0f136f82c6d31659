//! Truncated power-series representations of the conformal maps.
//!
//! With the scaled variables
//!
//! ```text
//! w_u = √(u−b²)/√((a²−b²)(b²−c²)),    w_v = √(v−c²)/√((a²−c²)(b²−c²))
//! ```
//!
//! the forward maps expand about the rectangle corners `u₀ = b²`, `v₀ = c²`:
//!
//! ```text
//! X(u) = Σ A_{2k+1} w_u^{2k+1},    Y(v) = Σ B_{2k+1} w_v^{2k+1}
//! ```
//!
//! and Lagrange reversion of these odd series gives the inverse maps
//!
//! ```text
//! U(x) = b² + (a²−b²)(b²−c²) Σ C_{2k} x^{2k}
//! V(y) = c² + (c²−a²)(c²−b²) Σ D_{2k} y^{2k}
//! ```
//!
//! Coefficients are computed algorithmically — Taylor expansion of the
//! substituted integrand, termwise integration, reversion — in exact rational
//! arithmetic (every finite `f64` input is rational), never copied from a
//! table. The normalized families α, β, γ, δ factor out the universal
//! haversine/inverse-haversine numbers:
//!
//! ```text
//! hav(z) = sin²(z/2) = Σ_{k≥1} (−1)^{k−1}/(2(2k)!) · z^{2k}
//! hav⁻¹(z) = 2 arcsin(√z) = Σ_{k≥0} binom(2k,k)/(2^{2k−1}(2k+1)) · z^{k+½}
//! ```

mod rational;

use num::rational::BigRational;
use num::{One, Zero};

pub(crate) use rational::rat;
use rational::{binomial, factorial, mul_trunc, rat_i, rat_pow, revert, sqrt_one, to_f64, Rat};

use crate::ellipsoid::EllipsoidShape;
use crate::error::{Error, Result};

/// Default truncation order.
pub const DEFAULT_ORDER: usize = 8;
/// Expansion orders beyond this are rejected with `OrderTooLarge`.
pub const MAX_ORDER: usize = 16;

/// Beyond this value of the scaled variable the truncation error is no
/// longer negligible and evaluations carry `trusted = false`.
pub const TRUST_RADIUS: f64 = 0.5;

/// One series evaluation together with a quality flag.
#[derive(Debug, Clone, Copy)]
pub struct SeriesEval {
    pub value: f64,
    /// The scaled variable `w` the series was evaluated at.
    pub scaled_var: f64,
    /// `|w| ≤ 0.5`; outside this empirical radius the result is a formal
    /// extrapolation.
    pub trusted: bool,
}

/// Scale constants shared by evaluation paths.
#[derive(Debug, Clone, Copy)]
struct Scales {
    a2: f64,
    b2: f64,
    c2: f64,
    /// `(a²−b²)(b²−c²)`
    rho_u_sq: f64,
    /// `(a²−c²)(b²−c²)`
    rho_v_sq: f64,
    /// `A₁ = 2b`, `B₁ = 2c`: linear scales of the inverse variables.
    a1: f64,
    b1: f64,
}

impl Scales {
    fn of(shape: &EllipsoidShape) -> Self {
        let (a2, b2, c2) = (shape.a2(), shape.b2(), shape.c2());
        Self {
            a2,
            b2,
            c2,
            rho_u_sq: (a2 - b2) * (b2 - c2),
            rho_v_sq: (a2 - c2) * (b2 - c2),
            a1: 2.0 * shape.b(),
            b1: 2.0 * shape.c(),
        }
    }
}

/// The forward coefficient families `A_{2k+1}`, `B_{2k+1}` for `k = 0..=K`.
#[derive(Debug, Clone)]
pub struct ForwardSeries {
    order: usize,
    a: Vec<Rat>,
    b: Vec<Rat>,
    a_f: Vec<f64>,
    b_f: Vec<f64>,
    scales: Scales,
}

/// The reversed coefficient families `C_{2k}`, `D_{2k}` for `k = 1..=K`.
#[derive(Debug, Clone)]
pub struct InverseSeries {
    order: usize,
    c: Vec<Rat>,
    d: Vec<Rat>,
    c_f: Vec<f64>,
    d_f: Vec<f64>,
    scales: Scales,
}

/// The §-normalized families α, β (odd, `k = 0..=K`) and γ, δ (even,
/// `k = 1..=K`), with the universal haversine factors divided out.
#[derive(Debug, Clone)]
pub struct NormalizedCoefficients {
    order: usize,
    alpha: Vec<Rat>,
    beta: Vec<Rat>,
    gamma: Vec<Rat>,
    delta: Vec<Rat>,
    rb: Rat,
    rc: Rat,
}

/// Expands `X(u)`, `Y(v)` about `u₀ = b²`, `v₀ = c²` to order `K`
/// (coefficients of `w^{2k+1}` for `k ≤ K`) in exact rational arithmetic.
///
/// The substitution `t = b² + s²` turns the integrand of `X` into
/// `2√((b²+s²)/((a²−b²−s²)(b²−c²+s²)))`, an even analytic function of `s`;
/// its Taylor coefficients integrate termwise. Same for `Y` with
/// `t = c² + s²`.
pub fn forward_series(shape: &EllipsoidShape, order: usize) -> Result<ForwardSeries> {
    if order < 1 {
        return Err(Error::Domain("series order must be at least 1".into()));
    }
    if order > MAX_ORDER {
        return Err(Error::OrderTooLarge {
            requested: order,
            limit: MAX_ORDER,
        });
    }
    let n = order + 1;
    let (ra, rb, rc) = (rat(shape.a()), rat(shape.b()), rat(shape.c()));
    let (ra2, rb2, rc2) = (&ra * &ra, &rb * &rb, &rc * &rc);
    let d_ab = &ra2 - &rb2;
    let d_bc = &rb2 - &rc2;
    let d_ac = &ra2 - &rc2;
    let rho_u = &d_ab * &d_bc;
    let rho_v = &d_ac * &d_bc;

    // u-side: Q(σ) = (1 + σ/b²)·ρ_u²/((a²−b²−σ)(b²−c²+σ)), Q(0) = 1.
    let q_u = normalized_radicand(&rb2, &d_ab, &d_bc, true, &rho_u, n);
    let p_u = sqrt_one(&q_u, n);
    // v-side: Q(σ) = (1 + σ/c²)·ρ_v²/((a²−c²−σ)(b²−c²−σ)).
    let q_v = normalized_radicand(&rc2, &d_ac, &d_bc, false, &rho_v, n);
    let p_v = sqrt_one(&q_v, n);

    let two = rat_i(2);
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for k in 0..n {
        let denom = rat_i(2 * k as i64 + 1);
        a.push(&two * &rb * &p_u[k] * rat_pow(&rho_u, k as i64) / &denom);
        b.push(&two * &rc * &p_v[k] * rat_pow(&rho_v, k as i64) / &denom);
    }
    let a_f = a.iter().map(to_f64).collect();
    let b_f = b.iter().map(to_f64).collect();
    Ok(ForwardSeries {
        order,
        a,
        b,
        a_f,
        b_f,
        scales: Scales::of(shape),
    })
}

/// Series of `(1 + σ/t₀)·ρ²/((d₁−σ)(d₂±σ))` in `σ`; the sign of the second
/// factor is `+σ` for the u-side and `−σ` for the v-side.
fn normalized_radicand(t0: &Rat, d1: &Rat, d2: &Rat, second_plus: bool, rho: &Rat, n: usize) -> Vec<Rat> {
    let lin = vec![Rat::one(), t0.clone().recip()];
    let inv1: Vec<Rat> = (0..n).map(|j| rat_pow(&d1.clone().recip(), j as i64 + 1)).collect();
    let inv2: Vec<Rat> = (0..n)
        .map(|j| {
            let base = rat_pow(&d2.clone().recip(), j as i64 + 1);
            if second_plus && j % 2 == 1 {
                -base
            } else {
                base
            }
        })
        .collect();
    let q = mul_trunc(&mul_trunc(&lin, &inv1, n), &inv2, n);
    q.into_iter().map(|t| t * rho).collect()
}

/// Lagrange reversion of the forward series: the odd series for `w(x)` is
/// squared and recomposed into the stated even form for `U(x)`, `V(y)`.
pub fn inverse_series(fwd: &ForwardSeries) -> Result<InverseSeries> {
    let k_max = fwd.order;
    let len = 2 * k_max + 2;
    let mut a_full = vec![Rat::zero(); len];
    let mut b_full = vec![Rat::zero(); len];
    for k in 0..=k_max {
        if 2 * k + 1 < len {
            a_full[2 * k + 1] = fwd.a[k].clone();
            b_full[2 * k + 1] = fwd.b[k].clone();
        }
    }
    let w_u = revert(&a_full, len)?;
    let w_v = revert(&b_full, len)?;
    let sq_u = mul_trunc(&w_u, &w_u, 2 * k_max + 1);
    let sq_v = mul_trunc(&w_v, &w_v, 2 * k_max + 1);
    let c: Vec<Rat> = (1..=k_max).map(|k| sq_u[2 * k].clone()).collect();
    let d: Vec<Rat> = (1..=k_max).map(|k| sq_v[2 * k].clone()).collect();
    let c_f = c.iter().map(to_f64).collect();
    let d_f = d.iter().map(to_f64).collect();
    Ok(InverseSeries {
        order: k_max,
        c,
        d,
        c_f,
        d_f,
        scales: fwd.scales,
    })
}

/// Divides out the universal haversine factors.
pub fn normalized_coefficients(
    fwd: &ForwardSeries,
    inv: &InverseSeries,
) -> Result<NormalizedCoefficients> {
    if fwd.order != inv.order {
        return Err(Error::Domain(format!(
            "truncation orders differ: forward K = {}, inverse K = {}",
            fwd.order, inv.order
        )));
    }
    let rb = rat(fwd.scales.b2).sqrt_exact().unwrap_or_else(|| rat((fwd.scales.b2).sqrt()));
    let rc = rat(fwd.scales.c2).sqrt_exact().unwrap_or_else(|| rat((fwd.scales.c2).sqrt()));
    let mut alpha = Vec::with_capacity(fwd.order + 1);
    let mut beta = Vec::with_capacity(fwd.order + 1);
    for k in 0..=fwd.order {
        let factor = inv_hav_factor(k);
        // A_{2k+1} = inv_hav_factor(k)·α_{2k+1}/b^{2k−1}
        alpha.push(&fwd.a[k] * rat_pow(&rb, 2 * k as i64 - 1) / &factor);
        let sign = if k % 2 == 0 { Rat::one() } else { -Rat::one() };
        beta.push(sign * &fwd.b[k] * rat_pow(&rc, 2 * k as i64 - 1) / &factor);
    }
    let mut gamma = Vec::with_capacity(inv.order);
    let mut delta = Vec::with_capacity(inv.order);
    for k in 1..=inv.order {
        // C_{2k} = (−1)^{k−1} γ_{2k} / (2(2k)!·b^{2(2k−1)})
        let b_pow = rat_pow(&rb, 2 * (2 * k as i64 - 1));
        let c_pow = rat_pow(&rc, 2 * (2 * k as i64 - 1));
        gamma.push(&inv.c[k - 1] * &b_pow / hav_factor(k));
        let two_fact = rat_i(2) * factorial(2 * k as u64);
        delta.push(&inv.d[k - 1] * &c_pow * &two_fact);
    }
    Ok(NormalizedCoefficients {
        order: fwd.order,
        alpha,
        beta,
        gamma,
        delta,
        rb,
        rc,
    })
}

/// `(−1)^{k−1}/(2(2k)!)`: the `z^{2k}` Maclaurin coefficient of
/// `hav(z) = sin²(z/2)`, for `k ≥ 1`.
pub fn hav_factor(k: usize) -> BigRational {
    let sign = if k % 2 == 1 { Rat::one() } else { -Rat::one() };
    sign / (rat_i(2) * factorial(2 * k as u64))
}

/// `binom(2k,k)/(2^{2k−1}(2k+1))`: the coefficient of `(√z)^{2k+1}` in
/// `hav⁻¹(z) = 2 arcsin(√z)`, for `k ≥ 0`.
pub fn inv_hav_factor(k: usize) -> BigRational {
    binomial(2 * k as u64, k as u64) / (rat_pow(&rat_i(2), 2 * k as i64 - 1) * rat_i(2 * k as i64 + 1))
}

trait SqrtExact {
    fn sqrt_exact(&self) -> Option<Rat>;
}

impl SqrtExact for Rat {
    /// Exact square root for rationals whose numerator and denominator are
    /// perfect squares (always the case for `b² = b·b` built from f64 `b`).
    fn sqrt_exact(&self) -> Option<Rat> {
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        if &(&n * &n) == self.numer() && &(&d * &d) == self.denom() {
            Some(Rat::new(n, d))
        } else {
            None
        }
    }
}

impl ForwardSeries {
    pub fn order(&self) -> usize {
        self.order
    }

    /// `A_{2k+1}` for `k = 0..=K`, exact.
    pub fn a_coeffs(&self) -> &[Rat] {
        &self.a
    }

    pub fn b_coeffs(&self) -> &[Rat] {
        &self.b
    }

    /// Evaluates the `X(u)` series.
    pub fn x_at(&self, u: f64) -> Result<SeriesEval> {
        let w2 = scaled_square(u, self.scales.b2, self.scales.rho_u_sq, self.scales.a2)?;
        Ok(eval_odd(&self.a_f, w2))
    }

    /// Evaluates the `Y(v)` series.
    pub fn y_at(&self, v: f64) -> Result<SeriesEval> {
        let w2 = scaled_square(v, self.scales.c2, self.scales.rho_v_sq, self.scales.b2)?;
        Ok(eval_odd(&self.b_f, w2))
    }
}

impl InverseSeries {
    pub fn order(&self) -> usize {
        self.order
    }

    /// `C_{2k}` for `k = 1..=K`, exact.
    pub fn c_coeffs(&self) -> &[Rat] {
        &self.c
    }

    pub fn d_coeffs(&self) -> &[Rat] {
        &self.d
    }

    /// Evaluates the `U(x)` series: `b² + (a²−b²)(b²−c²)·Σ C_{2k} x^{2k}`.
    pub fn u_at(&self, x: f64) -> Result<SeriesEval> {
        if !x.is_finite() {
            return Err(Error::Domain("series argument must be finite".into()));
        }
        let sum = eval_even(&self.c_f, x * x);
        let w = x.abs() / self.scales.a1;
        Ok(SeriesEval {
            value: self.scales.b2 + self.scales.rho_u_sq * sum,
            scaled_var: w,
            trusted: w <= TRUST_RADIUS,
        })
    }

    /// Evaluates the `V(y)` series: `c² + (c²−a²)(c²−b²)·Σ D_{2k} y^{2k}`.
    pub fn v_at(&self, y: f64) -> Result<SeriesEval> {
        if !y.is_finite() {
            return Err(Error::Domain("series argument must be finite".into()));
        }
        let sum = eval_even(&self.d_f, y * y);
        let w = y.abs() / self.scales.b1;
        Ok(SeriesEval {
            value: self.scales.c2 + self.scales.rho_v_sq * sum,
            scaled_var: w,
            trusted: w <= TRUST_RADIUS,
        })
    }
}

impl NormalizedCoefficients {
    pub fn order(&self) -> usize {
        self.order
    }

    /// `α_{2k+1}` for `k = 0..=K`.
    pub fn alpha(&self) -> &[Rat] {
        &self.alpha
    }

    pub fn beta(&self) -> &[Rat] {
        &self.beta
    }

    /// `γ_{2k}` for `k = 1..=K`.
    pub fn gamma(&self) -> &[Rat] {
        &self.gamma
    }

    pub fn delta(&self) -> &[Rat] {
        &self.delta
    }

    /// Rebuilds `A_{2k+1}` from `α_{2k+1}` (definitional inverse).
    pub fn rebuild_a(&self, k: usize) -> Rat {
        inv_hav_factor(k) * &self.alpha[k] / rat_pow(&self.rb, 2 * k as i64 - 1)
    }

    /// Rebuilds `B_{2k+1}` from `β_{2k+1}`; the `(−1)^k` factor is part of
    /// the §-normalization.
    pub fn rebuild_b(&self, k: usize) -> Rat {
        let sign = if k.is_multiple_of(2) { Rat::one() } else { -Rat::one() };
        sign * inv_hav_factor(k) * &self.beta[k] / rat_pow(&self.rc, 2 * k as i64 - 1)
    }

    /// Rebuilds `C_{2k}` from `γ_{2k}` via the haversine factor, `k ≥ 1`.
    pub fn rebuild_c(&self, k: usize) -> Rat {
        hav_factor(k) * &self.gamma[k - 1] / rat_pow(&self.rb, 2 * (2 * k as i64 - 1))
    }

    /// Rebuilds `D_{2k}` from `δ_{2k}`, `k ≥ 1`.
    pub fn rebuild_d(&self, k: usize) -> Rat {
        &self.delta[k - 1] / (rat_i(2) * factorial(2 * k as u64) * rat_pow(&self.rc, 2 * (2 * k as i64 - 1)))
    }
}

fn scaled_square(t: f64, t0: f64, rho_sq: f64, t_hi: f64) -> Result<f64> {
    if !t.is_finite() {
        return Err(Error::Domain("series argument must be finite".into()));
    }
    let num = t - t0;
    if num < -1e-14 * (t_hi - t0) {
        return Err(Error::Domain(format!(
            "negative radicand in the scaled variable: t = {t} below the expansion point {t0}"
        )));
    }
    Ok(num.max(0.0) / rho_sq)
}

fn eval_odd(coeffs: &[f64], w2: f64) -> SeriesEval {
    let w = w2.sqrt();
    let mut acc = 0.0;
    for c in coeffs.iter().rev() {
        acc = acc * w2 + c;
    }
    SeriesEval {
        value: acc * w,
        scaled_var: w,
        trusted: w <= TRUST_RADIUS,
    }
}

fn eval_even(coeffs: &[f64], x2: f64) -> f64 {
    let mut acc = 0.0;
    for c in coeffs.iter().rev() {
        acc = acc * x2 + c;
    }
    acc * x2
}
