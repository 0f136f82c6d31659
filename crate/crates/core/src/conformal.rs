//! Forward conformal coordinates `X(u)`, `Y(v)`.
//!
//! Two independent evaluation routes:
//!
//! * **Quadrature (authoritative).** `X(u) = ∫_{b²}^{u} √(+f) dt` and
//!   `Y(v) = ∫_{c²}^{v} √(−f) dt` with the substitutions `t = b² + s²`
//!   (lower endpoint) and `t = a² − s²` (upper endpoint, after splitting the
//!   interval at its midpoint), which remove both `1/√` singularities before
//!   adaptive Gauss–Kronrod integration.
//!
//! * **Closed forms (cross-check).**
//!
//!   ```text
//!   F₁(t) = (2b²i/(c√(a²−b²)))·Π(n₁; φ₁(t)|m₁)
//!   F₂(t) = (2c²/(b√(a²−c²)))·Π(n₂; φ₂(t)|m₂)
//!   ```
//!
//!   with `φ₁(t) = arcsin(−ic√((t−b²)/((b²−c²)t)))` purely imaginary and
//!   `φ₂(t) = arcsin(b√((t−c²)/((b²−c²)t)))` real. The real part is
//!   returned; an imaginary residue above tolerance raises `Branch`.

use num::complex::Complex64;

use crate::ellipsoid::EllipsoidShape;
use crate::elliptic::{ellint_pi, ComplexValue, EllipticArgs};
use crate::error::{Error, Result};
use crate::quadrature;
use crate::series::{forward_series, inverse_series, InverseSeries};

/// Absolute tolerance of one quadrature part; the transformed integrands are
/// smooth, so the достигнутое error is near machine precision.
const QUAD_TOL: f64 = 1e-13;

/// Accepted imaginary residue of the closed forms, relative to `1 + |re|`.
pub const IM_RESIDUE_LIMIT: f64 = 1e-10;

/// Inputs this close to the domain ends (relative to the side length) snap
/// onto the end, absorbing rounding in callers that walk to the boundary.
const END_SNAP: f64 = 4.0 * f64::EPSILON;

/// A point `(x, y)` of the Liouville rectangle
/// `[0, X(a²)] × [0, Y(b²)]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiouvilleCoords {
    pub x: f64,
    pub y: f64,
}

impl LiouvilleCoords {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

/// Parameter bundle of the closed forms `F₁`, `F₂`.
#[derive(Debug, Clone, Copy)]
pub struct JacobiMapParams {
    /// `n₁ = 1 − b²/c² < 0`
    pub n1: f64,
    /// `m₁ = a²(c²−b²)/(c²(a²−b²)) < 0`
    pub m1: f64,
    /// `n₂ = 1 − c²/b² ∈ (0,1)`
    pub n2: f64,
    /// `m₂ = a²(b²−c²)/(b²(a²−c²)) ∈ (0,1)`
    pub m2: f64,
    /// `2b²i/(c√(a²−b²))`, purely imaginary.
    pub prefactor1: ComplexValue,
    /// `2c²/(b√(a²−c²))`.
    pub prefactor2: f64,
    shape: EllipsoidShape,
}

impl JacobiMapParams {
    pub fn for_shape(shape: &EllipsoidShape) -> Self {
        let (a2, b2, c2) = (shape.a2(), shape.b2(), shape.c2());
        Self {
            n1: 1.0 - b2 / c2,
            m1: a2 * (c2 - b2) / (c2 * (a2 - b2)),
            n2: 1.0 - c2 / b2,
            m2: a2 * (b2 - c2) / (b2 * (a2 - c2)),
            prefactor1: Complex64::new(0.0, 2.0 * b2 / (shape.c() * (a2 - b2).sqrt())),
            prefactor2: 2.0 * c2 / (shape.b() * (a2 - c2).sqrt()),
            shape: *shape,
        }
    }

    /// Amplitude of `F₁`: `φ₁(t) = arcsin(−ic√((t−b²)/((b²−c²)t)))`,
    /// purely imaginary for `t ≥ b²`.
    pub fn phi1(&self, t: f64) -> ComplexValue {
        let (b2, c2) = (self.shape.b2(), self.shape.c2());
        let radicand = ((t - b2) / ((b2 - c2) * t)).max(0.0);
        let arg = Complex64::new(0.0, -self.shape.c() * radicand.sqrt());
        arg.asin()
    }

    /// Amplitude of `F₂`: `φ₂(t) = arcsin(b√((t−c²)/((b²−c²)t)))`, real and
    /// saturating at `π/2` for `t = b²`.
    pub fn phi2(&self, t: f64) -> f64 {
        let (b2, c2) = (self.shape.b2(), self.shape.c2());
        let radicand = ((t - c2) / ((b2 - c2) * t)).max(0.0);
        (self.shape.b() * radicand.sqrt()).min(1.0).asin()
    }
}

/// Table of forward values used to seed inverse root solves.
#[derive(Debug, Clone)]
struct SeedTable {
    params: Vec<f64>,
    values: Vec<f64>,
}

impl SeedTable {
    /// Linear interpolation of parameter against value.
    fn param_for(&self, value: f64) -> f64 {
        let n = self.values.len();
        let i = match self
            .values
            .binary_search_by(|v| v.partial_cmp(&value).unwrap())
        {
            Ok(i) => return self.params[i],
            Err(0) => return self.params[0],
            Err(i) if i >= n => return self.params[n - 1],
            Err(i) => i - 1,
        };
        let t = (value - self.values[i]) / (self.values[i + 1] - self.values[i]);
        self.params[i] + t * (self.params[i + 1] - self.params[i])
    }
}

const SEED_TABLE_POINTS: usize = 64;
const SEED_SERIES_ORDER: usize = 4;

/// The forward conformal map of one shape, with cached rectangle bounds,
/// closed-form parameters, and inverse-solve seed data. Immutable after
/// construction.
#[derive(Debug, Clone)]
pub struct ConformalMap {
    shape: EllipsoidShape,
    params: JacobiMapParams,
    x_max: f64,
    y_max: f64,
    u_seed: SeedTable,
    v_seed: SeedTable,
    seed_series: InverseSeries,
}

impl ConformalMap {
    pub fn new(shape: EllipsoidShape) -> Result<Self> {
        let params = JacobiMapParams::for_shape(&shape);
        let x_max = x_quadrature(&shape, shape.a2())?;
        let y_max = y_quadrature(&shape, shape.b2())?;
        let mut u_seed = SeedTable {
            params: Vec::with_capacity(SEED_TABLE_POINTS + 1),
            values: Vec::with_capacity(SEED_TABLE_POINTS + 1),
        };
        let mut v_seed = SeedTable {
            params: Vec::with_capacity(SEED_TABLE_POINTS + 1),
            values: Vec::with_capacity(SEED_TABLE_POINTS + 1),
        };
        for k in 0..=SEED_TABLE_POINTS {
            let t = k as f64 / SEED_TABLE_POINTS as f64;
            let u = shape.b2() + t * (shape.a2() - shape.b2());
            u_seed.params.push(u);
            u_seed.values.push(x_quadrature(&shape, u)?);
            let v = shape.c2() + t * (shape.b2() - shape.c2());
            v_seed.params.push(v);
            v_seed.values.push(y_quadrature(&shape, v)?);
        }
        let seed_series = inverse_series(&forward_series(&shape, SEED_SERIES_ORDER)?)?;
        Ok(Self {
            shape,
            params,
            x_max,
            y_max,
            u_seed,
            v_seed,
            seed_series,
        })
    }

    pub fn shape(&self) -> &EllipsoidShape {
        &self.shape
    }

    pub fn params(&self) -> &JacobiMapParams {
        &self.params
    }

    /// `X(a²)`: the width of the Liouville rectangle.
    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    /// `Y(b²)`: the height of the Liouville rectangle.
    pub fn y_max(&self) -> f64 {
        self.y_max
    }

    /// Interpolated seed for the `u`-inverse (table route).
    pub(crate) fn seed_u(&self, x: f64) -> f64 {
        self.u_seed.param_for(x)
    }

    pub(crate) fn seed_v(&self, y: f64) -> f64 {
        self.v_seed.param_for(y)
    }

    /// The truncated inverse series used to seed small-argument solves.
    /// Non-default orders are rebuilt on demand.
    pub(crate) fn seed_series(
        &self,
        cfg: &crate::inverse::InverseMapConfig,
    ) -> Result<std::borrow::Cow<'_, InverseSeries>> {
        if cfg.series_order_for_seed == SEED_SERIES_ORDER {
            Ok(std::borrow::Cow::Borrowed(&self.seed_series))
        } else {
            let fwd = forward_series(&self.shape, cfg.series_order_for_seed)?;
            Ok(std::borrow::Cow::Owned(inverse_series(&fwd)?))
        }
    }

    /// `X(u) = ∫_{b²}^{u} √(+f(t)) dt` by singularity-free quadrature.
    pub fn x_of_u(&self, u: f64) -> Result<f64> {
        let u = snap_to_range(u, self.shape.b2(), self.shape.a2())
            .ok_or_else(|| domain_u(u, &self.shape))?;
        x_quadrature(&self.shape, u)
    }

    /// `Y(v) = ∫_{c²}^{v} √(−f(t)) dt` by singularity-free quadrature.
    pub fn y_of_v(&self, v: f64) -> Result<f64> {
        let v = snap_to_range(v, self.shape.c2(), self.shape.b2())
            .ok_or_else(|| domain_v(v, &self.shape))?;
        y_quadrature(&self.shape, v)
    }

    /// `X(u)` through `F₁` and the complex Π (validation layer).
    pub fn x_of_u_closed(&self, u: f64) -> Result<f64> {
        Ok(self.x_of_u_closed_parts(u)?.0)
    }

    /// Returns `(value, imaginary residue)`; the residue must already be
    /// within [`IM_RESIDUE_LIMIT`].
    pub(crate) fn x_of_u_closed_parts(&self, u: f64) -> Result<(f64, f64)> {
        let u = snap_to_range(u, self.shape.b2(), self.shape.a2())
            .ok_or_else(|| domain_u(u, &self.shape))?;
        let p = &self.params;
        let pi = ellint_pi(&EllipticArgs::new(p.n1, p.phi1(u), p.m1))?;
        let value = p.prefactor1 * pi;
        take_real(value)
    }

    /// `Y(v)` through `F₂` (validation layer; fully real).
    pub fn y_of_v_closed(&self, v: f64) -> Result<f64> {
        Ok(self.y_of_v_closed_parts(v)?.0)
    }

    pub(crate) fn y_of_v_closed_parts(&self, v: f64) -> Result<(f64, f64)> {
        let v = snap_to_range(v, self.shape.c2(), self.shape.b2())
            .ok_or_else(|| domain_v(v, &self.shape))?;
        let p = &self.params;
        let pi = ellint_pi(&EllipticArgs::real(p.n2, p.phi2(v), p.m2))?;
        take_real(Complex64::new(p.prefactor2, 0.0) * pi)
    }
}

fn domain_u(u: f64, shape: &EllipsoidShape) -> Error {
    Error::Domain(format!(
        "u = {u} outside [b², a²] = [{}, {}]",
        shape.b2(),
        shape.a2()
    ))
}

fn domain_v(v: f64, shape: &EllipsoidShape) -> Error {
    Error::Domain(format!(
        "v = {v} outside [c², b²] = [{}, {}]",
        shape.c2(),
        shape.b2()
    ))
}

fn snap_to_range(t: f64, lo: f64, hi: f64) -> Option<f64> {
    let slack = END_SNAP * (hi - lo);
    if t < lo - slack || t > hi + slack {
        None
    } else {
        Some(t.clamp(lo, hi))
    }
}

fn take_real(value: ComplexValue) -> Result<(f64, f64)> {
    let limit = IM_RESIDUE_LIMIT * (1.0 + value.re.abs());
    if value.im.abs() > limit {
        Err(Error::Branch {
            im_abs: value.im.abs(),
            limit,
        })
    } else {
        Ok((value.re, value.im.abs()))
    }
}

/// `X(u)` after the endpoint substitutions. Lower part uses `t = b² + s²`,
/// the part above the interval midpoint uses `t = a² − s²`.
fn x_quadrature(shape: &EllipsoidShape, u: f64) -> Result<f64> {
    let (a2, b2, c2) = (shape.a2(), shape.b2(), shape.c2());
    if u <= b2 {
        return Ok(0.0);
    }
    let mid = 0.5 * (a2 + b2);
    let lo_end = u.min(mid);
    let lower = quadrature::integrate(
        &|s: f64| {
            let s2 = s * s;
            2.0 * ((b2 + s2) / ((a2 - b2 - s2) * (b2 - c2 + s2))).sqrt()
        },
        0.0,
        (lo_end - b2).sqrt(),
        QUAD_TOL,
    )?;
    if u <= mid {
        return Ok(lower.value);
    }
    let upper = quadrature::integrate(
        &|s: f64| {
            let s2 = s * s;
            2.0 * ((a2 - s2) / ((a2 - b2 - s2) * (a2 - c2 - s2))).sqrt()
        },
        (a2 - u).max(0.0).sqrt(),
        (a2 - mid).sqrt(),
        QUAD_TOL,
    )?;
    Ok(lower.value + upper.value)
}

/// `Y(v)` after the endpoint substitutions `t = c² + s²` and `t = b² − s²`.
fn y_quadrature(shape: &EllipsoidShape, v: f64) -> Result<f64> {
    let (a2, b2, c2) = (shape.a2(), shape.b2(), shape.c2());
    if v <= c2 {
        return Ok(0.0);
    }
    let mid = 0.5 * (b2 + c2);
    let lo_end = v.min(mid);
    let lower = quadrature::integrate(
        &|s: f64| {
            let s2 = s * s;
            2.0 * ((c2 + s2) / ((a2 - c2 - s2) * (b2 - c2 - s2))).sqrt()
        },
        0.0,
        (lo_end - c2).sqrt(),
        QUAD_TOL,
    )?;
    if v <= mid {
        return Ok(lower.value);
    }
    let upper = quadrature::integrate(
        &|s: f64| {
            let s2 = s * s;
            2.0 * ((b2 - s2) / ((a2 - b2 + s2) * (b2 - c2 - s2))).sqrt()
        },
        (b2 - v).max(0.0).sqrt(),
        (b2 - mid).sqrt(),
        QUAD_TOL,
    )?;
    Ok(lower.value + upper.value)
}
