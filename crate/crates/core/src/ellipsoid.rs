//! Standard curvature-line parametrization of the triaxial ellipsoid.
//!
//! The surface `x²/a² + y²/b² + z²/c² = 1` with semi-axes `0 < c < b < a` is
//! parametrized by the confocal coordinates `(u, v)` with
//! `c² < v < b² < u < a²`:
//!
//! ```text
//!                  ⎛     a²(a²−u)(a²−v)        b²(b²−u)(b²−v)        c²(c²−u)(c²−v)   ⎞
//! Ellipsoid(u,v) = ⎜ √ ───────────────── , √ ───────────────── , √ ───────────────── ⎟
//!                  ⎝    (a²−b²)(a²−c²)        (b²−c²)(b²−a²)        (c²−a²)(c²−b²)   ⎠
//! ```
//!
//! The coordinate curves are the lines of curvature and the induced metric is
//! diagonal:
//!
//! ```text
//! g₁₁ = ¼(u−v)·f(u),   g₁₂ = 0,   g₂₂ = ¼(u−v)·(−f(v)),
//! f(t) = t / ((a²−t)(b²−t)(c²−t))
//! ```
//!
//! Positive square roots throughout: the parametrization covers one octant.
//! Full-surface meshes are produced in [`crate::mesh`] by sign reflections.

use serde::Serialize;

use crate::error::{Error, Result};

/// Radicands within this (negative) distance of zero are clamped to zero at
/// the rectangle boundary; beyond it the input is rejected as out of domain.
const RADICAND_CLAMP: f64 = -1e-14;

/// Validated semi-axes `0 < c < b < a` with cached squares.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipsoidShape {
    a: f64,
    b: f64,
    c: f64,
    a2: f64,
    b2: f64,
    c2: f64,
}

impl EllipsoidShape {
    /// Validates `0 < c < b < a` (strict) and caches the squares.
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(Error::Domain("semi-axes must be finite".into()));
        }
        if !(0.0 < c && c < b && b < a) {
            return Err(Error::Domain(format!(
                "semi-axes must satisfy 0 < c < b < a strictly, got a={a}, b={b}, c={c}"
            )));
        }
        Ok(Self {
            a,
            b,
            c,
            a2: a * a,
            b2: b * b,
            c2: c * c,
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn a2(&self) -> f64 {
        self.a2
    }
    pub fn b2(&self) -> f64 {
        self.b2
    }
    pub fn c2(&self) -> f64 {
        self.c2
    }

    /// The weight function `f(t) = t/((a²−t)(b²−t)(c²−t))`.
    ///
    /// Positive on `(b², a²)`, negative on `(c², b²)`; simple poles at the
    /// squared semi-axes.
    pub fn f_weight(&self, t: f64) -> Result<f64> {
        if t == self.a2 || t == self.b2 || t == self.c2 {
            return Err(Error::Pole { t });
        }
        Ok(t / ((self.a2 - t) * (self.b2 - t) * (self.c2 - t)))
    }

    /// Maps curvature-line coordinates to a point in the positive octant.
    ///
    /// Boundary values of the closed rectangle are admitted; radicands that
    /// underflow to small negative values there are clamped to zero.
    pub fn point(&self, coords: CurvatureCoords) -> Result<Point3> {
        let CurvatureCoords { u, v } = coords;
        let (a2, b2, c2) = (self.a2, self.b2, self.c2);
        if !(b2 <= u && u <= a2 && c2 <= v && v <= b2) {
            return Err(Error::Domain(format!(
                "(u, v) = ({u}, {v}) outside the closed rectangle [{b2}, {a2}]×[{c2}, {b2}]"
            )));
        }
        let clamp = |r: f64| -> Result<f64> {
            if r >= 0.0 {
                Ok(r)
            } else if r >= RADICAND_CLAMP {
                Ok(0.0)
            } else {
                Err(Error::Domain(format!("negative radicand {r:e}")))
            }
        };
        let x2 = clamp(a2 * (a2 - u) * (a2 - v) / ((a2 - b2) * (a2 - c2)))?;
        let y2 = clamp(b2 * (b2 - u) * (b2 - v) / ((b2 - c2) * (b2 - a2)))?;
        let z2 = clamp(c2 * (c2 - u) * (c2 - v) / ((c2 - a2) * (c2 - b2)))?;
        Ok(Point3::new(x2.sqrt(), y2.sqrt(), z2.sqrt()))
    }

    /// First fundamental form at an interior point of the rectangle.
    pub fn metric(&self, coords: CurvatureCoords) -> Result<MetricSample> {
        let CurvatureCoords { u, v } = coords;
        if !(self.b2 < u && u < self.a2 && self.c2 < v && v < self.b2) {
            return Err(Error::Pole {
                t: if u <= self.b2 || u >= self.a2 { u } else { v },
            });
        }
        let fu = self.f_weight(u)?;
        let fv = self.f_weight(v)?;
        Ok(MetricSample {
            g11: 0.25 * (u - v) * fu,
            g12: 0.0,
            g22: 0.25 * (u - v) * (-fv),
        })
    }

    /// Residual of the implicit equation, `x²/a² + y²/b² + z²/c² − 1`.
    pub fn implicit_residual(&self, p: Point3) -> f64 {
        p.x * p.x / self.a2 + p.y * p.y / self.b2 + p.z * p.z / self.c2 - 1.0
    }
}

/// A point of the curvature-line rectangle `c² < v < b² < u < a²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureCoords {
    pub u: f64,
    pub v: f64,
}

impl CurvatureCoords {
    pub fn new(u: f64, v: f64) -> Self {
        Self { u, v }
    }
}

/// A point in 3-space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(&self, other: &Point3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn sub(&self, other: &Point3) -> Point3 {
        Point3::new(self.x - other.x, self.y - other.y, self.z - other.z)
    }

    pub fn scale(&self, s: f64) -> Point3 {
        Point3::new(self.x * s, self.y * s, self.z * s)
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn distance(&self, other: &Point3) -> f64 {
        self.sub(other).norm()
    }
}

/// Coefficients of the first fundamental form at one point.
#[derive(Debug, Clone, Copy)]
pub struct MetricSample {
    pub g11: f64,
    pub g12: f64,
    pub g22: f64,
}
