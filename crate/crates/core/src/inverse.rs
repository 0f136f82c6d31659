//! Inverse coordinate functions `U(x)`, `V(y)` and the differential-equation
//! residual checks.
//!
//! The authoritative inverse is a safeguarded Newton solve of
//! `x_of_u(u) = x` with the analytic derivative `√f(u)`, bracketed by
//! `[b², a²]` with bisection fallback. Seeds come from the truncated inverse
//! series near `x = 0` and from a cached forward table elsewhere.
//!
//! The closed forms invert the elliptic integrals through the generalized
//! Jacobi amplitude:
//!
//! ```text
//! U(x) = b²/(1 − n₁·sn²(n₁; x·c√(a²−b²)/(2i·b²) | m₁))
//! V(y) = c²/(1 − n₂·sn²(n₂; y·b√(a²−c²)/(2c²) | m₂))
//! ```
//!
//! The `U` argument is purely imaginary; with `n₁, m₁ < 0` the principal
//! branch produces a real result, verified by the residue check rather than
//! assumed.

use num::complex::Complex64;

use crate::conformal::{ConformalMap, LiouvilleCoords, IM_RESIDUE_LIMIT};
use crate::elliptic::gen_jacobi_sn;
use crate::error::{Error, Result};
use crate::newton::newton_bisect;

/// Fraction of the rectangle side below which an input snaps to the nearest
/// endpoint: the `√f` singularity makes Newton ill-conditioned there.
const ENDPOINT_SNAP: f64 = 1e-8;

/// Tolerances of the inverse root solves.
#[derive(Debug, Clone, Copy)]
pub struct InverseMapConfig {
    /// Residual tolerance: `|x_of_u(u) − x| ≤ tol·(1 + |x|)`.
    pub tol: f64,
    pub max_iter: usize,
    /// Truncation order of the series used to seed small-`x` solves.
    pub series_order_for_seed: usize,
}

impl Default for InverseMapConfig {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 80,
            series_order_for_seed: 4,
        }
    }
}

impl ConformalMap {
    /// `U(x)`: inverse of `x_of_u` on `[0, X(a²)]` by safeguarded Newton.
    pub fn u_of_x(&self, x: f64, cfg: &InverseMapConfig) -> Result<f64> {
        let (b2, a2) = (self.shape().b2(), self.shape().a2());
        let x_max = self.x_max();
        let x = admit_range(x, x_max, "x", "X(a²)")?;
        if x <= ENDPOINT_SNAP * x_max {
            return Ok(b2);
        }
        if x >= (1.0 - ENDPOINT_SNAP) * x_max {
            return Ok(a2);
        }
        // Seed: inverse series near the left end, forward table elsewhere.
        // The safeguard polishes any interior seed; the series is only used
        // well inside its empirical convergence region.
        let seed = if x <= 0.1 * x_max {
            self.seed_series(cfg)?.u_at(x)?.value.clamp(b2, a2)
        } else {
            self.seed_u(x)
        };
        let shape = *self.shape();
        newton_bisect(
            |u| Ok((self.x_of_u(u)?, shape.f_weight(u)?.max(0.0).sqrt())),
            x,
            b2,
            a2,
            seed,
            cfg.tol * (1.0 + x.abs()),
            cfg.max_iter,
            "u_of_x root solve",
        )
    }

    /// `V(y)`: inverse of `y_of_v` on `[0, Y(b²)]`.
    pub fn v_of_y(&self, y: f64, cfg: &InverseMapConfig) -> Result<f64> {
        let (c2, b2) = (self.shape().c2(), self.shape().b2());
        let y_max = self.y_max();
        let y = admit_range(y, y_max, "y", "Y(b²)")?;
        if y <= ENDPOINT_SNAP * y_max {
            return Ok(c2);
        }
        if y >= (1.0 - ENDPOINT_SNAP) * y_max {
            return Ok(b2);
        }
        let seed = if y <= 0.1 * y_max {
            self.seed_series(cfg)?.v_at(y)?.value.clamp(c2, b2)
        } else {
            self.seed_v(y)
        };
        let shape = *self.shape();
        newton_bisect(
            |v| Ok((self.y_of_v(v)?, (-shape.f_weight(v)?).max(0.0).sqrt())),
            y,
            c2,
            b2,
            seed,
            cfg.tol * (1.0 + y.abs()),
            cfg.max_iter,
            "v_of_y root solve",
        )
    }

    /// `U(x)` through the generalized Jacobi amplitude (validation layer).
    pub fn u_of_x_closed(&self, x: f64) -> Result<f64> {
        Ok(self.u_of_x_closed_parts(x)?.0)
    }

    pub(crate) fn u_of_x_closed_parts(&self, x: f64) -> Result<(f64, f64)> {
        let x = admit_range(x, self.x_max(), "x", "X(a²)")?;
        let p = self.params();
        let shape = self.shape();
        // z = x·c√(a²−b²)/(2i·b²) = −i·x·c√(a²−b²)/(2b²)
        let z = Complex64::new(
            0.0,
            -x * shape.c() * (shape.a2() - shape.b2()).sqrt() / (2.0 * shape.b2()),
        );
        let sn = gen_jacobi_sn(p.n1, z, p.m1)?;
        let denom = Complex64::new(1.0, 0.0) - p.n1 * sn * sn;
        let u = Complex64::new(shape.b2(), 0.0) / denom;
        take_real(u)
    }

    /// `V(y)` through the generalized Jacobi amplitude (fully real).
    pub fn v_of_y_closed(&self, y: f64) -> Result<f64> {
        Ok(self.v_of_y_closed_parts(y)?.0)
    }

    pub(crate) fn v_of_y_closed_parts(&self, y: f64) -> Result<(f64, f64)> {
        let y = admit_range(y, self.y_max(), "y", "Y(b²)")?;
        let p = self.params();
        let shape = self.shape();
        let z = Complex64::new(
            y * shape.b() * (shape.a2() - shape.c2()).sqrt() / (2.0 * shape.c2()),
            0.0,
        );
        let sn = gen_jacobi_sn(p.n2, z, p.m2)?;
        let denom = Complex64::new(1.0, 0.0) - p.n2 * sn * sn;
        let v = Complex64::new(shape.c2(), 0.0) / denom;
        take_real(v)
    }

    /// §-residuals of the defining differential equations with
    /// central-difference derivatives:
    ///
    /// ```text
    /// r₁ = f(U(x))·U′(x)² − 1,    r₂ = f(V(y))·V′(y)² + 1
    /// ```
    ///
    /// Both vanish identically for the exact inverses; the returned values
    /// measure the discretization plus inversion error.
    pub fn ode_residuals(
        &self,
        coords: LiouvilleCoords,
        step: f64,
        cfg: &InverseMapConfig,
    ) -> Result<(f64, f64)> {
        let LiouvilleCoords { x, y } = coords;
        if step <= 0.0 {
            return Err(Error::Domain("step must be positive".into()));
        }
        if x - step <= 0.0 || x + step >= self.x_max() || y - step <= 0.0 || y + step >= self.y_max()
        {
            return Err(Error::Domain(format!(
                "(x, y) = ({x}, {y}) with step {step} is not strictly interior"
            )));
        }
        let du = (self.u_of_x(x + step, cfg)? - self.u_of_x(x - step, cfg)?) / (2.0 * step);
        let u = self.u_of_x(x, cfg)?;
        let r1 = self.shape().f_weight(u)? * du * du - 1.0;

        let dv = (self.v_of_y(y + step, cfg)? - self.v_of_y(y - step, cfg)?) / (2.0 * step);
        let v = self.v_of_y(y, cfg)?;
        let r2 = self.shape().f_weight(v)? * dv * dv + 1.0;
        Ok((r1, r2))
    }
}

fn admit_range(t: f64, t_max: f64, name: &str, bound: &str) -> Result<f64> {
    if !t.is_finite() {
        return Err(Error::Domain(format!("{name} must be finite")));
    }
    let slack = 4.0 * f64::EPSILON * t_max;
    if t < -slack || t > t_max + slack {
        return Err(Error::Domain(format!(
            "{name} = {t} outside [0, {bound} = {t_max}]"
        )));
    }
    Ok(t.clamp(0.0, t_max))
}

fn take_real(value: Complex64) -> Result<(f64, f64)> {
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

#[allow(unused)]
fn _assert_send_sync() {
    fn check<T: Send + Sync>() {}
    check::<InverseMapConfig>();
    check::<ConformalMap>();
}
