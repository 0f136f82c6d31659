//! Verification suite: every acceptance criterion with its pinned tolerance.
//!
//! Each criterion function returns a [`CriterionReport`] with the measured
//! residuals; [`run_all`] builds the shared map once and runs them in order.

use std::time::Instant;

use num::rational::BigRational;
use num::traits::Pow;

use crate::conformal::ConformalMap;
use crate::ellipsoid::{CurvatureCoords, EllipsoidShape};
use crate::error::Result;
use crate::inverse::InverseMapConfig;
use crate::mesh::{conformality_report, liouville_grid, GridSource};
use crate::series::{forward_series, inverse_series, normalized_coefficients, rat};

/// Closed-form vs quadrature forward maps.
pub const TOL_CLOSED_VS_QUADRATURE: f64 = 1e-9;
/// Imaginary residues of the closed forms.
pub const TOL_IM_RESIDUE: f64 = 1e-10;
/// Roundtrip `u → x → u`, relative to `a²`.
pub const TOL_ROUNDTRIP_REL: f64 = 1e-9;
/// Closed-form inverse vs root-solve inverse.
pub const TOL_INVERSE_AGREEMENT: f64 = 1e-8;
/// Liouville-form residuals `|F|/E`, `|E−G|/E`, `|E−¼(U−V)|/E`.
pub const TOL_LIOUVILLE_REL: f64 = 1e-5;
/// Differential-equation residuals.
pub const TOL_ODE_RESIDUAL: f64 = 1e-5;
/// Series vs quadrature/root-solve near the expansion points.
pub const TOL_SERIES_NEAR: f64 = 1e-12;
/// Implicit-surface residual of mesh vertices.
pub const TOL_MESH_IMPLICIT: f64 = 1e-10;
/// Median corner-angle error of the 65×65 Liouville mesh, degrees.
pub const TOL_MESH_ANGLE_MEDIAN_DEG: f64 = 0.1;
/// Median length-ratio error of the 65×65 Liouville mesh.
pub const TOL_MESH_RATIO_MEDIAN: f64 = 1e-2;
/// Required shrink factor of the angle statistic under 2× refinement.
pub const MIN_ANGLE_REFINE_FACTOR: f64 = 3.0;
/// Interpolant mesh vs exact mesh, max vertex distance at n = 64.
pub const TOL_INTERP_MESH_DIST: f64 = 1e-3;
/// Required shrink factor of that distance at n = 128.
pub const MIN_INTERP_REFINE_FACTOR: f64 = 4.0;

/// Verification profile: `Quick` trims sample counts for a fast smoke run;
/// `Full` uses the stated sizes everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    Quick,
    Full,
}

/// Outcome of one criterion.
#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub index: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        format!(
            "[{}] criterion {}: {} — {} ({:.2}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.index,
            self.name,
            self.detail,
            self.seconds
        )
    }
}

/// Runs every criterion for the given shape; failures are collected, not
/// short-circuited.
pub fn run_all(shape: &EllipsoidShape, profile: Profile) -> Result<Vec<CriterionReport>> {
    let map = ConformalMap::new(*shape)?;
    Ok(vec![
        criterion_1_coefficient_fixtures(shape),
        criterion_2_closed_vs_quadrature(&map),
        criterion_3_inversion_roundtrips(&map, profile),
        criterion_4_liouville_property(&map, profile),
        criterion_5_differential_equations(&map, profile),
        criterion_6_series_accuracy(&map),
        criterion_7_mesh_conformality(&map, profile),
        criterion_8_figure_procedure(&map, profile),
    ])
}

fn finish(
    index: usize,
    name: &'static str,
    start: Instant,
    outcome: Result<(bool, String)>,
) -> CriterionReport {
    let (passed, detail) = match outcome {
        Ok(pair) => pair,
        Err(e) => (false, format!("error: {e}")),
    };
    CriterionReport {
        index,
        name,
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Criterion 1: in exact rational arithmetic the computed coefficient
/// families equal the printed closed forms, with zero tolerance.
pub fn criterion_1_coefficient_fixtures(shape: &EllipsoidShape) -> CriterionReport {
    let start = Instant::now();
    let outcome = (|| {
        let fwd = forward_series(shape, 3)?;
        let inv = inverse_series(&fwd)?;
        let norm = normalized_coefficients(&fwd, &inv)?;
        let fix = fixtures::Fixtures::for_shape(shape);
        let mut failures: Vec<String> = Vec::new();
        let mut check = |name: &str, got: &BigRational, want: &BigRational| {
            if got != want {
                failures.push(format!("{name}: computed {got} ≠ fixture {want}"));
            }
        };
        for k in 0..3 {
            check(&format!("A{}", 2 * k + 1), &fwd.a_coeffs()[k], &fix.a[k]);
            check(&format!("B{}", 2 * k + 1), &fwd.b_coeffs()[k], &fix.b[k]);
            check(&format!("alpha{}", 2 * k + 1), &norm.alpha()[k], &fix.alpha[k]);
            check(&format!("beta{}", 2 * k + 1), &norm.beta()[k], &fix.beta[k]);
        }
        for k in 1..=3usize {
            check(&format!("C{}", 2 * k), &inv.c_coeffs()[k - 1], &fix.c[k - 1]);
            check(&format!("D{}", 2 * k), &inv.d_coeffs()[k - 1], &fix.d[k - 1]);
            check(&format!("gamma{}", 2 * k), &norm.gamma()[k - 1], &fix.gamma[k - 1]);
            check(&format!("delta{}", 2 * k), &norm.delta()[k - 1], &fix.delta[k - 1]);
        }
        if failures.is_empty() {
            Ok((true, "24 coefficients exact (zero tolerance)".to_string()))
        } else {
            Ok((false, failures.join("; ")))
        }
    })();
    finish(1, "coefficient fixtures", start, outcome)
}

/// Criterion 2: closed forms vs quadrature on 100-point grids.
pub fn criterion_2_closed_vs_quadrature(map: &ConformalMap) -> CriterionReport {
    let start = Instant::now();
    let outcome = (|| {
        let shape = map.shape();
        let mut max_dx: f64 = 0.0;
        let mut max_dy: f64 = 0.0;
        let mut max_res: f64 = 0.0;
        for i in 0..100 {
            let t = i as f64 / 99.0;
            let u = shape.b2() + t * (shape.a2() - shape.b2());
            let (closed, res) = map.x_of_u_closed_parts(u)?;
            max_dx = max_dx.max((closed - map.x_of_u(u)?).abs());
            max_res = max_res.max(res);
            let v = shape.c2() + t * (shape.b2() - shape.c2());
            let (closed, res) = map.y_of_v_closed_parts(v)?;
            max_dy = max_dy.max((closed - map.y_of_v(v)?).abs());
            max_res = max_res.max(res);
        }
        let passed = max_dx <= TOL_CLOSED_VS_QUADRATURE
            && max_dy <= TOL_CLOSED_VS_QUADRATURE
            && max_res <= TOL_IM_RESIDUE;
        Ok((
            passed,
            format!(
                "max |X_closed−X| = {max_dx:.2e}, max |Y_closed−Y| = {max_dy:.2e} (tol {TOL_CLOSED_VS_QUADRATURE:.0e}), max im residue = {max_res:.2e} (tol {TOL_IM_RESIDUE:.0e})"
            ),
        ))
    })();
    finish(2, "closed form vs quadrature", start, outcome)
}

/// Criterion 3: inversion roundtrips and closed-form inverse agreement.
pub fn criterion_3_inversion_roundtrips(map: &ConformalMap, profile: Profile) -> CriterionReport {
    let start = Instant::now();
    let outcome = (|| {
        let samples = match profile {
            Profile::Quick => 200,
            Profile::Full => 1000,
        };
        let cfg = InverseMapConfig::default();
        let shape = map.shape();
        let mut max_u: f64 = 0.0;
        let mut max_v: f64 = 0.0;
        for i in 0..samples {
            let t = (i as f64 + 0.5) / samples as f64;
            let u = shape.b2() + t * (shape.a2() - shape.b2());
            max_u = max_u.max((map.u_of_x(map.x_of_u(u)?, &cfg)? - u).abs());
            let v = shape.c2() + t * (shape.b2() - shape.c2());
            max_v = max_v.max((map.v_of_y(map.y_of_v(v)?, &cfg)? - v).abs());
        }
        let closed_samples = match profile {
            Profile::Quick => 20,
            Profile::Full => 100,
        };
        let mut max_closed: f64 = 0.0;
        for i in 0..closed_samples {
            let t = (i as f64 + 0.5) / closed_samples as f64;
            let x = t * map.x_max();
            max_closed = max_closed.max((map.u_of_x_closed(x)? - map.u_of_x(x, &cfg)?).abs());
            let y = t * map.y_max();
            max_closed = max_closed.max((map.v_of_y_closed(y)? - map.v_of_y(y, &cfg)?).abs());
        }
        let bound = TOL_ROUNDTRIP_REL * shape.a2();
        let passed = max_u <= bound && max_v <= bound && max_closed <= TOL_INVERSE_AGREEMENT;
        Ok((
            passed,
            format!(
                "roundtrip max |Δu| = {max_u:.2e}, |Δv| = {max_v:.2e} (tol {bound:.1e}); closed-vs-newton max = {max_closed:.2e} (tol {TOL_INVERSE_AGREEMENT:.0e})"
            ),
        ))
    })();
    finish(3, "inversion roundtrips", start, outcome)
}

/// Criterion 4: the composite parametrization has the Liouville form
/// `E = G = ¼(U−V)`, `F = 0` on a 30×30 interior grid.
pub fn criterion_4_liouville_property(map: &ConformalMap, profile: Profile) -> CriterionReport {
    let start = Instant::now();
    let outcome = (|| {
        let n = match profile {
            Profile::Quick => 10,
            Profile::Full => 30,
        };
        let cfg = InverseMapConfig::default();
        let shape = map.shape();
        let hx = 1e-5 * map.x_max();
        let hy = 1e-5 * map.y_max();
        let xs: Vec<f64> = (0..n).map(|i| (i + 1) as f64 * map.x_max() / (n + 1) as f64).collect();
        let ys: Vec<f64> = (0..n).map(|j| (j + 1) as f64 * map.y_max() / (n + 1) as f64).collect();
        let u0: Vec<f64> = xs.iter().map(|&x| map.u_of_x(x, &cfg)).collect::<Result<_>>()?;
        let up: Vec<f64> = xs.iter().map(|&x| map.u_of_x(x + hx, &cfg)).collect::<Result<_>>()?;
        let um: Vec<f64> = xs.iter().map(|&x| map.u_of_x(x - hx, &cfg)).collect::<Result<_>>()?;
        let v0: Vec<f64> = ys.iter().map(|&y| map.v_of_y(y, &cfg)).collect::<Result<_>>()?;
        let vp: Vec<f64> = ys.iter().map(|&y| map.v_of_y(y + hy, &cfg)).collect::<Result<_>>()?;
        let vm: Vec<f64> = ys.iter().map(|&y| map.v_of_y(y - hy, &cfg)).collect::<Result<_>>()?;
        let mut max_f: f64 = 0.0;
        let mut max_eg: f64 = 0.0;
        let mut max_factor: f64 = 0.0;
        for j in 0..n {
            for i in 0..n {
                let sx = shape
                    .point(CurvatureCoords::new(up[i], v0[j]))?
                    .sub(&shape.point(CurvatureCoords::new(um[i], v0[j]))?)
                    .scale(1.0 / (2.0 * hx));
                let sy = shape
                    .point(CurvatureCoords::new(u0[i], vp[j]))?
                    .sub(&shape.point(CurvatureCoords::new(u0[i], vm[j]))?)
                    .scale(1.0 / (2.0 * hy));
                let e = sx.dot(&sx);
                let g = sy.dot(&sy);
                let f = sx.dot(&sy);
                max_f = max_f.max(f.abs() / e);
                max_eg = max_eg.max((e - g).abs() / e);
                max_factor = max_factor.max((e - 0.25 * (u0[i] - v0[j])).abs() / e);
            }
        }
        let passed = max_f <= TOL_LIOUVILLE_REL
            && max_eg <= TOL_LIOUVILLE_REL
            && max_factor <= TOL_LIOUVILLE_REL;
        Ok((
            passed,
            format!(
                "max |F|/E = {max_f:.2e}, |E−G|/E = {max_eg:.2e}, |E−¼(U−V)|/E = {max_factor:.2e} (tol {TOL_LIOUVILLE_REL:.0e})"
            ),
        ))
    })();
    finish(4, "Liouville metric property", start, outcome)
}

/// Criterion 5: residuals of `f(U)U′² = +1` and `f(V)V′² = −1`.
pub fn criterion_5_differential_equations(map: &ConformalMap, profile: Profile) -> CriterionReport {
    let start = Instant::now();
    let outcome = (|| {
        let n = match profile {
            Profile::Quick => 20,
            Profile::Full => 100,
        };
        let cfg = InverseMapConfig::default();
        let step = 1e-5 * map.x_max().min(map.y_max());
        let mut max_r1: f64 = 0.0;
        let mut max_r2: f64 = 0.0;
        for i in 0..n {
            let t = (i as f64 + 0.5) / n as f64;
            let x = (t * map.x_max()).clamp(2.0 * step, map.x_max() - 2.0 * step);
            let y = (t * map.y_max()).clamp(2.0 * step, map.y_max() - 2.0 * step);
            let coords = crate::conformal::LiouvilleCoords::new(x, y);
            let (r1, r2) = map.ode_residuals(coords, step, &cfg)?;
            max_r1 = max_r1.max(r1.abs());
            max_r2 = max_r2.max(r2.abs());
        }
        let passed = max_r1 <= TOL_ODE_RESIDUAL && max_r2 <= TOL_ODE_RESIDUAL;
        Ok((
            passed,
            format!(
                "max |f(U)U′²−1| = {max_r1:.2e}, max |f(V)V′²+1| = {max_r2:.2e} (tol {TOL_ODE_RESIDUAL:.0e})"
            ),
        ))
    })();
    finish(5, "differential equations", start, outcome)
}

/// Criterion 6: order-8 series match the quadrature/root-solve maps to
/// 1e−12 near the expansion points.
pub fn criterion_6_series_accuracy(map: &ConformalMap) -> CriterionReport {
    let start = Instant::now();
    let outcome = (|| {
        let shape = map.shape();
        let cfg = InverseMapConfig::default();
        let fwd = forward_series(shape, 8)?;
        let inv = inverse_series(&fwd)?;
        let mut max_fwd: f64 = 0.0;
        let mut max_inv: f64 = 0.0;
        for i in 1..=25 {
            let t = i as f64 / 25.0;
            let u = shape.b2() + t * 0.01 * (shape.a2() - shape.b2());
            max_fwd = max_fwd.max((fwd.x_at(u)?.value - map.x_of_u(u)?).abs());
            let x = map.x_of_u(u)?;
            max_inv = max_inv.max((inv.u_at(x)?.value - map.u_of_x(x, &cfg)?).abs());
            let v = shape.c2() + t * 0.01 * (shape.b2() - shape.c2());
            max_fwd = max_fwd.max((fwd.y_at(v)?.value - map.y_of_v(v)?).abs());
            let y = map.y_of_v(v)?;
            max_inv = max_inv.max((inv.v_at(y)?.value - map.v_of_y(y, &cfg)?).abs());
        }
        let passed = max_fwd <= TOL_SERIES_NEAR && max_inv <= TOL_SERIES_NEAR;
        Ok((
            passed,
            format!(
                "max forward-series error = {max_fwd:.2e}, inverse-series error = {max_inv:.2e} (tol {TOL_SERIES_NEAR:.0e})"
            ),
        ))
    })();
    finish(6, "series accuracy near expansion points", start, outcome)
}

/// Criterion 7: 65×65 Liouville mesh validity and conformality statistics,
/// with second-order refinement.
pub fn criterion_7_mesh_conformality(map: &ConformalMap, profile: Profile) -> CriterionReport {
    let start = Instant::now();
    let outcome = (|| {
        let (coarse_n, fine_n) = match profile {
            Profile::Quick => (33, 65),
            Profile::Full => (65, 129),
        };
        let cfg = InverseMapConfig::default();
        let coarse = liouville_grid(map, coarse_n, coarse_n, 1e-3, GridSource::ExactInverse, &cfg)?;
        let mut max_residual: f64 = 0.0;
        for p in &coarse.vertices {
            max_residual = max_residual.max(map.shape().implicit_residual(*p).abs());
        }
        let rep_c = conformality_report(&coarse);
        let fine = liouville_grid(map, fine_n, fine_n, 1e-3, GridSource::ExactInverse, &cfg)?;
        let rep_f = conformality_report(&fine);
        let angle_factor = rep_c.median_angle_error_deg / rep_f.median_angle_error_deg;
        let passed = max_residual <= TOL_MESH_IMPLICIT
            && rep_c.median_angle_error_deg <= TOL_MESH_ANGLE_MEDIAN_DEG
            && rep_c.median_length_ratio_error <= TOL_MESH_RATIO_MEDIAN
            && angle_factor >= MIN_ANGLE_REFINE_FACTOR;
        Ok((
            passed,
            format!(
                "max implicit residual = {max_residual:.2e} (tol {TOL_MESH_IMPLICIT:.0e}); median angle err = {:.2e}° (tol {TOL_MESH_ANGLE_MEDIAN_DEG}°), ratio err = {:.2e} (tol {TOL_MESH_RATIO_MEDIAN:.0e}); refine factor = {angle_factor:.2} (≥ {MIN_ANGLE_REFINE_FACTOR})",
                rep_c.median_angle_error_deg, rep_c.median_length_ratio_error
            ),
        ))
    })();
    finish(7, "mesh validity and conformality", start, outcome)
}

/// Criterion 8: the figure-procedure mesh (interpolated inverses) tracks the
/// exact-inverse mesh, improving ≥ 4× from 64 to 128 samples.
pub fn criterion_8_figure_procedure(map: &ConformalMap, profile: Profile) -> CriterionReport {
    let start = Instant::now();
    let outcome = (|| {
        let grid_n = match profile {
            Profile::Quick => 33,
            Profile::Full => 65,
        };
        let cfg = InverseMapConfig::default();
        let exact = liouville_grid(map, grid_n, grid_n, 1e-3, GridSource::ExactInverse, &cfg)?;
        let approx_64 = liouville_grid(
            map,
            grid_n,
            grid_n,
            1e-3,
            GridSource::Interpolant { samples: 64 },
            &cfg,
        )?;
        let d64 = exact.max_vertex_distance(&approx_64)?;
        let approx_128 = liouville_grid(
            map,
            grid_n,
            grid_n,
            1e-3,
            GridSource::Interpolant { samples: 128 },
            &cfg,
        )?;
        let d128 = exact.max_vertex_distance(&approx_128)?;
        let factor = d64 / d128;
        let passed = d64 <= TOL_INTERP_MESH_DIST && factor >= MIN_INTERP_REFINE_FACTOR;
        Ok((
            passed,
            format!(
                "max vertex distance: n=64 → {d64:.2e} (tol {TOL_INTERP_MESH_DIST:.0e}), n=128 → {d128:.2e}, factor = {factor:.2} (≥ {MIN_INTERP_REFINE_FACTOR})"
            ),
        ))
    })();
    finish(8, "figure-procedure fidelity", start, outcome)
}

/// The printed coefficient tables as exact rational expressions, evaluated
/// by substituting the semi-axes.
mod fixtures {
    use super::*;

    pub struct Fixtures {
        pub a: [BigRational; 3],
        pub b: [BigRational; 3],
        pub c: [BigRational; 3],
        pub d: [BigRational; 3],
        pub alpha: [BigRational; 3],
        pub beta: [BigRational; 3],
        pub gamma: [BigRational; 3],
        pub delta: [BigRational; 3],
    }

    impl Fixtures {
        pub fn for_shape(shape: &EllipsoidShape) -> Self {
            let a = rat(shape.a());
            let b = rat(shape.b());
            let c = rat(shape.c());
            let a2 = &a * &a;
            let b2 = &b * &b;
            let c2 = &c * &c;
            let i = |n: i64| BigRational::from_integer(n.into());
            let p = |r: &BigRational, e: u64| Pow::pow(r.clone(), e);

            let alpha3 = &p(&b2, 2) - &a2 * &c2;
            let beta3 = &p(&c2, 2) - &a2 * &b2;
            let alpha5 = (-&p(&a2, 2) * &p(&c2, 2)
                + i(4) * &p(&a2, 2) * &b2 * &c2
                - i(10) * &a2 * &p(&b2, 2) * &c2
                + i(4) * &a2 * &b2 * &p(&c2, 2)
                + i(3) * p(&b2, 4))
                / i(3);
            let beta5 = (-&p(&a2, 2) * &p(&b2, 2)
                + i(4) * &p(&a2, 2) * &b2 * &c2
                + i(4) * &a2 * &p(&b2, 2) * &c2
                - i(10) * &a2 * &b2 * &p(&c2, 2)
                + i(3) * p(&c2, 4))
                / i(3);
            let gamma6 = (i(11) * &p(&a2, 2) * &p(&c2, 2) - i(9) * &p(&a2, 2) * &b2 * &c2
                - i(9) * &a2 * &b2 * &p(&c2, 2)
                + i(5) * &a2 * &p(&b2, 2) * &c2
                + i(2) * p(&b2, 4))
                / i(2);
            let delta6 = (i(11) * &p(&a2, 2) * &p(&b2, 2) - i(9) * &p(&a2, 2) * &b2 * &c2
                - i(9) * &a2 * &p(&b2, 2) * &c2
                + i(5) * &a2 * &b2 * &p(&c2, 2)
                + i(2) * p(&c2, 4))
                / i(2);

            Fixtures {
                a: [
                    i(2) * &b,
                    &alpha3 / (i(3) * &b),
                    i(3) * &alpha5 / (i(20) * p(&b, 3)),
                ],
                b: [
                    i(2) * &c,
                    -(&beta3) / (i(3) * &c),
                    i(3) * &beta5 / (i(20) * p(&c, 3)),
                ],
                c: [
                    i(1) / (i(4) * &b2),
                    -(&alpha3) / (i(48) * p(&b2, 3)),
                    i(2) * &gamma6 / (i(2880) * p(&b2, 5)),
                ],
                d: [
                    i(1) / (i(4) * &c2),
                    &beta3 / (i(48) * p(&c2, 3)),
                    i(2) * &delta6 / (i(2880) * p(&c2, 5)),
                ],
                alpha: [i(1), alpha3.clone(), alpha5],
                beta: [i(1), beta3.clone(), beta5],
                gamma: [i(1), alpha3, gamma6],
                delta: [i(1), beta3, delta6],
            }
        }
    }
}
