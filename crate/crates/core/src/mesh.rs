//! Figure-procedure machinery: forward sampling, monotone interpolation of
//! the inverse maps, Liouville and curvature-line grids, conformality
//! diagnostics, and mesh export.
//!
//! The procedure: collect `(X(u_k), u_k)` at uniform `u_k`, interpolate to a
//! monotone approximation `Ũ(x) ≈ U(x)` (same for `Ṽ`), then draw
//! `Ellipsoid(Ũ(x), Ṽ(y))` over the open Liouville rectangle.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::conformal::ConformalMap;
use crate::ellipsoid::{CurvatureCoords, EllipsoidShape, Point3};
use crate::error::{Error, Result};
use crate::interp::CubicHermite;
use crate::inverse::InverseMapConfig;

/// Forward sample table: ordered pairs `(X(u_k), u_k)` with the exact
/// derivative data used to rebuild the inverse to interpolation accuracy.
#[derive(Debug, Clone)]
pub struct SampleTable {
    positions: Vec<f64>,
    params: Vec<f64>,
    /// `du/dx` at each knot (`1/√(±f)`; zero at the endpoints).
    slopes: Vec<f64>,
    /// `√`-residue constants `κ` of `√(±f)` at the two endpoints:
    /// `x − x_end ≈ ±2κ·√(|u − u_end|)` there. `None` for hand-built tables.
    end_kappa: Option<(f64, f64)>,
}

impl SampleTable {
    /// Builds a table from raw columns; slopes are estimated from the data.
    pub fn from_columns(positions: Vec<f64>, params: Vec<f64>) -> Result<Self> {
        let slopes = vec![0.0; positions.len()];
        let mut table = Self::with_slopes(positions, params, slopes)?;
        // Central-difference estimates keep hand-built tables usable.
        let n = table.params.len();
        for i in 1..n - 1 {
            table.slopes[i] = (table.params[i + 1] - table.params[i - 1])
                / (table.positions[i + 1] - table.positions[i - 1]);
        }
        Ok(table)
    }

    /// Builds a table with exact slope data.
    pub fn with_slopes(positions: Vec<f64>, params: Vec<f64>, slopes: Vec<f64>) -> Result<Self> {
        if positions.len() != params.len() || slopes.len() != params.len() {
            return Err(Error::Domain("table columns must have equal length".into()));
        }
        if positions.len() < 2 {
            return Err(Error::Domain("table needs at least two rows".into()));
        }
        for i in 1..positions.len() {
            let up = |a: f64, b: f64| a.partial_cmp(&b) == Some(std::cmp::Ordering::Greater);
            if !up(positions[i], positions[i - 1]) || !up(params[i], params[i - 1]) {
                return Err(Error::NonMonotoneInput { index: i });
            }
        }
        Ok(Self {
            positions,
            params,
            slopes,
            end_kappa: None,
        })
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    /// `X(u_k)` column.
    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    /// `u_k` column.
    pub fn params(&self) -> &[f64] {
        &self.params
    }
}

/// Samples the forward maps at `u_k = ((n−k)u₀ + k·u_n)/n` (and the `v`
/// analog), returning the `u`- and `v`-tables.
pub fn sample_forward(map: &ConformalMap, n: usize) -> Result<(SampleTable, SampleTable)> {
    if n < 2 {
        return Err(Error::Domain("need at least two sample intervals".into()));
    }
    let shape = map.shape();
    let (a2, b2, c2) = (shape.a2(), shape.b2(), shape.c2());

    let mut u_table = SampleTable {
        positions: Vec::with_capacity(n + 1),
        params: Vec::with_capacity(n + 1),
        slopes: Vec::with_capacity(n + 1),
        end_kappa: Some((
            (b2 / ((a2 - b2) * (b2 - c2))).sqrt(),
            (a2 / ((a2 - b2) * (a2 - c2))).sqrt(),
        )),
    };
    let mut v_table = SampleTable {
        positions: Vec::with_capacity(n + 1),
        params: Vec::with_capacity(n + 1),
        slopes: Vec::with_capacity(n + 1),
        end_kappa: Some((
            (c2 / ((a2 - c2) * (b2 - c2))).sqrt(),
            (b2 / ((a2 - b2) * (b2 - c2))).sqrt(),
        )),
    };
    for k in 0..=n {
        let w = k as f64 / n as f64;
        let u = ((n - k) as f64 * b2 + k as f64 * a2) / n as f64;
        let v = (1.0 - w) * c2 + w * b2;
        u_table.params.push(u);
        u_table.positions.push(map.x_of_u(u)?);
        v_table.params.push(v);
        v_table.positions.push(map.y_of_v(v)?);
        if k == 0 || k == n {
            u_table.slopes.push(0.0);
            v_table.slopes.push(0.0);
        } else {
            u_table.slopes.push(1.0 / shape.f_weight(u)?.sqrt());
            v_table.slopes.push(1.0 / (-shape.f_weight(v)?).sqrt());
        }
    }
    Ok((u_table, v_table))
}

/// Monotone C¹ approximation `Ũ(x)` of the inverse map built from a sample
/// table.
///
/// The inverse is interpolated in square-root ordinates: on the lower half
/// of the knots as `W = √(u − u₀)` and on the upper half as
/// `W = √(u_n − u)`, each by a monotone cubic Hermite in `x` with the exact
/// knot slopes. Both transforms are analytic odd functions of the position
/// near their endpoint, so the reconstruction `u = u₀ + W²` (resp.
/// `u_n − W²`) stays uniformly accurate where `du/dx` degenerates, which a
/// plain cubic in `u` cannot achieve on the √-spaced end knots.
#[derive(Debug, Clone)]
pub struct MonotoneInterpolant {
    left: CubicHermite,
    right: Option<CubicHermite>,
    u_lo: f64,
    u_hi: f64,
    x_seam: f64,
    knots_x: Vec<f64>,
    knots_u: Vec<f64>,
}

/// Builds the monotone interpolant `Ũ` from a table.
pub fn build_interpolant(table: &SampleTable) -> Result<MonotoneInterpolant> {
    let n = table.len();
    let u_lo = table.params[0];
    let u_hi = table.params[n - 1];
    let mid = ((n - 1) / 2).max(1);

    // Left piece: W = √(u − u₀), increasing; slope dW/dx = (du/dx)/(2W).
    let xs_l = table.positions[..=mid].to_vec();
    let w_l: Vec<f64> = table.params[..=mid].iter().map(|u| (u - u_lo).sqrt()).collect();
    let mut d_l = vec![0.0; mid + 1];
    for i in 1..=mid {
        d_l[i] = table.slopes[i] / (2.0 * w_l[i]);
    }
    d_l[0] = match table.end_kappa {
        Some((kappa_lo, _)) => 1.0 / (2.0 * kappa_lo),
        None => estimate_end_slope(&xs_l, &w_l),
    };
    let left = CubicHermite::with_slopes(xs_l, w_l, d_l)?;

    // Right piece: W = √(u_n − u), decreasing to zero.
    let right = if mid < n - 1 {
        let xs_r = table.positions[mid..].to_vec();
        let w_r: Vec<f64> = table.params[mid..]
            .iter()
            .map(|u| (u_hi - u).max(0.0).sqrt())
            .collect();
        let len_r = xs_r.len();
        let mut d_r = vec![0.0; len_r];
        for i in 0..len_r - 1 {
            d_r[i] = -table.slopes[mid + i] / (2.0 * w_r[i]);
        }
        d_r[len_r - 1] = match table.end_kappa {
            Some((_, kappa_hi)) => -1.0 / (2.0 * kappa_hi),
            None => estimate_end_slope(
                &xs_r.iter().rev().map(|x| -x).collect::<Vec<_>>(),
                &w_r.iter().rev().copied().collect::<Vec<_>>(),
            ),
        };
        Some(CubicHermite::with_slopes(xs_r, w_r, d_r)?)
    } else {
        None
    };

    Ok(MonotoneInterpolant {
        left,
        right,
        u_lo,
        u_hi,
        x_seam: table.positions[mid],
        knots_x: table.positions.clone(),
        knots_u: table.params.clone(),
    })
}

/// Three-point parabolic end-slope estimate for tables without exact
/// endpoint data.
fn estimate_end_slope(xs: &[f64], ys: &[f64]) -> f64 {
    if xs.len() < 3 {
        return (ys[1] - ys[0]) / (xs[1] - xs[0]);
    }
    let (h0, h1) = (xs[1] - xs[0], xs[2] - xs[1]);
    let (d0, d1) = ((ys[1] - ys[0]) / h0, (ys[2] - ys[1]) / h1);
    ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1)
}

impl MonotoneInterpolant {
    pub fn domain(&self) -> (f64, f64) {
        (self.knots_x[0], *self.knots_x.last().unwrap())
    }

    /// Evaluates `Ũ(x)`. Knots reproduce their table values exactly.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if let Ok(i) = self
            .knots_x
            .binary_search_by(|v| v.partial_cmp(&x).unwrap())
        {
            return Ok(self.knots_u[i]);
        }
        let u = match &self.right {
            Some(right) if x > self.x_seam => {
                let w = right.eval(x)?;
                self.u_hi - w * w
            }
            _ => {
                let w = self.left.eval(x)?;
                self.u_lo + w * w
            }
        };
        Ok(u.clamp(self.u_lo, self.u_hi))
    }
}

/// Vertex source of a Liouville grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridSource {
    /// Root-solve inversion at every grid line (authoritative).
    ExactInverse,
    /// Interpolants built from `samples` forward intervals (figure route).
    Interpolant { samples: usize },
}

/// A structured quad mesh over one octant patch.
#[derive(Debug, Clone, Serialize)]
pub struct SurfaceMesh {
    pub nx: usize,
    pub ny: usize,
    /// Parameter steps of the generating grid; diagnostics normalize by them.
    pub dx: f64,
    pub dy: f64,
    /// Row-major vertices: index `j·nx + i`.
    pub vertices: Vec<Point3>,
    /// Quad connectivity, counter-clockwise in parameter space.
    pub quads: Vec<[u32; 4]>,
}

impl SurfaceMesh {
    fn from_grid(
        nx: usize,
        ny: usize,
        dx: f64,
        dy: f64,
        vertices: Vec<Point3>,
    ) -> Self {
        debug_assert_eq!(vertices.len(), nx * ny);
        let mut quads = Vec::with_capacity((nx - 1) * (ny - 1));
        for j in 0..ny - 1 {
            for i in 0..nx - 1 {
                let base = (j * nx + i) as u32;
                quads.push([base, base + 1, base + 1 + nx as u32, base + nx as u32]);
            }
        }
        Self {
            nx,
            ny,
            dx,
            dy,
            vertices,
            quads,
        }
    }

    pub fn vertex(&self, i: usize, j: usize) -> Point3 {
        self.vertices[j * self.nx + i]
    }

    /// Largest distance between corresponding vertices of two equally sized
    /// meshes.
    pub fn max_vertex_distance(&self, other: &SurfaceMesh) -> Result<f64> {
        if self.vertices.len() != other.vertices.len() {
            return Err(Error::Domain("meshes have different vertex counts".into()));
        }
        Ok(self
            .vertices
            .iter()
            .zip(&other.vertices)
            .map(|(p, q)| p.distance(q))
            .fold(0.0, f64::max))
    }
}

fn check_grid_args(nx: usize, ny: usize, eps: f64) -> Result<()> {
    if nx < 2 || ny < 2 {
        return Err(Error::Domain("grid needs at least 2×2 vertices".into()));
    }
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::Domain(format!("eps = {eps} must lie in (0, ½)")));
    }
    Ok(())
}

/// Mesh of `Ellipsoid(U(x_i), V(y_j))` over the clipped Liouville rectangle
/// `[eps·X(a²), (1−eps)·X(a²)] × [eps·Y(b²), (1−eps)·Y(b²)]`.
pub fn liouville_grid(
    map: &ConformalMap,
    nx: usize,
    ny: usize,
    eps: f64,
    source: GridSource,
    cfg: &InverseMapConfig,
) -> Result<SurfaceMesh> {
    check_grid_args(nx, ny, eps)?;
    let (x_max, y_max) = (map.x_max(), map.y_max());
    let xs: Vec<f64> = (0..nx)
        .map(|i| lerp(eps * x_max, (1.0 - eps) * x_max, i as f64 / (nx - 1) as f64))
        .collect();
    let ys: Vec<f64> = (0..ny)
        .map(|j| lerp(eps * y_max, (1.0 - eps) * y_max, j as f64 / (ny - 1) as f64))
        .collect();

    let (us, vs) = match source {
        GridSource::ExactInverse => (
            xs.iter().map(|&x| map.u_of_x(x, cfg)).collect::<Result<Vec<_>>>()?,
            ys.iter().map(|&y| map.v_of_y(y, cfg)).collect::<Result<Vec<_>>>()?,
        ),
        GridSource::Interpolant { samples } => {
            let (u_table, v_table) = sample_forward(map, samples)?;
            let u_interp = build_interpolant(&u_table)?;
            let v_interp = build_interpolant(&v_table)?;
            (
                xs.iter().map(|&x| u_interp.eval(x)).collect::<Result<Vec<_>>>()?,
                ys.iter().map(|&y| v_interp.eval(y)).collect::<Result<Vec<_>>>()?,
            )
        }
    };

    let shape = map.shape();
    let mut vertices = Vec::with_capacity(nx * ny);
    for &v in &vs {
        for &u in &us {
            vertices.push(shape.point(CurvatureCoords::new(u, v))?);
        }
    }
    Ok(SurfaceMesh::from_grid(
        nx,
        ny,
        xs[1] - xs[0],
        ys[1] - ys[0],
        vertices,
    ))
}

/// Mesh sampled uniformly in the curvature-line rectangle, clipped by `eps`.
pub fn curvature_grid(
    shape: &EllipsoidShape,
    nu: usize,
    nv: usize,
    eps: f64,
) -> Result<SurfaceMesh> {
    check_grid_args(nu, nv, eps)?;
    let (a2, b2, c2) = (shape.a2(), shape.b2(), shape.c2());
    let us: Vec<f64> = (0..nu)
        .map(|i| {
            lerp(
                b2 + eps * (a2 - b2),
                a2 - eps * (a2 - b2),
                i as f64 / (nu - 1) as f64,
            )
        })
        .collect();
    let vs: Vec<f64> = (0..nv)
        .map(|j| {
            lerp(
                c2 + eps * (b2 - c2),
                b2 - eps * (b2 - c2),
                j as f64 / (nv - 1) as f64,
            )
        })
        .collect();
    let mut vertices = Vec::with_capacity(nu * nv);
    for &v in &vs {
        for &u in &us {
            vertices.push(shape.point(CurvatureCoords::new(u, v))?);
        }
    }
    Ok(SurfaceMesh::from_grid(
        nu,
        nv,
        us[1] - us[0],
        vs[1] - vs[0],
        vertices,
    ))
}

fn lerp(lo: f64, hi: f64, t: f64) -> f64 {
    lo + t * (hi - lo)
}

/// Conformality figures at one interior grid corner.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CellQuality {
    /// `|angle(t₁, t₂) − 90°|` of the grid-line crossing, degrees.
    pub angle_error_deg: f64,
    /// `||t₁|/|t₂| − 1|` of the step-normalized tangents.
    pub length_ratio_error: f64,
}

/// Summary statistics over the interior cell corners of a grid mesh.
#[derive(Debug, Clone, Serialize)]
pub struct ConformalityReport {
    pub corners: usize,
    pub median_angle_error_deg: f64,
    pub max_angle_error_deg: f64,
    pub median_length_ratio_error: f64,
    pub max_length_ratio_error: f64,
    pub per_corner: Vec<CellQuality>,
}

/// Per-corner conformality diagnostics from central-difference tangents
/// `t₁ = (P_{i+1,j} − P_{i−1,j})/(2dx)`, `t₂ = (P_{i,j+1} − P_{i,j−1})/(2dy)`
/// at every interior grid vertex (the corners shared by four cells). For a
/// conformal parametrization both statistics converge to zero at second
/// order in the grid spacing.
pub fn conformality_report(mesh: &SurfaceMesh) -> ConformalityReport {
    let mut per_corner = Vec::new();
    for j in 1..mesh.ny - 1 {
        for i in 1..mesh.nx - 1 {
            let t1 = mesh
                .vertex(i + 1, j)
                .sub(&mesh.vertex(i - 1, j))
                .scale(1.0 / (2.0 * mesh.dx));
            let t2 = mesh
                .vertex(i, j + 1)
                .sub(&mesh.vertex(i, j - 1))
                .scale(1.0 / (2.0 * mesh.dy));
            let n1 = t1.norm();
            let n2 = t2.norm();
            let cos = (t1.dot(&t2) / (n1 * n2)).clamp(-1.0, 1.0);
            per_corner.push(CellQuality {
                angle_error_deg: (cos.acos().to_degrees() - 90.0).abs(),
                length_ratio_error: (n1 / n2 - 1.0).abs(),
            });
        }
    }
    let median = |mut v: Vec<f64>| -> f64 {
        if v.is_empty() {
            return 0.0;
        }
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let n = v.len();
        if n % 2 == 1 {
            v[n / 2]
        } else {
            0.5 * (v[n / 2 - 1] + v[n / 2])
        }
    };
    let angles: Vec<f64> = per_corner.iter().map(|c| c.angle_error_deg).collect();
    let ratios: Vec<f64> = per_corner.iter().map(|c| c.length_ratio_error).collect();
    ConformalityReport {
        corners: per_corner.len(),
        median_angle_error_deg: median(angles.clone()),
        max_angle_error_deg: angles.iter().copied().fold(0.0, f64::max),
        median_length_ratio_error: median(ratios.clone()),
        max_length_ratio_error: ratios.iter().copied().fold(0.0, f64::max),
        per_corner,
    }
}

/// An unstructured quad mesh (export container).
#[derive(Debug, Clone, Serialize)]
pub struct QuadMesh {
    pub vertices: Vec<Point3>,
    pub quads: Vec<[u32; 4]>,
}

impl From<&SurfaceMesh> for QuadMesh {
    fn from(mesh: &SurfaceMesh) -> Self {
        Self {
            vertices: mesh.vertices.clone(),
            quads: mesh.quads.clone(),
        }
    }
}

/// Tolerance of the seam-vertex deduplication.
const DEDUP_TOL: f64 = 1e-9;

/// Assembles the full surface from 8 sign-reflected copies of the octant
/// patch, deduplicating seam vertices by coordinate hashing. Reflections
/// with negative orientation get their quads reversed to keep consistent
/// winding.
pub fn reflect_octants(mesh: &SurfaceMesh) -> QuadMesh {
    let mut vertices: Vec<Point3> = Vec::new();
    let mut quads: Vec<[u32; 4]> = Vec::new();
    let mut index: HashMap<(i64, i64, i64), u32> = HashMap::new();
    let quantize = |p: &Point3| {
        (
            (p.x / DEDUP_TOL).round() as i64,
            (p.y / DEDUP_TOL).round() as i64,
            (p.z / DEDUP_TOL).round() as i64,
        )
    };
    for &sx in &[1.0, -1.0] {
        for &sy in &[1.0, -1.0] {
            for &sz in &[1.0, -1.0] {
                let mut remap = Vec::with_capacity(mesh.vertices.len());
                for p in &mesh.vertices {
                    let q = Point3::new(sx * p.x, sy * p.y, sz * p.z);
                    let key = quantize(&q);
                    let id = *index.entry(key).or_insert_with(|| {
                        vertices.push(q);
                        (vertices.len() - 1) as u32
                    });
                    remap.push(id);
                }
                let flip = sx * sy * sz < 0.0;
                for quad in &mesh.quads {
                    let mapped = [
                        remap[quad[0] as usize],
                        remap[quad[1] as usize],
                        remap[quad[2] as usize],
                        remap[quad[3] as usize],
                    ];
                    quads.push(if flip {
                        [mapped[3], mapped[2], mapped[1], mapped[0]]
                    } else {
                        mapped
                    });
                }
            }
        }
    }
    QuadMesh { vertices, quads }
}

/// Mesh file formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshFormat {
    /// Wavefront OBJ with quad faces, 1-based indices.
    Obj,
    /// `i,j,x,y,z` rows (grid meshes only).
    Csv,
    /// JSON mirror of the mesh structure.
    Json,
}

/// Writes a grid mesh to `path` in the requested format.
pub fn export_mesh(mesh: &SurfaceMesh, format: MeshFormat, path: &Path) -> Result<()> {
    let file = File::create(path)?;
    let mut w = BufWriter::new(file);
    match format {
        MeshFormat::Obj => write_obj(&QuadMesh::from(mesh), &mut w),
        MeshFormat::Csv => write_csv(mesh, &mut w),
        MeshFormat::Json => {
            serde_json::to_writer_pretty(&mut w, mesh)
                .map_err(|e| Error::Domain(format!("json serialization failed: {e}")))?;
            writeln!(w)?;
            Ok(())
        }
    }
}

/// Writes an unstructured quad mesh (e.g. the reflected full surface);
/// CSV is grid-indexed and therefore not available here.
pub fn export_quad_mesh(mesh: &QuadMesh, format: MeshFormat, path: &Path) -> Result<()> {
    let file = File::create(path)?;
    let mut w = BufWriter::new(file);
    match format {
        MeshFormat::Obj => write_obj(mesh, &mut w),
        MeshFormat::Csv => Err(Error::Domain(
            "csv export requires a grid mesh; full-surface meshes are unstructured".into(),
        )),
        MeshFormat::Json => {
            serde_json::to_writer_pretty(&mut w, mesh)
                .map_err(|e| Error::Domain(format!("json serialization failed: {e}")))?;
            writeln!(w)?;
            Ok(())
        }
    }
}

/// `v x y z` lines then quad `f` records with 1-based indices. Coordinates
/// use the shortest round-trip decimal form, so a reparse is bit-exact.
pub fn write_obj<W: Write>(mesh: &QuadMesh, w: &mut W) -> Result<()> {
    for p in &mesh.vertices {
        writeln!(w, "v {} {} {}", p.x, p.y, p.z)?;
    }
    for q in &mesh.quads {
        writeln!(w, "f {} {} {} {}", q[0] + 1, q[1] + 1, q[2] + 1, q[3] + 1)?;
    }
    Ok(())
}

pub fn write_csv<W: Write>(mesh: &SurfaceMesh, w: &mut W) -> Result<()> {
    writeln!(w, "i,j,x,y,z")?;
    for j in 0..mesh.ny {
        for i in 0..mesh.nx {
            let p = mesh.vertex(i, j);
            writeln!(w, "{},{},{},{},{}", i, j, p.x, p.y, p.z)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ellipsoid::EllipsoidShape;

    fn map() -> ConformalMap {
        ConformalMap::new(EllipsoidShape::new(3.0, 2.0, 1.0).unwrap()).unwrap()
    }

    #[test]
    fn sample_forward_structure() {
        let m = map();
        let (u_table, v_table) = sample_forward(&m, 2).unwrap();
        assert_eq!(u_table.len(), 3);
        // First row is (0, b²); middle row is (X((a²+b²)/2), (a²+b²)/2).
        assert_eq!(u_table.positions()[0], 0.0);
        assert_eq!(u_table.params()[0], 4.0);
        assert_eq!(u_table.params()[1], 6.5);
        assert!((u_table.positions()[1] - m.x_of_u(6.5).unwrap()).abs() < 1e-15);
        assert_eq!(u_table.params()[2], 9.0);
        assert_eq!(v_table.positions()[0], 0.0);
        assert_eq!(v_table.params()[0], 1.0);
    }

    #[test]
    fn sample_forward_monotone_columns() {
        let m = map();
        let (u_table, v_table) = sample_forward(&m, 64).unwrap();
        for t in [&u_table, &v_table] {
            for i in 1..t.len() {
                assert!(t.positions()[i] > t.positions()[i - 1]);
                assert!(t.params()[i] > t.params()[i - 1]);
            }
        }
    }

    #[test]
    fn interpolant_reproduces_knots_exactly() {
        let m = map();
        let (u_table, _) = sample_forward(&m, 16).unwrap();
        let interp = build_interpolant(&u_table).unwrap();
        for (x, u) in u_table.positions().iter().zip(u_table.params()) {
            assert_eq!(interp.eval(*x).unwrap(), *u);
        }
    }

    #[test]
    fn interpolant_accuracy_against_root_solve() {
        let m = map();
        let cfg = InverseMapConfig::default();
        let (u_table, _) = sample_forward(&m, 64).unwrap();
        let interp = build_interpolant(&u_table).unwrap();
        let mut max_err: f64 = 0.0;
        for k in 0..1000 {
            let x = m.x_max() * (k as f64 + 0.5) / 1000.0;
            let err = (interp.eval(x).unwrap() - m.u_of_x(x, &cfg).unwrap()).abs();
            max_err = max_err.max(err);
        }
        // Bound from the module contract: 1e−4·(a²−b²).
        assert!(max_err <= 1e-4 * 5.0, "max err = {max_err:e}");
    }

    #[test]
    fn interpolant_error_drops_with_refinement() {
        let m = map();
        let cfg = InverseMapConfig::default();
        let mut errs = Vec::new();
        for n in [32usize, 64] {
            let (u_table, _) = sample_forward(&m, n).unwrap();
            let interp = build_interpolant(&u_table).unwrap();
            let mut max_err: f64 = 0.0;
            for k in 0..400 {
                let x = m.x_max() * (k as f64 + 0.5) / 400.0;
                max_err = max_err.max((interp.eval(x).unwrap() - m.u_of_x(x, &cfg).unwrap()).abs());
            }
            errs.push(max_err);
        }
        assert!(
            errs[0] >= 4.0 * errs[1],
            "refinement factor too small: {errs:?}"
        );
    }

    #[test]
    fn two_knot_table_is_monotone_segment() {
        let table = SampleTable::from_columns(vec![0.0, 1.0], vec![4.0, 9.0]).unwrap();
        let interp = build_interpolant(&table).unwrap();
        assert_eq!(interp.eval(0.0).unwrap(), 4.0);
        assert_eq!(interp.eval(1.0).unwrap(), 9.0);
        let mut prev = 4.0 - 1e-12;
        for k in 0..=100 {
            let u = interp.eval(k as f64 / 100.0).unwrap();
            assert!(u >= prev - 1e-10 && u <= 9.0 + 1e-12);
            prev = u;
        }
    }

    #[test]
    fn non_monotone_table_rejected() {
        assert!(matches!(
            SampleTable::from_columns(vec![0.0, 1.0, 0.9], vec![1.0, 2.0, 3.0]),
            Err(Error::NonMonotoneInput { .. })
        ));
        assert!(matches!(
            SampleTable::from_columns(vec![0.0, 1.0, 2.0], vec![1.0, 2.0, 1.5]),
            Err(Error::NonMonotoneInput { .. })
        ));
    }

    #[test]
    fn liouville_grid_vertices_on_surface() {
        let m = map();
        let cfg = InverseMapConfig::default();
        let mesh = liouville_grid(&m, 17, 17, 1e-3, GridSource::ExactInverse, &cfg).unwrap();
        assert_eq!(mesh.vertices.len(), 17 * 17);
        assert_eq!(mesh.quads.len(), 16 * 16);
        for p in &mesh.vertices {
            assert!(m.shape().implicit_residual(*p).abs() < 1e-10);
        }
    }

    #[test]
    fn liouville_grid_corners_approach_patch_corners() {
        let m = map();
        let cfg = InverseMapConfig::default();
        let mesh = liouville_grid(&m, 2, 2, 1e-6, GridSource::ExactInverse, &cfg).unwrap();
        // (x→0, y→0) corresponds to (u,v)→(b²,c²): the point (a,0,0).
        let p = mesh.vertex(0, 0);
        assert!((p.x - 3.0).abs() < 1e-2 && p.y.abs() < 1e-2 && p.z.abs() < 1e-2);
        // (x→X(a²), y→Y(b²)) corresponds to (u,v)→(a²,b²): the point (0,0,c).
        let q = mesh.vertex(1, 1);
        assert!(q.x.abs() < 1e-2 && q.y.abs() < 1e-2 && (q.z - 1.0).abs() < 1e-2);
    }

    #[test]
    fn curvature_grid_on_surface_and_orthogonal() {
        let shape = EllipsoidShape::new(3.0, 2.0, 1.0).unwrap();
        let mesh = curvature_grid(&shape, 9, 9, 1e-3).unwrap();
        for p in &mesh.vertices {
            assert!(shape.implicit_residual(*p).abs() < 1e-10);
        }
        // Orthogonality of the coordinate curves via small-step central
        // differences of the parametrization at interior vertices.
        let h = 1e-5;
        for j in [2usize, 4, 6] {
            for i in [2usize, 4, 6] {
                let u = shape.b2() + 1e-3 * 5.0 + i as f64 * mesh.dx;
                let v = shape.c2() + 1e-3 * 3.0 + j as f64 * mesh.dy;
                let pu1 = shape.point(CurvatureCoords::new(u + h, v)).unwrap();
                let pu0 = shape.point(CurvatureCoords::new(u - h, v)).unwrap();
                let pv1 = shape.point(CurvatureCoords::new(u, v + h)).unwrap();
                let pv0 = shape.point(CurvatureCoords::new(u, v - h)).unwrap();
                let su = pu1.sub(&pu0).scale(1.0 / (2.0 * h));
                let sv = pv1.sub(&pv0).scale(1.0 / (2.0 * h));
                let f = su.dot(&sv);
                assert!(
                    f.abs() <= 1e-6 * (su.norm() * sv.norm()),
                    "F = {f} at ({u}, {v})"
                );
            }
        }
    }

    #[test]
    fn minimal_curvature_grid_hits_near_corners() {
        let shape = EllipsoidShape::new(3.0, 2.0, 1.0).unwrap();
        let mesh = curvature_grid(&shape, 2, 2, 1e-6).unwrap();
        assert_eq!(mesh.vertices.len(), 4);
        assert_eq!(mesh.quads.len(), 1);
        // (u,v) → (b², c²) corner maps near (a, 0, 0).
        let p = mesh.vertex(0, 0);
        assert!((p.x - 3.0).abs() < 1e-2 && p.y < 1e-2 && p.z < 1e-2);
    }

    #[test]
    fn conformality_of_flat_patch_is_exact() {
        // A planar unit-square grid is perfectly conformal.
        let n = 9;
        let mut vertices = Vec::new();
        for j in 0..n {
            for i in 0..n {
                vertices.push(Point3::new(i as f64, j as f64, 0.0));
            }
        }
        let mesh = SurfaceMesh::from_grid(n, n, 1.0, 1.0, vertices);
        let report = conformality_report(&mesh);
        assert_eq!(report.corners, (n - 2) * (n - 2));
        assert_eq!(report.max_angle_error_deg, 0.0);
        assert_eq!(report.max_length_ratio_error, 0.0);
    }

    #[test]
    fn liouville_grid_is_nearly_conformal() {
        let m = map();
        let cfg = InverseMapConfig::default();
        let mesh = liouville_grid(&m, 33, 33, 1e-3, GridSource::ExactInverse, &cfg).unwrap();
        let report = conformality_report(&mesh);
        assert!(report.median_angle_error_deg < 0.1);
        assert!(report.median_length_ratio_error < 1e-2);
    }

    #[test]
    fn reflection_covers_eight_octants() {
        let m = map();
        let cfg = InverseMapConfig::default();
        let mesh = liouville_grid(&m, 5, 5, 0.05, GridSource::ExactInverse, &cfg).unwrap();
        let full = reflect_octants(&mesh);
        assert_eq!(full.quads.len(), 8 * mesh.quads.len());
        // Clipped patches share no seam vertices, so all copies are disjoint.
        assert_eq!(full.vertices.len(), 8 * mesh.vertices.len());
        let has_negative = full.vertices.iter().any(|p| p.x < 0.0 && p.y < 0.0 && p.z < 0.0);
        assert!(has_negative);
    }

    #[test]
    fn obj_export_counts_and_roundtrip() {
        let m = map();
        let cfg = InverseMapConfig::default();
        let mesh = liouville_grid(&m, 2, 2, 0.1, GridSource::ExactInverse, &cfg).unwrap();
        let mut buf = Vec::new();
        write_obj(&QuadMesh::from(&mesh), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let v_lines: Vec<&str> = text.lines().filter(|l| l.starts_with("v ")).collect();
        let f_lines: Vec<&str> = text.lines().filter(|l| l.starts_with("f ")).collect();
        assert_eq!(v_lines.len(), 4);
        assert_eq!(f_lines.len(), 1);
        // Bit-exact vertex roundtrip through the decimal encoding.
        for (line, p) in v_lines.iter().zip(&mesh.vertices) {
            let nums: Vec<f64> = line[2..]
                .split_whitespace()
                .map(|t| t.parse().unwrap())
                .collect();
            assert_eq!(nums, vec![p.x, p.y, p.z]);
        }
    }

    #[test]
    fn csv_export_shape() {
        let m = map();
        let cfg = InverseMapConfig::default();
        let mesh = liouville_grid(&m, 3, 2, 0.1, GridSource::ExactInverse, &cfg).unwrap();
        let mut buf = Vec::new();
        write_csv(&mesh, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "i,j,x,y,z");
        assert_eq!(lines.len(), 1 + 6);
        assert!(lines[1].starts_with("0,0,"));
    }

    #[test]
    fn vertex_count_formula() {
        let m = map();
        let cfg = InverseMapConfig::default();
        let mesh = liouville_grid(&m, 33, 33, 1e-3, GridSource::ExactInverse, &cfg).unwrap();
        assert_eq!(mesh.vertices.len(), 1089);
        assert_eq!(mesh.quads.len(), 1024);
    }

    #[test]
    fn interpolant_source_close_to_exact() {
        let m = map();
        let cfg = InverseMapConfig::default();
        let exact = liouville_grid(&m, 17, 17, 1e-3, GridSource::ExactInverse, &cfg).unwrap();
        let approx = liouville_grid(
            &m,
            17,
            17,
            1e-3,
            GridSource::Interpolant { samples: 64 },
            &cfg,
        )
        .unwrap();
        let dist = exact.max_vertex_distance(&approx).unwrap();
        assert!(dist <= 1e-3, "distance = {dist:e}");
    }

    #[test]
    fn grid_argument_validation() {
        let m = map();
        let cfg = InverseMapConfig::default();
        assert!(liouville_grid(&m, 1, 5, 0.1, GridSource::ExactInverse, &cfg).is_err());
        assert!(liouville_grid(&m, 5, 5, 0.0, GridSource::ExactInverse, &cfg).is_err());
        assert!(liouville_grid(&m, 5, 5, 0.5, GridSource::ExactInverse, &cfg).is_err());
    }
}
