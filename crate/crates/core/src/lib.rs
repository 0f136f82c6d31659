//! Conformal (Liouville) parametrization of the triaxial ellipsoid.
//!
//! The curvature-line parametrization of the ellipsoid `0 < c < b < a` has
//! line element `ds² = ¼(u−v)(f(u)du² − f(v)dv²)`. Substituting
//! `x = X(u) = ∫√(+f)`, `y = Y(v) = ∫√(−f)` brings it to the Liouville form
//! `ds² = ¼(U(x) − V(y))(dx² + dy²)`: conformal coordinates whose factor
//! splits into one-variable terms.
//!
//! The crate computes the forward maps (quadrature and closed forms through
//! elliptic integrals of the third kind), the inverse maps (root solves and
//! generalized Jacobi amplitudes), truncated series with exact rational
//! coefficients, and meshes of the resulting parametrizations, plus a
//! verification suite tying the routes together.

pub mod conformal;
pub mod ellipsoid;
pub mod elliptic;
pub mod error;
pub mod interp;
pub mod inverse;
pub mod mesh;
pub mod series;
pub mod verify;

mod newton;
mod quadrature;

pub use conformal::{ConformalMap, JacobiMapParams, LiouvilleCoords};
pub use ellipsoid::{CurvatureCoords, EllipsoidShape, MetricSample, Point3};
pub use elliptic::{
    carlson_rf, carlson_rj, ellint_pi, gen_jacobi_am, gen_jacobi_am_with, gen_jacobi_sn, AmConfig,
    ComplexValue, EllipticArgs,
};
pub use error::{Error, Result};
pub use inverse::InverseMapConfig;
pub use mesh::{
    build_interpolant, conformality_report, curvature_grid, export_mesh, liouville_grid,
    reflect_octants, sample_forward, ConformalityReport, GridSource, MeshFormat,
    MonotoneInterpolant, QuadMesh, SampleTable, SurfaceMesh,
};
pub use series::{
    forward_series, inverse_series, normalized_coefficients, ForwardSeries, InverseSeries,
    NormalizedCoefficients, SeriesEval,
};
