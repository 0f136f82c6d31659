//! `liouville`: forward/inverse conformal coordinates of a triaxial
//! ellipsoid, coefficient tables, mesh export, and the verification suite.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::ToPrimitive;

use liouville_core::mesh::{self, GridSource, MeshFormat};
use liouville_core::verify::{self, Profile};
use liouville_core::{
    forward_series, inverse_series, normalized_coefficients, ConformalMap, EllipsoidShape,
    InverseMapConfig,
};

#[derive(Parser)]
#[command(
    name = "liouville",
    version,
    about = "Conformal (Liouville) coordinates of a triaxial ellipsoid",
    propagate_version = true
)]
struct Cli {
    /// Semi-axes as a comma list a,b,c with 0 < c < b < a
    #[arg(long, global = true, default_value = "3,2,1", value_parser = parse_axes)]
    axes: Axes,

    /// Significant digits of numeric output (default: shortest exact form)
    #[arg(long, global = true)]
    digits: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug)]
struct Axes {
    a: f64,
    b: f64,
    c: f64,
}

fn parse_axes(s: &str) -> Result<Axes, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected a,b,c (three comma-separated values), got `{s}`"));
    }
    let mut v = [0.0f64; 3];
    for (slot, part) in v.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|e| format!("bad axis `{part}`: {e}"))?;
    }
    Ok(Axes {
        a: v[0],
        b: v[1],
        c: v[2],
    })
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the forward maps X(u) and/or Y(v)
    Forward(ForwardArgs),
    /// Evaluate the inverse maps U(x) and/or V(y)
    Inverse(InverseArgs),
    /// Print the series coefficient tables as JSON
    Coeffs(CoeffsArgs),
    /// Generate a surface mesh and write it to a file
    Mesh(MeshArgs),
    /// Run the verification suite and print a pass/fail report
    Verify(VerifyArgs),
}

#[derive(Args)]
struct ForwardArgs {
    /// Curvature-line coordinate u in [b², a²]
    #[arg(long)]
    u: Option<f64>,
    /// Curvature-line coordinate v in [c², b²]
    #[arg(long)]
    v: Option<f64>,
}

#[derive(Args)]
struct InverseArgs {
    /// Liouville coordinate x in [0, X(a²)]
    #[arg(long)]
    x: Option<f64>,
    /// Liouville coordinate y in [0, Y(b²)]
    #[arg(long)]
    y: Option<f64>,
    /// Inversion route
    #[arg(long, value_enum, default_value_t = Method::Newton)]
    method: Method,
    /// Truncation order of the series route
    #[arg(long, default_value_t = liouville_core::series::DEFAULT_ORDER)]
    order: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Safeguarded Newton on the quadrature forward map
    Newton,
    /// Generalized Jacobi amplitude closed form
    Closed,
    /// Truncated reversed series
    Series,
}

impl Method {
    fn tag(self) -> &'static str {
        match self {
            Method::Newton => "newton",
            Method::Closed => "closed",
            Method::Series => "series",
        }
    }
}

#[derive(Args)]
struct CoeffsArgs {
    /// Truncation order K
    #[arg(long, default_value_t = liouville_core::series::DEFAULT_ORDER)]
    order: usize,
    /// Emit exact rationals (numerator/denominator) instead of floats
    #[arg(long)]
    exact: bool,
}

#[derive(Args)]
struct MeshArgs {
    #[arg(long, value_enum)]
    kind: MeshKind,
    /// Grid size as NXxNY
    #[arg(long, value_parser = parse_grid, default_value = "33x33")]
    grid: (usize, usize),
    /// Output path
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Obj)]
    format: Format,
    /// Assemble 8 reflected octant copies into the full surface
    #[arg(long)]
    full_surface: bool,
    /// Boundary clipping as a fraction of each rectangle side
    #[arg(long, default_value_t = 1e-3)]
    eps: f64,
    /// Inverse-map source for the Liouville grid
    #[arg(long, value_enum, default_value_t = Source::Exact)]
    source: Source,
    /// Forward samples when --source interpolant
    #[arg(long, default_value_t = 64)]
    samples: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MeshKind {
    /// Conformal grid: Ellipsoid(U(x), V(y)) on a uniform (x, y) lattice
    Liouville,
    /// Curvature-line grid: uniform (u, v) lattice
    Curvature,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Obj,
    Csv,
    Json,
}

impl From<Format> for MeshFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Obj => MeshFormat::Obj,
            Format::Csv => MeshFormat::Csv,
            Format::Json => MeshFormat::Json,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Source {
    Exact,
    Interpolant,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = ProfileArg::Full)]
    profile: ProfileArg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProfileArg {
    /// Reduced sample counts; completes in seconds
    Quick,
    /// The full stated sizes
    Full,
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (nx, ny) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected NXxNY, got `{s}`"))?;
    let nx = nx.parse().map_err(|e| format!("bad grid width: {e}"))?;
    let ny = ny.parse().map_err(|e| format!("bad grid height: {e}"))?;
    Ok((nx, ny))
}

/// Failure carrying its process exit code: 1 = computation/verification
/// failure, 2 = usage error.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    fn runtime(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }
}

fn main() -> ExitCode {
    // Die quietly on EPIPE (e.g. `liouville coeffs | head`) instead of
    // panicking in the stdout machinery.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    let shape = EllipsoidShape::new(cli.axes.a, cli.axes.b, cli.axes.c)
        .map_err(|e| Failure::usage(e.to_string()))?;
    let fmt = |v: f64| format_number(v, cli.digits);
    match cli.command {
        Command::Forward(args) => {
            if args.u.is_none() && args.v.is_none() {
                return Err(Failure::usage("forward requires --u and/or --v"));
            }
            let map = build_map(shape)?;
            if let Some(u) = args.u {
                println!("{}", fmt(map.x_of_u(u).map_err(usage)?));
            }
            if let Some(v) = args.v {
                println!("{}", fmt(map.y_of_v(v).map_err(usage)?));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Inverse(args) => {
            if args.x.is_none() && args.y.is_none() {
                return Err(Failure::usage("inverse requires --x and/or --y"));
            }
            let map = build_map(shape)?;
            let cfg = InverseMapConfig::default();
            let series = if args.method == Method::Series {
                let fwd = forward_series(&shape, args.order).map_err(usage)?;
                Some(inverse_series(&fwd).map_err(runtime)?)
            } else {
                None
            };
            if let Some(x) = args.x {
                let u = match args.method {
                    Method::Newton => map.u_of_x(x, &cfg).map_err(usage)?,
                    Method::Closed => map.u_of_x_closed(x).map_err(usage)?,
                    Method::Series => series.as_ref().unwrap().u_at(x).map_err(usage)?.value,
                };
                println!("{} {}", fmt(u), args.method.tag());
            }
            if let Some(y) = args.y {
                let v = match args.method {
                    Method::Newton => map.v_of_y(y, &cfg).map_err(usage)?,
                    Method::Closed => map.v_of_y_closed(y).map_err(usage)?,
                    Method::Series => series.as_ref().unwrap().v_at(y).map_err(usage)?.value,
                };
                println!("{} {}", fmt(v), args.method.tag());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Coeffs(args) => {
            let fwd = forward_series(&shape, args.order).map_err(usage)?;
            let inv = inverse_series(&fwd).map_err(runtime)?;
            let norm = normalized_coefficients(&fwd, &inv).map_err(runtime)?;
            let mut rows = Vec::new();
            let odd = |k: usize| 2 * k + 1;
            let even = |k: usize| 2 * (k + 1);
            push_family(&mut rows, "A", fwd.a_coeffs(), odd, args.exact);
            push_family(&mut rows, "B", fwd.b_coeffs(), odd, args.exact);
            push_family(&mut rows, "C", inv.c_coeffs(), even, args.exact);
            push_family(&mut rows, "D", inv.d_coeffs(), even, args.exact);
            push_family(&mut rows, "alpha", norm.alpha(), odd, args.exact);
            push_family(&mut rows, "beta", norm.beta(), odd, args.exact);
            push_family(&mut rows, "gamma", norm.gamma(), even, args.exact);
            push_family(&mut rows, "delta", norm.delta(), even, args.exact);
            println!(
                "{}",
                serde_json::to_string_pretty(&serde_json::Value::Array(rows))
                    .map_err(|e| Failure::runtime(e.to_string()))?
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Mesh(args) => {
            if args.full_surface && args.format == Format::Csv {
                return Err(Failure::usage(
                    "csv is grid-indexed and not available with --full-surface; use obj or json",
                ));
            }
            let (nx, ny) = args.grid;
            let grid_mesh = match args.kind {
                MeshKind::Liouville => {
                    let map = build_map(shape)?;
                    let source = match args.source {
                        Source::Exact => GridSource::ExactInverse,
                        Source::Interpolant => GridSource::Interpolant {
                            samples: args.samples,
                        },
                    };
                    mesh::liouville_grid(&map, nx, ny, args.eps, source, &InverseMapConfig::default())
                        .map_err(usage)?
                }
                MeshKind::Curvature => {
                    mesh::curvature_grid(&shape, nx, ny, args.eps).map_err(usage)?
                }
            };
            if args.full_surface {
                let full = mesh::reflect_octants(&grid_mesh);
                mesh::export_quad_mesh(&full, args.format.into(), &args.out).map_err(runtime)?;
                println!(
                    "wrote {} vertices, {} quads to {}",
                    full.vertices.len(),
                    full.quads.len(),
                    args.out.display()
                );
            } else {
                mesh::export_mesh(&grid_mesh, args.format.into(), &args.out).map_err(runtime)?;
                println!(
                    "wrote {} vertices, {} quads to {}",
                    grid_mesh.vertices.len(),
                    grid_mesh.quads.len(),
                    args.out.display()
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify(args) => {
            let profile = match args.profile {
                ProfileArg::Quick => Profile::Quick,
                ProfileArg::Full => Profile::Full,
            };
            let reports = verify::run_all(&shape, profile)
                .map_err(|e| Failure::runtime(e.to_string()))?;
            let mut all_passed = true;
            for report in &reports {
                println!("{}", report.line());
                all_passed &= report.passed;
            }
            let passed = reports.iter().filter(|r| r.passed).count();
            println!("{passed}/{} criteria passed", reports.len());
            Ok(if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn build_map(shape: EllipsoidShape) -> Result<ConformalMap, Failure> {
    ConformalMap::new(shape).map_err(|e| Failure::runtime(e.to_string()))
}

fn usage(e: liouville_core::Error) -> Failure {
    Failure::usage(e.to_string())
}

fn runtime(e: liouville_core::Error) -> Failure {
    Failure::runtime(e.to_string())
}

/// Default: the shortest decimal that parses back to the same value (full
/// precision). With `--digits N`: scientific notation at N significant
/// digits.
fn format_number(v: f64, digits: Option<usize>) -> String {
    match digits {
        None => format!("{v}"),
        Some(d) => format!("{:.*e}", d.saturating_sub(1), v),
    }
}

fn push_family<F: Fn(usize) -> usize>(
    rows: &mut Vec<serde_json::Value>,
    family: &str,
    coeffs: &[num::BigRational],
    subscript: F,
    exact: bool,
) {
    for (k, value) in coeffs.iter().enumerate() {
        let row = if exact {
            serde_json::json!({
                "family": family,
                "k": subscript(k),
                "numerator": value.numer().to_string(),
                "denominator": value.denom().to_string(),
            })
        } else {
            serde_json::json!({
                "family": family,
                "k": subscript(k),
                "value": value.to_f64().unwrap_or(f64::NAN),
            })
        };
        rows.push(row);
    }
}
