//! Command-line front end. `run` is the whole program minus process exit.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 bad usage or input.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::exactnum::{LatticePoint, Rat, Vec3};
use crate::intgeom;
use crate::io::{self, format_rat, parse_lattice_point, parse_point, Document, RenderStyle};
use crate::stress::{self, ProjectionPlane, SeedPoint, StressError};
use crate::surface::{self, ConeSpec, Window};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "sailstress", version, about = "Exact stresses of projected periodic sails")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum InvariantOp {
    Length,
    Area,
    Volume,
    DistLine,
    DistPlane,
    Sine,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integer length, area, volume, distances and sine of lattice points.
    Invariants {
        #[arg(long, value_enum)]
        op: InvariantOp,
        /// Points as x,y,z.
        #[arg(long, num_args = 1.., required = true, allow_hyphen_values = true)]
        points: Vec<String>,
    },
    /// Lifting coefficient of the edge p1p2 between the planes p1p2p3 and p1p2p4.
    Omega {
        #[arg(long, num_args = 4, required = true, allow_hyphen_values = true)]
        points: Vec<String>,
    },
    /// Generates a patch of a periodic sail.
    Sail {
        #[arg(long)]
        spec: PathBuf,
        /// i0..i1,j0..j1
        #[arg(long, allow_hyphen_values = true)]
        window: String,
        /// Compare with the brute-force lattice hull.
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = 12, requires = "oracle")]
        bound: i64,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Projects a surface to a plane and computes its stresses.
    Project {
        #[arg(long)]
        surface: PathBuf,
        /// n1,n2,n3;c for the plane n·x = c
        #[arg(long, allow_hyphen_values = true)]
        plane: String,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Checks equilibrium, and optionally projective equilibrium and periodicity.
    Verify {
        #[arg(long)]
        framework: PathBuf,
        #[arg(long, requires = "surface")]
        projective: bool,
        #[arg(long)]
        surface: Option<PathBuf>,
        #[arg(long, requires = "spec")]
        periodic: bool,
        #[arg(long)]
        spec: Option<PathBuf>,
    },
    /// Lifts a stressed framework back to a surface from the lift of one face.
    Lift {
        #[arg(long)]
        framework: PathBuf,
        /// i:x,y,z;j:x,y,z;k:x,y,z
        #[arg(long, allow_hyphen_values = true)]
        seed: String,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Draws a framework as SVG.
    Render {
        #[arg(long)]
        framework: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
        #[arg(long)]
        labels: bool,
    },
}

/// A failure carrying its exit code.
struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

impl From<io::IoError> for Failure {
    fn from(e: io::IoError) -> Self {
        usage(e.to_string())
    }
}

type Outcome = std::result::Result<i32, Failure>;

/// Parses `args` (program name first) and runs one subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Invariants { op, points } => cmd_invariants(op, &points, out),
        Command::Omega { points } => cmd_omega(&points, out),
        Command::Sail {
            spec,
            window,
            oracle,
            bound,
            output,
        } => cmd_sail(&spec, &window, oracle.then_some(bound), &output, out, err),
        Command::Project { surface, plane, output } => cmd_project(&surface, &plane, &output, out),
        Command::Verify {
            framework,
            projective,
            surface,
            periodic,
            spec,
        } => cmd_verify(
            &framework,
            surface.as_deref().filter(|_| projective),
            spec.as_deref().filter(|_| periodic),
            out,
        ),
        Command::Lift { framework, seed, output } => cmd_lift(&framework, &seed, &output, out),
        Command::Render {
            framework,
            output,
            labels,
        } => cmd_render(&framework, &output, labels, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn lattice_args(points: &[String]) -> std::result::Result<Vec<LatticePoint>, Failure> {
    points
        .iter()
        .map(|p| parse_lattice_point(p).ok_or_else(|| usage(format!("not an integer point: {p:?}"))))
        .collect()
}

fn write_file(path: &Path, text: &str) -> std::result::Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| usage(format!("IoError: {}: {e}", path.display())))
}

fn cmd_invariants(op: InvariantOp, points: &[String], out: &mut dyn Write) -> Outcome {
    let p = lattice_args(points)?;
    let arity_error = |want: &str| usage(format!("{op:?} takes {want}, got {} points", p.len()));
    let diff = |a: &LatticePoint, b: &LatticePoint| a - b;
    let value = match (op, p.len()) {
        (InvariantOp::Length, 2) => intgeom::integer_length(&p[0], &p[1]),
        (InvariantOp::Length, _) => return Err(arity_error("2")),
        (InvariantOp::Area, 2) => intgeom::integer_area(&p[0], &p[1]),
        (InvariantOp::Area, 3) => intgeom::integer_area(&diff(&p[1], &p[0]), &diff(&p[2], &p[0])),
        (InvariantOp::Area, _) => return Err(arity_error("2 vectors or 3 points")),
        (InvariantOp::Volume, 3) => intgeom::integer_volume(&p[0], &p[1], &p[2]),
        (InvariantOp::Volume, 4) => {
            intgeom::integer_volume(&diff(&p[1], &p[0]), &diff(&p[2], &p[0]), &diff(&p[3], &p[0]))
        }
        (InvariantOp::Volume, _) => return Err(arity_error("3 vectors or 4 points")),
        (InvariantOp::DistLine, 3) => intgeom::integer_distance_line(&p[0], &p[1], &p[2]),
        (InvariantOp::DistLine, _) => return Err(arity_error("a point and two points of the line")),
        (InvariantOp::DistPlane, 4) => intgeom::integer_distance_plane(&p[0], &p[1], &p[2], &p[3]),
        (InvariantOp::DistPlane, _) => return Err(arity_error("a point and three points of the plane")),
        (InvariantOp::Sine, 4) => intgeom::integer_sine(&p[0], &p[1], &p[2], &p[3]),
        (InvariantOp::Sine, _) => return Err(arity_error("the edge p1 p2 and p3, p4")),
    };
    let v = value.map_err(|e| usage(e.to_string()))?;
    let _ = writeln!(out, "{v}");
    Ok(EXIT_OK)
}

fn cmd_omega(points: &[String], out: &mut dyn Write) -> Outcome {
    let p: Vec<Vec3<Rat>> = points
        .iter()
        .map(|s| parse_point(s).ok_or_else(|| usage(format!("not a rational point: {s:?}"))))
        .collect::<std::result::Result<_, _>>()?;
    let w = stress::lifting_coefficient(&p[0], &p[1], &p[2], &p[3]).map_err(|e| usage(e.to_string()))?;
    let _ = writeln!(out, "{}", format_rat(&w));
    Ok(EXIT_OK)
}

/// `i0..i1,j0..j1`.
pub fn parse_window(s: &str) -> Option<Window> {
    let range = |r: &str| -> Option<(i64, i64)> {
        let (a, b) = r.split_once("..")?;
        Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
    };
    let (i, j) = s.split_once(',')?;
    let ((i0, i1), (j0, j1)) = (range(i)?, range(j)?);
    let w = Window::new(i0, i1, j0, j1);
    (!w.is_empty()).then_some(w)
}

fn cmd_sail(
    spec_path: &Path,
    window: &str,
    oracle: Option<i64>,
    output: &Path,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let spec = io::read_file(spec_path)?.into_sailspec()?;
    let window = parse_window(window).ok_or_else(|| usage(format!("window must be i0..i1,j0..j1, got {window:?}")))?;
    let report = surface::verify_dirichlet_generators(&spec.matrix, &spec.m, &spec.n);
    if !report.passed() {
        for (name, ok) in report.checks() {
            let _ = writeln!(err, "  {name}: {}", if ok { "ok" } else { "FAILED" });
        }
        return Err(usage(format!(
            "GeneratorsRejected: {}",
            report.failures().join(", ")
        )));
    }
    let patch = surface::generate_patch(&spec, window).map_err(|e| usage(e.to_string()))?;
    let s = &patch.surface;
    let _ = writeln!(
        out,
        "patch: {} vertices, {} edges, {} faces",
        s.vertices().len(),
        s.edges().len(),
        s.faces().len()
    );
    let mut code = EXIT_OK;
    if let Some(bound) = oracle {
        let cone = ConeSpec::algebraic_containing(spec.matrix.clone(), &spec.seeds[0]).map_err(|e| usage(e.to_string()))?;
        let hull = surface::brute_force_sail(&cone, bound).map_err(|e| usage(e.to_string()))?;
        let cmp = surface::compare_with_patch(&hull, s);
        let _ = writeln!(
            out,
            "oracle: bound {bound}, {} hull faces, {} certified, {} certified vertices",
            hull.surface.faces().len(),
            hull.certified.iter().filter(|c| **c).count(),
            cmp.certified_vertices.len()
        );
        let _ = writeln!(
            out,
            "oracle: {} patch vertices in the certified region, {} certified vertices outside the window",
            cmp.patch_vertices_in_region.len(),
            cmp.uncovered.len()
        );
        let _ = writeln!(
            out,
            "oracle: {}/{} covered certified faces are patch faces",
            cmp.matched_faces, cmp.covered_faces
        );
        if cmp.agrees() {
            let _ = writeln!(out, "oracle: agree");
        } else {
            let _ = writeln!(out, "oracle: DISAGREE");
            code = EXIT_FAILED;
        }
    }
    write_file(output, &io::write_document(&Document::Surface(patch.surface)))?;
    Ok(code)
}

fn cmd_project(surface_path: &Path, plane: &str, output: &Path, out: &mut dyn Write) -> Outcome {
    let s = io::read_file(surface_path)?.into_surface()?;
    let plane: ProjectionPlane = plane.parse().map_err(|e: StressError| usage(e.to_string()))?;
    let f = stress::project_surface(&s, &plane).map_err(|e| usage(e.to_string()))?;
    let stressed = f.edges.iter().filter(|e| e.omega_bar.is_some()).count();
    let _ = writeln!(
        out,
        "framework on {plane}: {} vertices, {} edges, {} stressed",
        f.vertices.len(),
        f.edges.len(),
        stressed
    );
    write_file(output, &io::write_document(&Document::Framework(f)))?;
    Ok(EXIT_OK)
}

fn print_equilibrium(out: &mut dyn Write, title: &str, r: &stress::EquilibriumReport) -> bool {
    let failing = r.failing();
    let _ = writeln!(
        out,
        "{title}: {} interior vertices checked, {} failing, {} skipped",
        r.checked(),
        failing.len(),
        r.skipped.len()
    );
    for (v, res) in r.residuals.iter().filter(|(v, _)| failing.contains(v)) {
        let c: Vec<String> = res.0.iter().map(format_rat).collect();
        let _ = writeln!(out, "  vertex {v}: residual ({})", c.join(", "));
    }
    r.passed()
}

fn cmd_verify(framework: &Path, surface_path: Option<&Path>, spec_path: Option<&Path>, out: &mut dyn Write) -> Outcome {
    let f = io::read_file(framework)?.into_framework()?;
    let mut ok = print_equilibrium(out, "planar equilibrium", &stress::check_planar_equilibrium(&f));

    if let Some(path) = surface_path {
        let s = io::read_file(path)?.into_surface()?;
        if s.vertices().len() != f.vertices.len() {
            return Err(usage("surface and framework have different vertex counts"));
        }
        let r = stress::check_projective_equilibrium(&s, &f.coefficient_map());
        ok &= print_equilibrium(out, "projective equilibrium", &r);
    }

    if let Some(path) = spec_path {
        let spec = io::read_file(path)?.into_sailspec()?;
        let labels = f
            .labels
            .as_ref()
            .ok_or_else(|| usage("periodicity needs a framework with orbit labels"))?;
        let lo_i = labels.iter().map(|l| l.i).min().unwrap_or(0);
        let hi_i = labels.iter().map(|l| l.i).max().unwrap_or(0);
        let lo_j = labels.iter().map(|l| l.j).min().unwrap_or(0);
        let hi_j = labels.iter().map(|l| l.j).max().unwrap_or(0);
        let window = Window::new(lo_i, hi_i, lo_j, hi_j);
        let r = stress::check_periodicity(&spec, labels, &f.coefficient_map(), &window);
        let _ = writeln!(out, "periodicity: {} orbit classes", r.classes.len());
        for (class, c) in &r.classes {
            let value = c.value.as_ref().map_or_else(|| "inconsistent".to_string(), format_rat);
            let _ = writeln!(
                out,
                "  class {class}: omega {value} on {} edges, {} mismatches",
                c.edges,
                c.mismatches.len()
            );
        }
        if !r.unclassified.is_empty() {
            let _ = writeln!(out, "  {} edges match no template", r.unclassified.len());
        }
        ok &= r.passed();
    }

    let _ = writeln!(out, "result: {}", if ok { "PASS" } else { "FAIL" });
    Ok(if ok { EXIT_OK } else { EXIT_FAILED })
}

/// `i:x,y,z;j:x,y,z;k:x,y,z`.
pub fn parse_seed(s: &str) -> Option<[SeedPoint; 3]> {
    let seeds: Vec<SeedPoint> = s
        .split(';')
        .map(|part| {
            let (v, p) = part.split_once(':')?;
            Some(SeedPoint {
                vertex: v.trim().parse().ok()?,
                point: parse_point(p)?,
            })
        })
        .collect::<Option<_>>()?;
    seeds.try_into().ok()
}

fn cmd_lift(framework: &Path, seed: &str, output: &Path, out: &mut dyn Write) -> Outcome {
    let f = io::read_file(framework)?.into_framework()?;
    let seed = parse_seed(seed).ok_or_else(|| usage(format!("seed must be i:x,y,z;j:x,y,z;k:x,y,z, got {seed:?}")))?;
    match stress::lift_framework(&f, &seed) {
        Ok(r) => {
            let _ = writeln!(
                out,
                "lifted {} vertices: {} face crossings, {} cycle checks, monodromy zero",
                r.surface.vertices().len(),
                r.tree_crossings,
                r.loop_checks
            );
            write_file(output, &io::write_document(&Document::Surface(r.surface)))?;
            Ok(EXIT_OK)
        }
        Err(e @ StressError::MonodromyNonzero { .. }) => Err(Failure {
            code: EXIT_FAILED,
            message: e.to_string(),
        }),
        Err(e) => Err(usage(e.to_string())),
    }
}

fn cmd_render(framework: &Path, output: &Path, labels: bool, out: &mut dyn Write) -> Outcome {
    let f = io::read_file(framework)?.into_framework()?;
    let style = RenderStyle {
        labels,
        ..RenderStyle::default()
    };
    let svg = io::render_svg(&f, &style, None)?;
    write_file(output, &svg)?;
    let _ = writeln!(out, "rendered {} edges to {}", f.edges.len(), output.display());
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut argv = vec!["sailstress"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn invariants() {
        assert_eq!(call(&["invariants", "--op", "length", "--points", "0,0,0", "2,4,6"]).1, "2\n");
        let worked = ["2,3,4", "2,7,9", "1,-3,5", "5,6,7"];
        let mut args = vec!["invariants", "--op", "volume", "--points"];
        args.extend(worked);
        assert_eq!(call(&args).1, "99\n");
        args[2] = "sine";
        assert_eq!(call(&args).1, "33\n");
        let (code, _, err) = call(&["invariants", "--op", "length", "--points", "1,1,1", "1,1,1"]);
        assert_eq!(code, 2);
        assert!(err.contains("DegeneratePoints"), "{err}");
        assert_eq!(call(&["invariants", "--op", "area", "--points", "1,0,0"]).0, 2);
    }

    #[test]
    fn omega() {
        let (code, out, _) = call(&["omega", "--points", "2,3,4", "2,7,9", "1,-3,5", "5,6,7"]);
        assert_eq!((code, out.as_str()), (0, "-11/69\n"));
        assert_eq!(call(&["omega", "--points", "2,3,4", "2,7,9", "1,-3,5", "1,1,10"]).1, "0\n");
        let (code, _, err) = call(&["omega", "--points", "1,0,0", "2,0,0", "0,1,0", "0,0,1"]);
        assert_eq!(code, 2);
        assert!(err.contains("PlaneThroughOrigin"), "{err}");
    }

    #[test]
    fn usage_errors() {
        assert_eq!(call(&[]).0, 2);
        assert_eq!(call(&["frobnicate"]).0, 2);
        assert_eq!(call(&["omega", "--points", "1,2,3", "--bogus"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn parsers() {
        assert_eq!(parse_window("-1..1,0..2"), Some(Window::new(-1, 1, 0, 2)));
        assert_eq!(parse_window("1..0,0..0"), None);
        assert_eq!(parse_window("0..1"), None);
        let seed = parse_seed("0:0,0,1;3:1/2,1,1;4:1,1,1").unwrap();
        assert_eq!(seed[1].vertex, 3);
        assert_eq!(seed[1].point, Vec3::from_ratios((1, 2), (1, 1), (1, 1)));
        assert!(parse_seed("0:0,0,1;1:1,1,1").is_none());
    }
}
