//! `canal`: Frenet frame checks, scene verification and mesh export.
//!
//! Exit codes: 0 pass, 1 usage, schema or I/O error, 2 verification failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use canal_core::curves::{builtin, frame_at, verify_frame_with, CurveSpec, FrameTolerances};
use canal_core::mesh::{export_field, export_obj, sweep, FieldFormat, Projection};
use canal_core::oracle::{DEFAULT_ABS_TOL, DEFAULT_REL_TOL, DEFAULT_STEP};
use canal_core::verify::{verify_scene, VerifyOptions};
use canal_core::{load_scene, Scene};

#[derive(Parser)]
#[command(name = "canal", version, about = "Canal and tubular hypersurfaces in Minkowski 4-space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check Frenet frames of a center curve.
    Frames(FramesArgs),
    /// Verify a scene: envelope, curvature, relation, causal character.
    Verify(VerifyArgs),
    /// Sample a two-parameter slice and write OBJ and field files.
    Mesh(MeshArgs),
}

#[derive(Args)]
struct FramesArgs {
    /// Builtin curve name.
    #[arg(long, required_unless_present = "scene", conflicts_with = "scene")]
    curve: Option<String>,
    /// Take the curve and s range from a scene file.
    #[arg(long)]
    scene: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    s_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    s_max: Option<f64>,
    /// Number of samples.
    #[arg(short = 'n', long, default_value_t = 50)]
    samples: usize,
    /// Step of the ODE residual differences.
    #[arg(long, default_value_t = 1e-4)]
    step: f64,
    #[arg(long, default_value_t = 1e-8)]
    gram_tol: f64,
    #[arg(long, default_value_t = 1e-5)]
    ode_tol: f64,
}

#[derive(Args)]
struct Tolerances {
    #[arg(long, default_value_t = DEFAULT_REL_TOL)]
    rel_tol: f64,
    #[arg(long, default_value_t = DEFAULT_ABS_TOL)]
    abs_tol: f64,
    /// Oracle finite-difference step.
    #[arg(long, default_value_t = DEFAULT_STEP)]
    step: f64,
}

#[derive(Args)]
struct VerifyArgs {
    scene: PathBuf,
    #[command(flatten)]
    tol: Tolerances,
    /// Random points for the envelope checks.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Axes {
    X1x2x3,
    X1x2x4,
    X1x3x4,
    X2x3x4,
}

#[derive(Args)]
struct MeshArgs {
    scene: PathBuf,
    /// OBJ output; defaults to the scene's, then `<name>.obj`.
    #[arg(long)]
    obj: Option<PathBuf>,
    /// Field output; defaults to the scene's.
    #[arg(long)]
    field: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long, value_enum)]
    projection: Option<Axes>,
    /// Oracle finite-difference step.
    #[arg(long, default_value_t = DEFAULT_STEP)]
    step: f64,
}

enum Outcome {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Frames(a) => cmd_frames(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Mesh(a) => cmd_mesh(a),
    };
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn scene(path: &Path) -> anyhow::Result<Scene> {
    load_scene(path).map_err(|e| anyhow!(e))
}

fn cmd_frames(a: FramesArgs) -> anyhow::Result<Outcome> {
    let (curve, range): (CurveSpec, [f64; 2]) = match (&a.curve, &a.scene) {
        (Some(name), _) => (builtin(name)?, [-1.0, 1.0]),
        (None, Some(path)) => {
            let sc = scene(path)?;
            (sc.surface.curve.clone(), sc.grid.s)
        }
        (None, None) => unreachable!("clap requires one of them"),
    };
    let (lo, hi) = (a.s_min.unwrap_or(range[0]), a.s_max.unwrap_or(range[1]));
    if a.samples == 0 || !(lo <= hi) {
        return Err(anyhow!("need at least one sample and s-min <= s-max"));
    }
    let tol = FrameTolerances {
        gram: a.gram_tol,
        ode: a.ode_tol,
    };
    println!("curve {} ({})", curve.builtin.map_or("custom", |b| b.name()), curve.class.name());
    println!("{:>10} {:>12} {:>12} {:>12}  status", "s", "gram", "ode", "arclength");
    let mut all = true;
    for i in 0..a.samples {
        let s = if a.samples == 1 { lo } else { lo + (hi - lo) * i as f64 / (a.samples - 1) as f64 };
        match frame_at(&curve, s) {
            Ok(frame) => {
                let r = verify_frame_with(&frame, curve.class, &curve, a.step, tol);
                all &= r.pass;
                let arc = r.arclength_residual.map_or("-".to_string(), |x| format!("{x:.3e}"));
                println!(
                    "{s:>10.4} {:>12.3e} {:>12.3e} {arc:>12}  {}",
                    r.gram_residual,
                    r.ode_residual,
                    if r.pass { "PASS" } else { "FAIL" }
                );
            }
            Err(e) => {
                all = false;
                println!("{s:>10.4} {e}");
            }
        }
    }
    println!("{}", if all { "PASS" } else { "FAIL" });
    Ok(if all { Outcome::Pass } else { Outcome::Fail })
}

fn cmd_verify(a: VerifyArgs) -> anyhow::Result<Outcome> {
    let sc = scene(&a.scene)?;
    let mut opts = VerifyOptions {
        rel_tol: a.tol.rel_tol,
        abs_tol: a.tol.abs_tol,
        step: a.tol.step,
        ..VerifyOptions::default()
    };
    let mut sc = sc;
    if let Some(n) = a.samples {
        sc.samples = Some(n);
    }
    if let Some(seed) = a.seed {
        sc.seed = Some(seed);
    }
    opts.samples = sc.samples.unwrap_or(opts.samples);
    let report = match verify_scene(&sc, &opts) {
        Ok(r) => r,
        Err(e) => {
            println!("scene  {}", sc.name);
            println!("FAIL: {e}");
            return Ok(Outcome::Fail);
        }
    };
    if a.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        println!("{report}");
    }
    Ok(if report.pass() { Outcome::Pass } else { Outcome::Fail })
}

fn cmd_mesh(a: MeshArgs) -> anyhow::Result<Outcome> {
    let sc = scene(&a.scene)?;
    let settings = sc
        .mesh
        .clone()
        .ok_or_else(|| anyhow!("{}: the scene has no [mesh] section", a.scene.display()))?;
    let grid = sc.mesh_grid().expect("mesh section present");
    let projection = match a.projection {
        Some(Axes::X1x2x3) => Projection::X123,
        Some(Axes::X1x2x4) => Projection::X124,
        Some(Axes::X1x3x4) => Projection::X134,
        Some(Axes::X2x3x4) => Projection::X234,
        None => settings.projection,
    };
    let format = match a.format {
        Some(Format::Csv) => FieldFormat::Csv,
        Some(Format::Json) => FieldFormat::Json,
        None => settings.field_format,
    };
    let obj = a
        .obj
        .or(settings.obj)
        .unwrap_or_else(|| PathBuf::from(format!("{}.obj", sc.name)));
    let field = a.field.or(settings.field);

    let mesh = sweep(&sc.surface, &grid, projection, a.step).with_context(|| format!("sampling {}", sc.name))?;
    export_obj(&mesh, &obj)?;
    println!("wrote {} ({} vertices, {} quads)", obj.display(), mesh.vertices.len(), mesh.quads.len());
    if let Some(path) = field {
        export_field(&mesh, &sc.surface, &path, format)?;
        println!("wrote {}", path.display());
    }
    println!("singular points: {}", mesh.singular_count());
    Ok(Outcome::Pass)
}
