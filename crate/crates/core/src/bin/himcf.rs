use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;

use himcf::flow::TimeStep;
use himcf::radial::RadialGeometry;
use himcf::scenario::{
    cmd_containment, cmd_curve, cmd_radial, cmd_verify, to_sorted_json, write_atomic, Body,
    ContainmentSpec, CurveSpec, Forcing, Preset, RadialSpec, RunOutput, Speed,
};
use himcf::Error;

#[derive(Parser)]
#[command(name = "himcf", version, about = "Hyperbolic inverse mean curvature flow laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Directory receiving CSV, JSON and SVG outputs.
    #[arg(long, default_value = "himcf-out")]
    out_dir: PathBuf,
    /// JSON scenario file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Radially symmetric solutions against their closed form.
    Radial(RadialArgs),
    /// Plane-curve flow from a preset initial curve.
    Curve(CurveArgs),
    /// Containment check between two curve flows.
    Containment(ContainmentArgs),
    /// Runs invariant suites.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GeometryArg {
    Sphere,
    Cylinder,
    Circle,
}

#[derive(Args)]
struct RadialArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum)]
    geometry: Option<GeometryArg>,
    /// Sphere dimension.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    r0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    r1: Option<f64>,
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    /// Constant forcing c in r_tt = (κ + c) r.
    #[arg(long, allow_hyphen_values = true)]
    forcing: Option<f64>,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum PresetArg {
    Circle,
    Ellipse,
    Fourier,
}

#[derive(Args)]
struct FlowArgs {
    /// θ-grid size.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    t_end: Option<f64>,
    /// Fixed time step (default: adaptive).
    #[arg(long)]
    dt: Option<f64>,
    /// Safety factor of the adaptive step.
    #[arg(long)]
    cfl: Option<f64>,
    #[arg(long)]
    eps_convex: Option<f64>,
    #[arg(long)]
    record_every: Option<usize>,
    #[arg(long)]
    record_interval: Option<f64>,
}

#[derive(Args)]
struct CurveArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum)]
    preset: Option<PresetArg>,
    #[arg(long)]
    r0: Option<f64>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    /// Cosine coefficients c0,c1,c2,... of the support function.
    #[arg(long, allow_hyphen_values = true)]
    coeffs: Option<String>,
    /// Sine coefficients s1,s2,... of the support function.
    #[arg(long, allow_hyphen_values = true)]
    sin_coeffs: Option<String>,
    /// Constant initial normal speed.
    #[arg(long, allow_hyphen_values = true)]
    speed: Option<f64>,
    /// Cosine coefficients of a non-constant initial speed.
    #[arg(long, allow_hyphen_values = true)]
    speed_coeffs: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    speed_sin_coeffs: Option<String>,
    #[command(flatten)]
    flow: FlowArgs,
    /// Also run the vertex solver and compare.
    #[arg(long)]
    both_solvers: bool,
    #[arg(long)]
    vertices: Option<usize>,
}

#[derive(Args)]
struct ContainmentArgs {
    #[command(flatten)]
    common: Common,
    /// Outer curve: circle:R, ellipse:A,B or fourier:C0,C1,...
    #[arg(long)]
    outer: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    outer_speed: Option<f64>,
    /// Inner curve, same syntax as --outer.
    #[arg(long)]
    inner: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    inner_speed: Option<f64>,
    #[command(flatten)]
    flow: FlowArgs,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    /// Suites to run (default: all).
    suites: Vec<String>,
}

fn config_error(msg: impl Into<String>) -> Error {
    Error::InvalidConfig(msg.into())
}

fn load<T: DeserializeOwned + Default>(path: &Option<PathBuf>) -> Result<T, Error> {
    match path {
        None => Ok(T::default()),
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| config_error(format!("cannot read {}: {e}", p.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| config_error(format!("cannot parse {}: {e}", p.display())))
        }
    }
}

fn parse_list(s: &str) -> Result<Vec<f64>, Error> {
    s.split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| config_error(format!("not a number: '{x}'")))
        })
        .collect()
}

fn parse_preset(s: &str) -> Result<Preset, Error> {
    let (kind, rest) = s
        .split_once(':')
        .ok_or_else(|| config_error(format!("expected kind:params, got '{s}'")))?;
    let v = parse_list(rest)?;
    match (kind, v.as_slice()) {
        ("circle", [r0]) => Ok(Preset::Circle { r0: *r0 }),
        ("ellipse", [a, b]) => Ok(Preset::Ellipse { a: *a, b: *b }),
        ("fourier", _) if !v.is_empty() => Ok(Preset::Fourier { cos: v, sin: vec![] }),
        _ => Err(config_error(format!("unrecognised curve '{s}'"))),
    }
}

fn apply_flow(flow: &mut himcf::flow::FlowConfig, args: &FlowArgs) {
    if let Some(n) = args.n {
        flow.n = n;
    }
    if let Some(t) = args.t_end {
        flow.t_end = t;
    }
    if let Some(dt) = args.dt {
        flow.step = TimeStep::Fixed { dt };
    }
    if let Some(c) = args.cfl {
        flow.step = TimeStep::Adaptive { cfl_safety: c };
    }
    if args.eps_convex.is_some() {
        flow.eps_convex = args.eps_convex;
    }
    if let Some(k) = args.record_every {
        flow.record_every = k;
        flow.record_interval = None;
    }
    if args.record_interval.is_some() {
        flow.record_interval = args.record_interval;
    }
}

fn radial_spec(args: &RadialArgs) -> Result<RadialSpec, Error> {
    let mut spec: RadialSpec = load(&args.common.config)?;
    let dim = args.n.or(match spec.geometry {
        RadialGeometry::SphereN { n } => Some(n),
        _ => None,
    });
    match args.geometry {
        Some(GeometryArg::Sphere) => spec.geometry = RadialGeometry::sphere(dim.unwrap_or(2))?,
        Some(GeometryArg::Cylinder) => spec.geometry = RadialGeometry::Cylinder,
        Some(GeometryArg::Circle) => spec.geometry = RadialGeometry::Circle,
        None => {
            if let (Some(n), RadialGeometry::SphereN { .. }) = (args.n, spec.geometry) {
                spec.geometry = RadialGeometry::sphere(n)?;
            }
        }
    }
    spec.r0 = args.r0.unwrap_or(spec.r0);
    spec.r1 = args.r1.unwrap_or(spec.r1);
    spec.t_end = args.t_end.unwrap_or(spec.t_end);
    spec.dt = args.dt.unwrap_or(spec.dt);
    if let Some(c) = args.forcing {
        spec.forcing = Forcing::Constant { c };
    }
    Ok(spec)
}

fn curve_spec(args: &CurveArgs) -> Result<CurveSpec, Error> {
    let mut spec: CurveSpec = load(&args.common.config)?;
    let current = match &spec.preset {
        Preset::Circle { .. } => PresetArg::Circle,
        Preset::Ellipse { .. } => PresetArg::Ellipse,
        Preset::Fourier { .. } => PresetArg::Fourier,
    };
    let kind = args.preset.unwrap_or(current);
    let touched = args.preset.is_some()
        || args.r0.is_some()
        || args.a.is_some()
        || args.b.is_some()
        || args.coeffs.is_some()
        || args.sin_coeffs.is_some();
    if touched {
        let same = kind == current;
        spec.preset = match kind {
            PresetArg::Circle => {
                let old = match (&spec.preset, same) {
                    (Preset::Circle { r0 }, true) => *r0,
                    _ => 1.0,
                };
                Preset::Circle {
                    r0: args.r0.unwrap_or(old),
                }
            }
            PresetArg::Ellipse => {
                let (oa, ob) = match (&spec.preset, same) {
                    (Preset::Ellipse { a, b }, true) => (*a, *b),
                    _ => (1.0, 1.0),
                };
                Preset::Ellipse {
                    a: args.a.unwrap_or(oa),
                    b: args.b.unwrap_or(ob),
                }
            }
            PresetArg::Fourier => {
                let (oc, os) = match (&spec.preset, same) {
                    (Preset::Fourier { cos, sin }, true) => (cos.clone(), sin.clone()),
                    _ => (vec![1.0], vec![]),
                };
                Preset::Fourier {
                    cos: args.coeffs.as_deref().map(parse_list).transpose()?.unwrap_or(oc),
                    sin: args.sin_coeffs.as_deref().map(parse_list).transpose()?.unwrap_or(os),
                }
            }
        };
    }
    if let Some(c) = args.speed {
        spec.speed = Speed::Constant { c };
    }
    if args.speed_coeffs.is_some() || args.speed_sin_coeffs.is_some() {
        spec.speed = Speed::Fourier {
            cos: args.speed_coeffs.as_deref().map(parse_list).transpose()?.unwrap_or_default(),
            sin: args
                .speed_sin_coeffs
                .as_deref()
                .map(parse_list)
                .transpose()?
                .unwrap_or_default(),
        };
    }
    apply_flow(&mut spec.flow, &args.flow);
    spec.both_solvers |= args.both_solvers;
    spec.vertices = args.vertices.unwrap_or(spec.vertices);
    Ok(spec)
}

fn containment_spec(args: &ContainmentArgs) -> Result<ContainmentSpec, Error> {
    let mut spec: ContainmentSpec = load(&args.common.config)?;
    let set = |body: &mut Body, preset: &Option<String>, speed: Option<f64>| -> Result<(), Error> {
        if let Some(p) = preset {
            body.preset = parse_preset(p)?;
        }
        if let Some(c) = speed {
            body.speed = Speed::Constant { c };
        }
        Ok(())
    };
    set(&mut spec.outer, &args.outer, args.outer_speed)?;
    set(&mut spec.inner, &args.inner, args.inner_speed)?;
    apply_flow(&mut spec.flow, &args.flow);
    Ok(spec)
}

#[derive(serde::Deserialize, Default)]
#[serde(default)]
struct VerifyConfig {
    suites: Vec<String>,
}

fn emit(output: RunOutput, dir: &Path) -> Result<ExitCode, Error> {
    output.write_to(dir)?;
    print!("{}", output.summary_json()?);
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Radial(args) => emit(cmd_radial(&radial_spec(&args)?)?, &args.common.out_dir),
        Command::Curve(args) => emit(cmd_curve(&curve_spec(&args)?)?, &args.common.out_dir),
        Command::Containment(args) => {
            emit(cmd_containment(&containment_spec(&args)?)?, &args.common.out_dir)
        }
        Command::Verify(args) => {
            let cfg: VerifyConfig = load(&args.common.config)?;
            let names = if args.suites.is_empty() {
                cfg.suites
            } else {
                args.suites
            };
            let report = cmd_verify(&names)?;
            let json = to_sorted_json(&report).map_err(|e| config_error(e.to_string()))?;
            write_atomic(&args.common.out_dir.join("verify_report.json"), json.as_bytes())
                .map_err(|e| config_error(format!("cannot write output: {e}")))?;
            print!("{json}");
            Ok(if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
    }
}

fn fail(kind: &str, message: &str, code: u8) -> ExitCode {
    let body = serde_json::json!({ "error": kind, "message": message });
    eprintln!("{body}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail("InvalidArguments", e.to_string().trim(), 1),
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => fail(e.kind(), &e.to_string(), e.exit_code() as u8),
    }
}
