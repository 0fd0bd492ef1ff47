use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use vmplane::analysis::{self, Radius};
use vmplane::constructions::{self, DISCONNECTED_DEFAULT_DROP, MPRIME_ZERO_DEFAULT_DROP};
use vmplane::geodesics::{self, GeodesicLaunch};
use vmplane::io::{read_profile_csv, svg_plot, svg_polyline, write_profile_csv};
use vmplane::jacobi::{self, embed_profile, Embedding, DEFAULT_R_MAX, DEFAULT_TOL};
use vmplane::quadrature::minus_two_tail;
use vmplane::{CurvatureSpec, DropParams, Error, PlaneProfile};

#[derive(Parser)]
#[command(name = "vmplane", version, about = "Rays, poles and critical sets on rotationally symmetric planes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build or inspect a plane profile.
    #[command(subcommand)]
    Plane(PlaneCmd),
    /// Turn angle of the geodesic launched from radius r at angle kappa.
    TurnAngle {
        #[command(flatten)]
        profile: ProfileArgs,
        #[arg(long)]
        r: f64,
        #[arg(long, allow_hyphen_values = true)]
        kappa: f64,
        #[command(flatten)]
        band: BandArg,
    },
    /// Pole, critical and away membership of the points at radius r.
    Classify {
        #[command(flatten)]
        profile: ProfileArgs,
        #[arg(long)]
        r: f64,
        #[command(flatten)]
        band: BandArg,
    },
    /// R_m, rho_m and R_p with brackets.
    Radii {
        #[command(flatten)]
        profile: ProfileArgs,
        #[command(flatten)]
        band: BandArg,
    },
    /// Classify a grid of radii and report the critical and away sets.
    Scan {
        #[command(flatten)]
        profile: ProfileArgs,
        /// Number of grid radii.
        #[arg(long, default_value_t = 128)]
        grid: usize,
        /// Plot of T(r) against the line T = pi.
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[command(flatten)]
        band: BandArg,
    },
    /// Smoothed cone with terminal slope s.
    Cone {
        #[arg(long)]
        slope: f64,
        /// Tolerance on the achieved slope.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// The disconnected-critical-set example planes.
    #[command(subcommand)]
    Example(ExampleCmd),
    /// Non-critical radii forced by a neck between x and y.
    Neck {
        #[command(flatten)]
        profile: ProfileArgs,
        #[arg(long)]
        x: f64,
        #[arg(long)]
        y: f64,
        #[command(flatten)]
        band: BandArg,
    },
    /// Integrate a geodesic from the geodesic equations.
    Trace {
        #[command(flatten)]
        profile: ProfileArgs,
        #[arg(long)]
        r: f64,
        #[arg(long, allow_hyphen_values = true)]
        kappa: f64,
        #[arg(long, default_value_t = 50.0)]
        smax: f64,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Profile curve of the plane as a surface of revolution in R³.
    Embed {
        #[command(flatten)]
        profile: ProfileArgs,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum PlaneCmd {
    /// Solve the Jacobi problem for a curvature spec and write the profile CSV.
    Build {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = DEFAULT_R_MAX)]
        rmax: f64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Row spacing of the CSV.
        #[arg(long, default_value_t = 0.01)]
        step: f64,
    },
    /// Von Mangoldt flag, slope at infinity, total curvature, integrability.
    Check {
        #[command(flatten)]
        profile: ProfileArgs,
    },
}

#[derive(Subcommand)]
enum ExampleCmd {
    /// K = 1 up to a, so m'(pi/2) = 0, then a curvature drop.
    MPrimeZero {
        #[arg(long, default_value_t = 0.75 * std::f64::consts::PI)]
        a: f64,
        #[command(flatten)]
        drop: DropArgs,
        #[arg(long, default_value_t = 10.0)]
        rmax: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// A smoothed cone with a drop spliced in: m' > 0 yet the critical set splits.
    Disconnected {
        #[arg(long, default_value_t = 0.3)]
        slope: f64,
        /// Non-critical radius on the cone (default 1.5 R_m).
        #[arg(long)]
        rq: Option<f64>,
        #[command(flatten)]
        drop: DropArgs,
        #[arg(long, default_value_t = 1e-8)]
        band: f64,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args)]
struct ProfileArgs {
    /// Profile CSV (r,m,mp,K) or curvature spec JSON.
    #[arg(long)]
    profile: PathBuf,
    /// Window for spec JSON input.
    #[arg(long, default_value_t = DEFAULT_R_MAX)]
    rmax: f64,
    /// Solver tolerance.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

#[derive(Args)]
struct BandArg {
    /// Turn angles within this distance of pi count as equal to pi.
    #[arg(long, default_value_t = 1e-8)]
    band: f64,
}

#[derive(Args)]
struct DropArgs {
    #[arg(long)]
    depth: Option<f64>,
    #[arg(long)]
    width: Option<f64>,
}

impl DropArgs {
    fn or(&self, d: DropParams) -> DropParams {
        DropParams::new(self.depth.unwrap_or(d.depth), self.width.unwrap_or(d.width))
    }
}

#[derive(Args)]
struct OutArgs {
    /// Profile CSV destination.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Curvature spec JSON destination.
    #[arg(long)]
    spec_out: Option<PathBuf>,
    #[arg(long, default_value_t = 0.01)]
    step: f64,
}

impl OutArgs {
    fn write(&self, profile: &PlaneProfile) -> Result<()> {
        if let Some(path) = &self.out {
            write_csv(profile, self.step, path)?;
        }
        if let Some(path) = &self.spec_out {
            fs::write(path, serde_json::to_string_pretty(profile.spec())?)
                .with_context(|| format!("writing {}", path.display()))?;
        }
        Ok(())
    }
}

fn write_csv(profile: &PlaneProfile, step: f64, path: &Path) -> Result<()> {
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    write_profile_csv(profile, step, BufWriter::new(f))?;
    Ok(())
}

fn load_profile(a: &ProfileArgs) -> Result<PlaneProfile> {
    let is_json = a.profile.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    if is_json {
        let text = fs::read_to_string(&a.profile).with_context(|| format!("reading {}", a.profile.display()))?;
        let spec: CurvatureSpec =
            serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("malformed spec JSON: {e}")))?;
        Ok(jacobi::solve_jacobi(&spec, a.rmax, a.tol)?)
    } else {
        let f = File::open(&a.profile).with_context(|| format!("opening {}", a.profile.display()))?;
        Ok(read_profile_csv(f, a.tol.max(1e-11))?)
    }
}

fn write_svg(path: &Path, svg: String) -> Result<()> {
    fs::write(path, svg).with_context(|| format!("writing {}", path.display()))
}

fn print(v: Value) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{}", serde_json::to_string_pretty(&v)?) {
        // A closed pipe (e.g. `| head`) is not a failure of the command.
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

fn radius_json(r: &Radius) -> Value {
    serde_json::to_value(r).unwrap_or(Value::Null)
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Plane(PlaneCmd::Build { spec, rmax, tol, out, step }) => {
            let text = fs::read_to_string(&spec).with_context(|| format!("reading {}", spec.display()))?;
            let spec: CurvatureSpec =
                serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("malformed spec JSON: {e}")))?;
            let p = jacobi::solve_jacobi(&spec, rmax, tol)?;
            if let Some(path) = &out {
                write_csv(&p, step, path)?;
            }
            print(json!({ "r_max": p.r_max(), "tol": p.tol(), "diagnostics": p.diagnostics() }))
        }
        Cmd::Plane(PlaneCmd::Check { profile }) => {
            let p = load_profile(&profile)?;
            let tail = minus_two_tail(&p);
            let (_, min_outer) = p.min_m(0.5 * p.r_max(), p.r_max());
            print(json!({
                "r_max": p.r_max(),
                "von_mangoldt": p.is_von_mangoldt(),
                "first_violation": p.diagnostics().vm_first_violation,
                "nonnegative_curvature": p.diagnostics().nonnegative_curvature,
                "slope_at_infinity": jacobi::slope_at_infinity(&p, p.tol()),
                "total_curvature": jacobi::total_curvature(&p, p.tol()),
                "integrability": {
                    "m_minus2_integrable": tail.integrable,
                    "m_minus2_tail": tail,
                    "min_m_outer_half": min_outer,
                    "liminf_m_positive": min_outer > 0.0 && p.mp(p.r_max()) >= 0.0,
                },
                "diagnostics": p.diagnostics(),
            }))
        }
        Cmd::TurnAngle { profile, r, kappa, band } => {
            let p = load_profile(&profile)?;
            let launch = GeodesicLaunch::new(&p, r, kappa)?;
            let t = geodesics::turn_angle(&p, &launch, geodesics::quadrature_tol(band.band))?;
            let ray = if p.is_von_mangoldt() { Some(geodesics::compare_with_pi(&t, band.band)?) } else { None };
            print(json!({
                "r": r,
                "kappa": launch.kappa,
                "c": launch.c,
                "turn_angle": t,
                "ray": ray.map(|c| c != geodesics::Comparison::Above),
            }))
        }
        Cmd::Classify { profile, r, band } => {
            let p = load_profile(&profile)?;
            let c = analysis::classify(&p, r, band.band)?;
            let pole = analysis::is_pole(&p, r, band.band)?;
            let kh = geodesics::kappa_hat(&p, r, band.band)?;
            print(json!({
                "r": r,
                "critical": c.critical,
                "away": c.away,
                "margin": c.margin,
                "turn_angle": c.turn_angle,
                "pole": pole,
                "kappa_hat": kh,
            }))
        }
        Cmd::Radii { profile, band } => {
            let p = load_profile(&profile)?;
            let nonneg = p.diagnostics().nonnegative_curvature;
            let r_m = if nonneg { Some(analysis::critical_ball_radius(&p, band.band)?) } else { None };
            let rho = if nonneg { analysis::rho_m(&p, band.band)? } else { None };
            let r_p = analysis::pole_radius(&p, band.band)?;
            print(json!({
                "R_m": r_m.as_ref().map(radius_json),
                "rho_m": rho,
                "R_p": radius_json(&r_p),
            }))
        }
        Cmd::Scan { profile, grid, svg, jobs, band } => {
            let p = load_profile(&profile)?;
            let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build()?;
            let g = analysis::default_grid(p.r_max(), grid);
            let report = pool.install(|| analysis::scan_sets(&p, &g, band.band))?;
            if let Some(path) = &svg {
                let t: Vec<(f64, f64)> = report.samples.iter().map(|s| (s.r, s.turn_angle)).collect();
                let pi_line = [(0.0, std::f64::consts::PI), (p.r_max(), std::f64::consts::PI)];
                write_svg(path, svg_plot(&[&t, &pi_line], "turn angle T(r) of the parallel-tangent geodesic", false))?;
            }
            print(serde_json::to_value(&report)?)
        }
        Cmd::Cone { slope, tol, out } => {
            let c = constructions::build_smoothed_cone(slope, tol)?;
            out.write(&c.profile)?;
            print(json!({
                "slope": slope,
                "u": c.u,
                "epsilon": c.epsilon,
                "rho": c.rho,
                "achieved_slope": c.achieved_slope,
                "iterations": c.iterations,
                "r_max": c.profile.r_max(),
                "spec": c.profile.spec(),
            }))
        }
        Cmd::Example(ExampleCmd::MPrimeZero { a, drop, rmax, out }) => {
            let p = constructions::build_example_mprime_zero(a, drop.or(MPRIME_ZERO_DEFAULT_DROP), rmax)?;
            out.write(&p)?;
            print(json!({
                "a": a,
                "r_max": p.r_max(),
                "m_at_half_pi": p.m(std::f64::consts::FRAC_PI_2),
                "mp_at_half_pi": p.mp(std::f64::consts::FRAC_PI_2),
                "spec": p.spec(),
                "diagnostics": p.diagnostics(),
            }))
        }
        Cmd::Example(ExampleCmd::Disconnected { slope, rq, drop, band, out }) => {
            let d = constructions::build_example_disconnected_positive_mprime(
                slope,
                rq,
                drop.or(DISCONNECTED_DEFAULT_DROP),
                band,
            )?;
            out.write(&d.profile)?;
            print(json!({
                "slope": slope,
                "r_q": d.r_q,
                "splice": d.splice,
                "partial_integral": d.partial_integral,
                "r_max": d.profile.r_max(),
                "spec": d.profile.spec(),
                "diagnostics": d.profile.diagnostics(),
            }))
        }
        Cmd::Neck { profile, x, y, band } => {
            let p = load_profile(&profile)?;
            print(serde_json::to_value(analysis::neck_bound(&p, x, y, band.band)?)?)
        }
        Cmd::Trace { profile, r, kappa, smax, svg } => {
            let p = load_profile(&profile)?;
            let launch = GeodesicLaunch::new(&p, r, kappa)?;
            let tr = geodesics::trace_geodesic(&p, &launch, smax, 1e-10)?;
            if let Some(path) = &svg {
                let pts: Vec<(f64, f64)> =
                    tr.samples.iter().map(|s| (s.r * s.theta.cos(), s.r * s.theta.sin())).collect();
                write_svg(path, svg_polyline(&pts, "geodesic in polar coordinates (r, theta)", true))?;
            }
            print(json!({
                "launch": tr.launch,
                "end": tr.end,
                "s_end": tr.s_end(),
                "turning_points": tr.turning_points(),
                "speed_drift": tr.speed_drift(&p),
                "samples": tr.samples,
            }))
        }
        Cmd::Embed { profile, samples, svg } => {
            let p = load_profile(&profile)?;
            let e = embed_profile(&p, samples);
            if let (Some(path), Embedding::Curve { points }) = (&svg, &e) {
                let pts: Vec<(f64, f64)> = points.iter().map(|q| (q.x, q.z)).collect();
                write_svg(path, svg_polyline(&pts, "profile curve (x, z)", true))?;
            }
            print(serde_json::to_value(&e)?)
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::StarViolation { .. } => 3,
        Error::Domain { .. } | Error::WindowLimited(_) => 4,
        Error::Undetermined { .. } => 5,
        Error::Integration(_) => 1,
        _ => 2,
    }
}

fn error_json(e: &anyhow::Error) -> (u8, Value) {
    match e.downcast_ref::<Error>() {
        Some(err) => {
            let mut v = json!({ "error": kind(err), "message": err.to_string() });
            match err {
                Error::StarViolation { first_zero } => v["first_zero"] = json!(first_zero),
                Error::Domain { r, lo, hi } => {
                    v["r"] = json!(r);
                    v["window"] = json!([lo, hi]);
                }
                Error::Undetermined { value, abs_error } => {
                    v["value"] = json!(value);
                    v["abs_error"] = json!(abs_error);
                }
                Error::NotVonMangoldt { first_violation } => v["first_violation"] = json!(first_violation),
                _ => {}
            }
            (exit_code(err), v)
        }
        None => (2, json!({ "error": "input", "message": format!("{e:#}") })),
    }
}

fn kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidInput(_) => "invalid_input",
        Error::Domain { .. } => "domain",
        Error::StarViolation { .. } => "star_violation",
        Error::NotVonMangoldt { .. } => "not_von_mangoldt",
        Error::Undetermined { .. } => "undetermined",
        Error::ThroughOrigin => "through_origin",
        Error::WindowLimited(_) => "window_limited",
        Error::Construction(_) => "construction",
        Error::Integration(_) => "integration",
        Error::Io(_) => "io",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (code, v) = error_json(&e);
            eprintln!("{v}");
            ExitCode::from(code)
        }
    }
}
