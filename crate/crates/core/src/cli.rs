//! Command-line front end. Every subcommand prints one JSON document.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::astro::{
    luminosity_from_magnitude, temperature_from_luminosity, Observation, BOLOMETRIC_ASSUMPTION,
};
use crate::bounds::{
    build_exclusion_curve, builtin_scenarios, dp_gravitational_upper_bound, load_scenarios, RcGrid,
    ScenarioKind, TemperatureScenario,
};
use crate::constants::{ConstantsProfile, PhysicalConstants};
use crate::diagram::{grw_marker, load_markers, load_overlays, render_diagram, DiagramSpec};
use crate::error::{Error, Result};
use crate::models::{heating_power, CollapseParams, DpPrefactor, ModelKind};
use crate::oracle::verify_heating_coefficients;
use crate::sim::{verify_simulator, PAIRWISE_TOLERANCE, SLOPE_TOLERANCE};
use crate::thermal::{equilibrium_temperature, AreaModel, StarModel};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_VERIFICATION_FAILED: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "collapse-heating",
    version,
    about = "Collapse-model heating of neutron stars"
)]
struct Cli {
    /// Physical constants profile.
    #[arg(long, global = true, default_value = "codata")]
    constants: ConstantsProfile,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Heating power injected into the star.
    Heat(ModelArgs),
    /// Heating power and the equilibrium surface temperature it sustains.
    Equilibrium(ModelArgs),
    /// Exclusion bound implied by a surface temperature.
    Bound(BoundArgs),
    /// Render the (r_c, lambda) exclusion diagram as SVG and CSV.
    Diagram(DiagramArgs),
    /// Luminosity and temperature from an apparent magnitude.
    Observe(ObserveArgs),
    /// Run the numerical self-checks.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Csl,
    Dp,
}

impl From<ModelArg> for ModelKind {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Csl => ModelKind::Csl,
            ModelArg::Dp => ModelKind::Dp,
        }
    }
}

#[derive(Debug, Args)]
struct StarArgs {
    /// `default` or a star JSON file.
    #[arg(long, default_value = "default")]
    star: String,
    /// DP kernel prefactor.
    #[arg(long = "dp-prefactor", default_value_t = 0.25)]
    dp_prefactor: f64,
}

#[derive(Debug, Args)]
struct ModelArgs {
    #[arg(long, value_enum)]
    model: ModelArg,
    /// CSL collapse rate (1/s).
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    /// Correlation length (m).
    #[arg(long, allow_negative_numbers = true)]
    rc: f64,
    #[command(flatten)]
    star: StarArgs,
}

#[derive(Debug, Args)]
struct BoundArgs {
    #[arg(value_enum)]
    model: ModelArg,
    /// Surface temperature (K).
    #[arg(long, allow_negative_numbers = true)]
    temperature: f64,
    /// Log-spaced r_c grid `min:max:N` (m).
    #[arg(long = "rc-grid")]
    rc_grid: Option<RcGrid>,
    #[command(flatten)]
    star: StarArgs,
}

#[derive(Debug, Args)]
struct DiagramArgs {
    /// Scenario JSON; the built-in set when omitted.
    #[arg(long)]
    scenarios: Option<PathBuf>,
    /// Directory of overlay CSV files with JSON sidecars.
    #[arg(long)]
    overlays: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    csv: PathBuf,
    /// Marker JSON; the GRW point when omitted.
    #[arg(long)]
    markers: Option<PathBuf>,
    #[arg(long = "rc-grid")]
    rc_grid: Option<RcGrid>,
    #[arg(long, default_value = "default")]
    star: String,
}

#[derive(Debug, Args)]
struct ObserveArgs {
    /// Apparent (bolometric) magnitude.
    #[arg(long, allow_negative_numbers = true)]
    magnitude: f64,
    #[arg(long = "distance-pc", allow_negative_numbers = true)]
    distance_pc: f64,
    #[arg(long = "radius-km", allow_negative_numbers = true)]
    radius_km: f64,
    #[arg(long, default_value = "full_sphere")]
    area: AreaModel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VerifyTarget {
    Kernels,
    Simulator,
    All,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(value_enum, default_value = "all")]
    target: VerifyTarget,
    /// Simulator grid points.
    #[arg(long, default_value_t = 256)]
    grid: usize,
    /// Simulator collapse rate (natural units).
    #[arg(long, default_value_t = 0.01, allow_negative_numbers = true)]
    lambda: f64,
    /// Simulator correlation length (natural units).
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    rc: f64,
    /// Write the free-Gaussian energy series as CSV.
    #[arg(long)]
    dump: Option<PathBuf>,
}

fn load_star(spec: &str, constants: &PhysicalConstants) -> Result<StarModel> {
    if spec == "default" {
        Ok(StarModel::default_star())
    } else {
        StarModel::load(spec.as_ref(), constants)
    }
}

fn star_json(star: &StarModel) -> Value {
    json!({
        "name": star.name(),
        "mass_kg": star.mass(),
        "radius_m": star.radius(),
        "n_baryons": star.n_baryons(),
        "emissivity": star.emissivity(),
        "area_model": star.area_model().as_str(),
    })
}

fn model_params(args: &ModelArgs) -> Result<CollapseParams> {
    match args.model {
        ModelArg::Csl => {
            let lambda = args.lambda.ok_or_else(|| {
                Error::Validation("--lambda is required for the CSL model".into())
            })?;
            CollapseParams::csl(lambda, args.rc)
        }
        ModelArg::Dp => {
            if args.lambda.is_some() {
                return Err(Error::Validation(
                    "--lambda does not apply to the DP model (its strength is fixed by G)".into(),
                ));
            }
            CollapseParams::dp(args.rc, DpPrefactor::from_value(args.star.dp_prefactor)?)
        }
    }
}

fn heat(args: &ModelArgs, constants: &PhysicalConstants, with_temperature: bool) -> Result<Value> {
    let params = model_params(args)?;
    let star = load_star(&args.star.star, constants)?;
    let power = heating_power(&params, star.n_baryons(), constants)?;
    let mut out = json!({
        "model": params.model().to_string(),
        "rc_m": params.r_c(),
        "P_heat_W": power,
        "star": star_json(&star),
    });
    if let Some(lambda) = params.lambda() {
        out["lambda_per_s"] = json!(lambda);
    }
    if let Some(prefactor) = params.dp_prefactor() {
        out["dp_prefactor"] = json!(prefactor.value());
    }
    if with_temperature {
        out["T_eq_K"] = json!(equilibrium_temperature(&star, power, constants)?);
    }
    Ok(out)
}

fn bound(args: &BoundArgs, constants: &PhysicalConstants) -> Result<Value> {
    let star = load_star(&args.star.star, constants)?;
    let prefactor = DpPrefactor::from_value(args.star.dp_prefactor)?;
    let scenario = TemperatureScenario::new(
        format!("T = {} K", args.temperature),
        args.temperature,
        ScenarioKind::Observed,
    )?;
    let grid = args.rc_grid.unwrap_or_default().values()?;
    let curve = build_exclusion_curve(
        &scenario,
        &star,
        args.model.into(),
        &grid,
        prefactor,
        constants,
    )?;
    let mut out = json!({
        "model": curve.model.to_string(),
        "temperature_K": args.temperature,
        "star": star_json(&star),
    });
    match curve.rc_min() {
        Some(rc_min) => {
            let upper = dp_gravitational_upper_bound();
            out["dp_prefactor"] = json!(prefactor.value());
            out["rc_min_m"] = json!(rc_min);
            out["rc_upper_bound_m"] = json!(upper);
            out["window_open"] = json!(rc_min < upper);
        }
        None => out["samples"] = serde_json::to_value(curve.samples())?,
    }
    Ok(out)
}

fn diagram(args: &DiagramArgs, constants: &PhysicalConstants) -> Result<Value> {
    let star = load_star(&args.star, constants)?;
    let scenarios = match &args.scenarios {
        Some(path) => load_scenarios(path)?,
        None => builtin_scenarios(),
    };
    let grid = args.rc_grid.unwrap_or_default();
    let rc = grid.values()?;
    let curves = scenarios
        .iter()
        .map(|s| {
            build_exclusion_curve(
                s,
                &star,
                ModelKind::Csl,
                &rc,
                DpPrefactor::default(),
                constants,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let mut spec = DiagramSpec::new(curves);
    spec.rc_range = (grid.min, grid.max);
    if let Some(dir) = &args.overlays {
        spec.overlays = load_overlays(dir)?;
    }
    spec.markers = match &args.markers {
        Some(path) => load_markers(path)?,
        None => vec![grw_marker()],
    };
    let rendered = render_diagram(&spec)?;
    fs::write(&args.out, &rendered.svg)?;
    fs::write(&args.csv, &rendered.csv)?;
    Ok(json!({
        "svg": args.out.display().to_string(),
        "csv": args.csv.display().to_string(),
        "curves": spec.curves.len(),
        "overlays": spec.overlays.len(),
        "markers": spec.markers.len(),
        "rc_range_m": [spec.rc_range.0, spec.rc_range.1],
        "lambda_range_per_s": [spec.lambda_range.0, spec.lambda_range.1],
    }))
}

fn observe(args: &ObserveArgs, constants: &PhysicalConstants) -> Result<Value> {
    let radius = args.radius_km * 1e3;
    let obs = Observation::from_parsecs(args.magnitude, args.distance_pc, radius, constants)?;
    let star = StarModel::default_star()
        .with_radius(radius)?
        .with_area_model(args.area);
    let luminosity = luminosity_from_magnitude(&obs, constants)?;
    let temperature = temperature_from_luminosity(luminosity, &star, constants)?;
    let area_note = match args.area {
        AreaModel::FullSphere => "emitting area 4*pi*R^2 (whole surface)",
        AreaModel::Disk => "emitting area pi*R^2 (projected disk)",
    };
    Ok(json!({
        "luminosity_W": luminosity,
        "temperature_K": temperature,
        "distance_m": obs.distance,
        "radius_m": radius,
        "assumptions": [BOLOMETRIC_ASSUMPTION, area_note, "emissivity 1"],
    }))
}

fn verify(args: &VerifyArgs, constants: &PhysicalConstants) -> Result<(Value, bool)> {
    let mut out = json!({});
    let mut passed = true;
    if matches!(args.target, VerifyTarget::Kernels | VerifyTarget::All) {
        let reports = verify_heating_coefficients(constants)?;
        let ok = reports.iter().all(|r| r.passed());
        passed &= ok;
        out["kernels"] = json!({ "passed": ok, "checks": reports });
    }
    if matches!(args.target, VerifyTarget::Simulator | VerifyTarget::All) {
        let (report, series) = verify_simulator(args.grid, args.lambda, args.rc)?;
        if let Some(path) = &args.dump {
            fs::write(path, series[0].1.to_csv())?;
        }
        let ok = report.passed();
        passed &= ok;
        // simulator quantities are in units hbar = m = 1
        let runs: Vec<Value> = report
            .runs
            .iter()
            .map(|r| {
                json!({
                    "label": r.label,
                    "slope_natural": r.fit.slope,
                    "slope_std_error_natural": r.fit.std_error,
                    "r_squared": r.fit.r_squared,
                    "relative_error": r.relative_error,
                })
            })
            .collect();
        out["simulator"] = json!({
            "passed": ok,
            "grid_points": report.grid_points,
            "lambda_natural": report.lambda,
            "rc_natural": report.r_c,
            "analytic_slope_natural": report.analytic_rate,
            "slope_tolerance": SLOPE_TOLERANCE,
            "runs": runs,
            "pairwise_spread": report.pairwise_spread,
            "pairwise_tolerance": PAIRWISE_TOLERANCE,
            "unitary_energy_drift": report.unitary_energy_drift,
            "max_trace_error": report.max_trace_error,
        });
    }
    out["passed"] = json!(passed);
    Ok((out, passed))
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code.
pub fn run_cli<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_INVALID
                }
            };
        }
    };
    let constants = cli.constants.constants();
    let result = match &cli.command {
        Command::Heat(a) => heat(a, constants, false).map(|v| (v, true)),
        Command::Equilibrium(a) => heat(a, constants, true).map(|v| (v, true)),
        Command::Bound(a) => bound(a, constants).map(|v| (v, true)),
        Command::Diagram(a) => diagram(a, constants).map(|v| (v, true)),
        Command::Observe(a) => observe(a, constants).map(|v| (v, true)),
        Command::Verify(a) => verify(a, constants),
    };
    match result {
        Ok((value, passed)) => {
            let text = serde_json::to_string_pretty(&value).expect("JSON values serialize");
            let _ = writeln!(out, "{text}");
            if passed {
                EXIT_OK
            } else {
                let _ = writeln!(err, "error: verification failed");
                EXIT_VERIFICATION_FAILED
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INVALID
        }
    }
}
