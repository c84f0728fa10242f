//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use collapse_heating::astro::{
    luminosity_from_magnitude, temperature_from_luminosity, Observation,
};
use collapse_heating::bounds::{
    build_exclusion_curve, builtin_scenarios, csl_lambda_crit, dp_gravitational_upper_bound,
    dp_rc_min, log_grid, RcGrid, ScenarioKind, TemperatureScenario,
};
use collapse_heating::cli::run_cli;
use collapse_heating::models::{heating_power_csl, heating_power_dp};
use collapse_heating::oracle::{
    laplacian_at_origin_csl, laplacian_at_origin_dp, DEFAULT_STEP_FRACTION,
};
use collapse_heating::sim::verify_simulator;
use collapse_heating::thermal::{equilibrium_temperature, max_heating_power};
use collapse_heating::{
    default_constants, AreaModel, CollapseParams, DpPrefactor, ModelKind, StarModel,
};

type Outcome = Result<String, String>;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn scenario(t: f64) -> TemperatureScenario {
    TemperatureScenario::new(format!("{t} K"), t, ScenarioKind::Speculative).unwrap()
}

fn within(value: f64, lo: f64, hi: f64) -> bool {
    (lo..=hi).contains(&value)
}

fn criterion_1() -> Outcome {
    let c = default_constants();
    let star = StarModel::default_star();
    let start = Instant::now();
    let params = CollapseParams::csl(1e-16, 1e-7).map_err(|e| e.to_string())?;
    let p = heating_power_csl(&params, star.n_baryons(), c).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(
        rel(p, 4.98e13) <= 0.02 && elapsed < Duration::from_millis(1),
        format!("P_heat = {p:.4e} W in {elapsed:?}"),
    )
}

fn criterion_2() -> Outcome {
    let c = default_constants();
    let star = StarModel::default_star();
    let rc = |t: f64| dp_rc_min(&scenario(t), &star, DpPrefactor::Quarter, c).unwrap();
    let hot = rc(2.8e5);
    let temps = [5.0, 3e2, 7e3, 2.2e4, 2.8e5];
    let reference = hot * 2.8e5f64.powf(4.0 / 3.0);
    let spread = temps
        .iter()
        .map(|&t| rel(rc(t) * t.powf(4.0 / 3.0), reference))
        .fold(0.0, f64::max);
    ensure(
        within(hot, 1.0e-13, 1.5e-13) && spread <= 1e-10,
        format!("r_c,min(2.8e5 K) = {hot:.4e} m, r_c,min·T^(4/3) spread {spread:.1e}"),
    )
}

fn criterion_3() -> Outcome {
    let c = default_constants();
    let star = StarModel::default_star();
    let rc =
        dp_rc_min(&scenario(5.0), &star, DpPrefactor::Quarter, c).map_err(|e| e.to_string())?;
    let upper = dp_gravitational_upper_bound();
    ensure(
        within(rc, 2.4e-7, 3.0e-7) && rc < upper,
        format!("r_c,min(5 K) = {rc:.4e} m < {upper:e} m"),
    )
}

fn criterion_4() -> Outcome {
    let c = default_constants();
    let star = StarModel::default_star();
    let crit = |t: f64| csl_lambda_crit(1e-7, &scenario(t), &star, c).unwrap();
    let ladder = [(2.8e5, 8.8e-7), (3e2, 1.2e-18), (5.0, 8.9e-26)];
    let mut ok = true;
    let mut parts = Vec::new();
    for (t, expected) in ladder {
        let v = crit(t);
        ok &= rel(v, expected) <= 0.05;
        parts.push(format!("λ_crit({t} K) = {v:.3e}"));
    }
    let ratio = 1e-16 / crit(3e2);
    ok &= within(ratio, 50.0, 200.0);
    parts.push(format!("GRW/λ_crit(300 K) = {ratio:.1}"));
    ensure(ok, parts.join(", "))
}

fn criterion_5() -> Outcome {
    let c = default_constants();
    let disk = StarModel::default_star().with_area_model(AreaModel::Disk);
    let luminosity = |m: f64| {
        let obs = Observation::from_parsecs(m, 5.0, disk.radius(), c).unwrap();
        luminosity_from_magnitude(&obs, c).unwrap()
    };
    let (l23, l28) = (luminosity(23.0), luminosity(28.0));
    let t23 = temperature_from_luminosity(l23, &disk, c).map_err(|e| e.to_string())?;
    let t28 = temperature_from_luminosity(l28, &disk, c).map_err(|e| e.to_string())?;
    ensure(
        within(l23, 4.0e18, 5.5e18)
            && within(l28, 4.0e16, 5.5e16)
            && rel(t23, 2.25e4) <= 0.1
            && rel(t28, 7.1e3) <= 0.1,
        format!("L(23) = {l23:.3e} W, L(28) = {l28:.3e} W, T = {t23:.4e} K, {t28:.4e} K"),
    )
}

fn criterion_6() -> Outcome {
    let c = default_constants();
    let m = c.neutron_mass;
    let hbar = c.hbar;
    let start = Instant::now();
    let mut worst_fd: f64 = 0.0;
    let mut worst_quad: f64 = 0.0;
    let mut worst_power: f64 = 0.0;
    for r_c in [1e-9, 1e-7, 1e-5] {
        let lambda = 1e-16;
        let gamma =
            collapse_heating::models::gamma_from_lambda(lambda, r_c).map_err(|e| e.to_string())?;
        let fd = laplacian_at_origin_csl(r_c, gamma, m, DEFAULT_STEP_FRACTION * r_c)
            .map_err(|e| e.to_string())?;
        worst_fd = worst_fd.max(rel(fd, 3.0 * lambda / (2.0 * m * m * r_c * r_c)));
        let csl = heating_power_csl(&CollapseParams::csl(lambda, r_c).unwrap(), 1.0, c).unwrap();
        worst_power = worst_power.max(rel(0.5 * hbar * hbar * m * fd, csl));

        let quad = laplacian_at_origin_dp(r_c, DpPrefactor::Quarter, c, 1e-8)
            .map_err(|e| e.to_string())?;
        let exact = c.gravitational / (8.0 * PI.sqrt() * hbar * r_c.powi(3));
        worst_quad = worst_quad.max(rel(quad / 2.0, exact));
        let dp = heating_power_dp(
            &CollapseParams::dp(r_c, DpPrefactor::Quarter).unwrap(),
            1.0,
            c,
        )
        .unwrap();
        worst_power = worst_power.max(rel(0.5 * hbar * hbar * m * quad, dp));
    }
    let elapsed = start.elapsed();
    ensure(
        worst_fd <= 1e-6 && worst_quad <= 1e-8 && worst_power <= 1e-6 && elapsed < Duration::from_secs(1),
        format!("FD {worst_fd:.1e}, quadrature {worst_quad:.1e}, power {worst_power:.1e} in {elapsed:?}"),
    )
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let (report, _) = verify_simulator(256, 0.01, 1.0).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let worst = report
        .runs
        .iter()
        .map(|r| r.relative_error)
        .fold(0.0, f64::max);
    ensure(
        worst <= 0.02
            && report.pairwise_spread <= 0.01
            && report.unitary_energy_drift <= 1e-9
            && report.max_trace_error <= 1e-10
            && elapsed < Duration::from_secs(60),
        format!(
            "slope error {worst:.1e}, pairwise {:.1e}, unitary drift {:.1e}, trace {:.1e} in {elapsed:.1?}",
            report.pairwise_spread, report.unitary_energy_drift, report.max_trace_error
        ),
    )
}

fn criterion_8() -> Outcome {
    let c = default_constants();
    let star = StarModel::default_star();
    let temps = log_grid(1.0, 1e7, 30).map_err(|e| e.to_string())?;
    let inverse = temps
        .iter()
        .map(|&t| {
            let p = max_heating_power(&star, t, c).unwrap();
            rel(equilibrium_temperature(&star, p, c).unwrap(), t)
        })
        .fold(0.0, f64::max);
    let rc = RcGrid::default().values().map_err(|e| e.to_string())?;
    let mut closure: f64 = 0.0;
    let mut samples = 0;
    for s in builtin_scenarios() {
        let curve = build_exclusion_curve(&s, &star, ModelKind::Csl, &rc, DpPrefactor::Quarter, c)
            .map_err(|e| e.to_string())?;
        let p_max = max_heating_power(&star, s.temperature, c).unwrap();
        for sample in curve.samples() {
            let params = CollapseParams::csl(sample.lambda_crit, sample.r_c).unwrap();
            closure = closure.max(rel(
                heating_power_csl(&params, star.n_baryons(), c).unwrap(),
                p_max,
            ));
            samples += 1;
        }
    }
    ensure(
        inverse <= 1e-12 && closure <= 1e-10 && samples > 0,
        format!("thermal inverse {inverse:.1e}, closure {closure:.1e} over {samples} samples"),
    )
}

fn criterion_9() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let overlays = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/overlays");
    let render = |tag: &str| -> Result<(Vec<u8>, Vec<u8>), String> {
        let svg = dir.path().join(format!("{tag}.svg"));
        let csv = dir.path().join(format!("{tag}.csv"));
        let argv = [
            "collapse-heating",
            "diagram",
            "--overlays",
            overlays.to_str().unwrap(),
            "--out",
            svg.to_str().unwrap(),
            "--csv",
            csv.to_str().unwrap(),
        ];
        let (mut out, mut err) = (Vec::new(), Vec::new());
        if run_cli(argv, &mut out, &mut err) != 0 {
            return Err(String::from_utf8_lossy(&err).into_owned());
        }
        Ok((fs::read(svg).unwrap(), fs::read(csv).unwrap()))
    };
    let first = render("a")?;
    let second = render("b")?;
    ensure(
        first == second,
        format!("svg {} bytes, csv {} bytes", first.0.len(), first.1.len()),
    )
}

fn main() -> ExitCode {
    let criteria: [(u32, fn() -> Outcome); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    let mut failed = 0;
    for (n, run) in criteria {
        match run() {
            Ok(detail) => println!("criterion {n}: PASS {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {n}: FAIL {detail}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
