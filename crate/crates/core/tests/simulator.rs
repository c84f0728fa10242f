use collapse_heating::sim::{
    analytic_heating_rate, evolve, linear_fit, measure_heating_rate, relative_energy_drift,
    InitialState, SimConfig,
};

/// Free Gaussian at rest on the widest resolving box up to 64, for a short run.
fn free_run(grid_points: usize, lambda: f64, r_c: f64) -> SimConfig {
    SimConfig::new(grid_points, lambda, r_c)
        .with_box_length((grid_points as f64 * r_c / 4.0).min(64.0))
        .with_initial_state(InitialState::Gaussian {
            x0: 0.0,
            p0: 0.0,
            width: 1.0,
        })
        .with_t_end(0.1)
}

fn slope(config: &SimConfig) -> f64 {
    measure_heating_rate(&evolve(config).unwrap())
        .unwrap()
        .slope
}

fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    linear_fit(&lx, &ly).unwrap().slope
}

#[test]
fn rate_linear_in_lambda() {
    let lambdas = [0.01, 10f64.powf(-1.5), 0.1];
    let rates: Vec<f64> = lambdas
        .iter()
        .map(|&l| slope(&free_run(256, l, 1.0)))
        .collect();
    for (l, r) in lambdas.iter().zip(&rates) {
        assert!(
            ((r - analytic_heating_rate(*l, 1.0)) / r).abs() < 1e-3,
            "{l}: {r}"
        );
    }
    let s = log_log_slope(&lambdas, &rates);
    assert!((s - 1.0).abs() < 1e-3, "{s}");
}

#[test]
fn rate_scales_as_inverse_rc_squared() {
    let rcs = [0.4, 0.4 * 10f64.sqrt(), 4.0];
    let rates: Vec<f64> = rcs
        .iter()
        .map(|&r| slope(&free_run(256, 0.01, r)))
        .collect();
    for (r_c, r) in rcs.iter().zip(&rates) {
        assert!(
            ((r - analytic_heating_rate(0.01, *r_c)) / r).abs() < 1e-3,
            "{r_c}: {r}"
        );
    }
    let s = log_log_slope(&rcs, &rates);
    assert!((s + 2.0).abs() < 1e-3, "{s}");
}

#[test]
fn rate_grid_independent() {
    let coarse = slope(&free_run(256, 0.01, 1.0).with_box_length(64.0));
    let fine = slope(&free_run(512, 0.01, 1.0).with_box_length(64.0));
    assert!(
        ((coarse - fine) / coarse).abs() <= 5e-3,
        "{coarse} vs {fine}"
    );
}

#[test]
fn moving_packet_invariants() {
    let config = free_run(256, 0.05, 1.0).with_initial_state(InitialState::Gaussian {
        x0: -2.0,
        p0: 2.0,
        width: 1.2,
    });
    let series = evolve(&config).unwrap();
    assert!(series.hermiticity_error <= 1e-10);
    for pair in series.samples.windows(2) {
        assert!(pair[1].purity <= pair[0].purity, "{pair:?}");
    }
    for s in &series.samples {
        assert!(s.trace_err <= 1e-10);
    }
    let fit = measure_heating_rate(&series).unwrap();
    assert!(fit.r_squared > 0.999);
    assert!(((fit.slope - analytic_heating_rate(0.05, 1.0)) / fit.slope).abs() < 1e-3);
}

#[test]
fn unitary_slope_is_zero() {
    let series = evolve(&free_run(128, 0.0, 1.0)).unwrap();
    let fit = measure_heating_rate(&series).unwrap();
    assert!(fit.slope.abs() < 1e-10, "{}", fit.slope);
    assert!(relative_energy_drift(&series) <= 1e-9);
    assert!(series
        .samples
        .iter()
        .all(|s| (s.purity - 1.0).abs() < 1e-10));
}
