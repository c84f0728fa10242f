use rayon::prelude::*;
use serde::Serialize;

use super::config::{InitialState, Potential, SimConfig};
use super::evolve::{analytic_heating_rate, evolve, EnergySeries};
use super::fit::{measure_heating_rate, HeatingFit};
use crate::error::Result;

/// Allowed relative deviation of each measured slope from the analytic rate.
pub const SLOPE_TOLERANCE: f64 = 0.02;
/// Allowed spread between any two measured slopes, relative to the analytic rate.
pub const PAIRWISE_TOLERANCE: f64 = 0.01;
/// Allowed relative energy drift in the unitary run.
pub const ENERGY_TOLERANCE: f64 = 1e-9;
/// Allowed `|tr ρ − 1|` in any recorded sample.
pub const TRACE_TOLERANCE: f64 = 1e-10;
/// Trap frequency of the harmonic runs.
pub const HARMONIC_OMEGA: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopeMeasurement {
    pub label: String,
    pub fit: HeatingFit,
    pub relative_error: f64,
    pub max_trace_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulatorReport {
    pub grid_points: usize,
    pub lambda: f64,
    pub r_c: f64,
    pub analytic_rate: f64,
    pub runs: Vec<SlopeMeasurement>,
    pub pairwise_spread: f64,
    pub unitary_energy_drift: f64,
    pub max_trace_error: f64,
}

impl SimulatorReport {
    pub fn slopes_pass(&self) -> bool {
        self.runs
            .iter()
            .all(|r| r.relative_error <= SLOPE_TOLERANCE)
    }

    pub fn passed(&self) -> bool {
        self.slopes_pass()
            && self.pairwise_spread <= PAIRWISE_TOLERANCE
            && self.unitary_energy_drift <= ENERGY_TOLERANCE
            && self.max_trace_error <= TRACE_TOLERANCE
    }
}

fn resolving_box(grid_points: usize, lambda: f64, r_c: f64) -> SimConfig {
    SimConfig::new(grid_points, lambda, r_c).with_box_length(grid_points as f64 * r_c / 4.0)
}

/// The three heating runs of the independence check: free Gaussian,
/// harmonic well with the second excited level, free two-packet
/// superposition. All use the widest box that still resolves `r_c`.
pub fn independence_configs(grid_points: usize, lambda: f64, r_c: f64) -> Vec<(String, SimConfig)> {
    let free = resolving_box(grid_points, lambda, r_c);
    vec![
        ("free gaussian".to_string(), free.clone()),
        (
            "harmonic n=2".to_string(),
            free.clone()
                .with_potential(Potential::Harmonic {
                    omega: HARMONIC_OMEGA,
                })
                .with_initial_state(InitialState::ExcitedOscillator {
                    n: 2,
                    omega: HARMONIC_OMEGA,
                }),
        ),
        (
            "free superposition".to_string(),
            free.with_initial_state(InitialState::Superposition {
                separation: 6.0,
                width: 1.0,
            }),
        ),
    ]
}

/// Unitary reference run: harmonic well, displaced moving packet, `λ = 0`.
pub fn unitary_config(grid_points: usize, r_c: f64) -> SimConfig {
    resolving_box(grid_points, 0.0, r_c)
        .with_potential(Potential::Harmonic {
            omega: HARMONIC_OMEGA,
        })
        .with_initial_state(InitialState::Gaussian {
            x0: 1.0,
            p0: 0.5,
            width: 0.8,
        })
}

pub fn relative_energy_drift(series: &EnergySeries) -> f64 {
    let e0 = series.samples[0].energy;
    series
        .samples
        .iter()
        .map(|s| ((s.energy - e0) / e0).abs())
        .fold(0.0, f64::max)
}

/// Runs the state, potential and unitary-limit checks in parallel.
///
/// Returns the report and the series of every run, heating runs first.
pub fn verify_simulator(
    grid_points: usize,
    lambda: f64,
    r_c: f64,
) -> Result<(SimulatorReport, Vec<(String, EnergySeries)>)> {
    let mut configs = independence_configs(grid_points, lambda, r_c);
    configs.push(("unitary".to_string(), unitary_config(grid_points, r_c)));
    let series: Vec<(String, EnergySeries)> = configs
        .into_par_iter()
        .map(|(label, config)| evolve(&config).map(|s| (label, s)))
        .collect::<Result<_>>()?;

    let analytic = analytic_heating_rate(lambda, r_c);
    let (heating, unitary) = series.split_at(series.len() - 1);
    let mut runs = Vec::with_capacity(heating.len());
    for (label, s) in heating {
        let fit = measure_heating_rate(s)?;
        runs.push(SlopeMeasurement {
            label: label.clone(),
            relative_error: ((fit.slope - analytic) / analytic).abs(),
            fit,
            max_trace_error: s.max_trace_error,
        });
    }
    let mut pairwise_spread: f64 = 0.0;
    for a in &runs {
        for b in &runs {
            pairwise_spread = pairwise_spread.max(((a.fit.slope - b.fit.slope) / analytic).abs());
        }
    }
    let report = SimulatorReport {
        grid_points,
        lambda,
        r_c,
        analytic_rate: analytic,
        pairwise_spread,
        unitary_energy_drift: relative_energy_drift(&unitary[0].1),
        max_trace_error: series
            .iter()
            .map(|(_, s)| s.max_trace_error)
            .fold(0.0, f64::max),
        runs,
    };
    Ok((report, series))
}
