//! One-dimensional single-particle density-matrix simulator for the
//! Gaussian collapse master equation, in units `ħ = m = 1`.
//!
//! The decoherence term damps each coherence `ρ(x, y)` at rate
//! `Γ(x − y) = λ(1 − e^{−(x−y)²/(4r_c²)})`, which heats any state at the
//! constant rate `λ/(4r_c²)`. The 3D rate is three times this per-dimension
//! value.

mod check;
mod config;
mod evolve;
mod fit;

pub use check::{
    independence_configs, relative_energy_drift, unitary_config, verify_simulator, SimulatorReport,
    SlopeMeasurement, ENERGY_TOLERANCE, HARMONIC_OMEGA, PAIRWISE_TOLERANCE, SLOPE_TOLERANCE,
    TRACE_TOLERANCE,
};
pub use config::{Grid, InitialState, Potential, SimConfig, MAX_PHASE_PER_STEP, MIN_SAMPLES};
pub use evolve::{
    analytic_heating_rate, decoherence_curvature, decoherence_rate, decoherence_superoperator,
    evolve, initial_wavefunction, momentum_leakage, DensityMatrixState, EnergySeries, SeriesSample,
    ABORT_TOLERANCE, BAND_LIMIT_LEAKAGE, BOUNDARY_WIDTHS,
};
pub use fit::{linear_fit, measure_heating_rate, HeatingFit, FLAT_TOLERANCE, MIN_R_SQUARED};
