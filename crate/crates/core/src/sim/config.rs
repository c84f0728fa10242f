use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest `dt · max|H|` accepted by [`SimConfig::validate`].
pub const MAX_PHASE_PER_STEP: f64 = 0.1;
/// Smallest number of recorded samples per run.
pub const MIN_SAMPLES: usize = 50;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Potential {
    Free,
    Harmonic {
        omega: f64,
    },
    /// One value per grid point.
    Table {
        values: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum InitialState {
    Gaussian {
        x0: f64,
        p0: f64,
        width: f64,
    },
    /// `n`-th eigenstate of the oscillator of frequency `omega`, centred at 0.
    ExcitedOscillator {
        n: usize,
        omega: f64,
    },
    /// Equal-weight superposition of two Gaussians at `±separation/2`.
    Superposition {
        separation: f64,
        width: f64,
    },
}

/// Periodic position grid `x_i = −L/2 + i·dx` and its FFT momenta.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub points: usize,
    pub length: f64,
    pub dx: f64,
    pub positions: Vec<f64>,
    pub momenta: Vec<f64>,
}

impl Grid {
    pub fn new(points: usize, length: f64) -> Self {
        let dx = length / points as f64;
        let positions = (0..points).map(|i| -0.5 * length + i as f64 * dx).collect();
        let dk = 2.0 * PI / length;
        let momenta = (0..points)
            .map(|m| {
                let m = m as i64;
                let signed = if m < points as i64 / 2 {
                    m
                } else {
                    m - points as i64
                };
                signed as f64 * dk
            })
            .collect();
        Grid {
            points,
            length,
            dx,
            positions,
            momenta,
        }
    }

    pub fn nyquist(&self) -> f64 {
        PI / self.dx
    }

    /// Periodic (minimum-image) distance between grid points `i` and `j`.
    pub fn separation(&self, i: usize, j: usize) -> f64 {
        let n = self.points;
        let d = i.abs_diff(j);
        d.min(n - d) as f64 * self.dx
    }
}

/// One run of the 1D single-particle simulator, in units `ħ = m = 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimConfig {
    pub grid_points: usize,
    pub box_length: f64,
    pub r_c: f64,
    pub lambda: f64,
    pub potential: Potential,
    pub dt: f64,
    pub t_end: f64,
    pub initial_state: InitialState,
    /// Number of recorded intervals; the series has `samples + 1` points.
    pub samples: usize,
}

impl SimConfig {
    /// Free Gaussian packet on the largest box (≤ 40) that still resolves
    /// `r_c`, with the largest admissible time step.
    pub fn new(grid_points: usize, lambda: f64, r_c: f64) -> Self {
        let box_length = (grid_points as f64 * r_c / 4.0).min(40.0);
        let mut config = SimConfig {
            grid_points,
            box_length,
            r_c,
            lambda,
            potential: Potential::Free,
            dt: 0.0,
            t_end: 1.0,
            initial_state: InitialState::Gaussian {
                x0: 0.0,
                p0: 1.0,
                width: 1.0,
            },
            samples: 100,
        };
        config.dt = config.stable_dt();
        config
    }

    pub fn with_potential(mut self, potential: Potential) -> Self {
        self.potential = potential;
        self.dt = self.stable_dt();
        self
    }

    pub fn with_initial_state(mut self, state: InitialState) -> Self {
        self.initial_state = state;
        self
    }

    pub fn with_box_length(mut self, box_length: f64) -> Self {
        self.box_length = box_length;
        self.dt = self.stable_dt();
        self
    }

    pub fn with_t_end(mut self, t_end: f64) -> Self {
        self.t_end = t_end;
        self
    }

    pub fn grid(&self) -> Grid {
        Grid::new(self.grid_points, self.box_length)
    }

    pub fn potential_values(&self, grid: &Grid) -> Vec<f64> {
        match &self.potential {
            Potential::Free => vec![0.0; grid.points],
            Potential::Harmonic { omega } => grid
                .positions
                .iter()
                .map(|x| 0.5 * omega * omega * x * x)
                .collect(),
            Potential::Table { values } => values.clone(),
        }
    }

    /// Upper bound on the spread of the Hamiltonian spectrum.
    pub fn hamiltonian_bound(&self) -> f64 {
        let grid = self.grid();
        let v = self.potential_values(&grid);
        let (lo, hi) = v
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
                (lo.min(x), hi.max(x))
            });
        let spread = if v.is_empty() { 0.0 } else { hi - lo };
        0.5 * grid.nyquist().powi(2) + spread
    }

    pub fn stable_dt(&self) -> f64 {
        MAX_PHASE_PER_STEP / self.hamiltonian_bound()
    }

    /// Number of RK4 steps; the effective step is `t_end / steps ≤ dt`.
    pub fn steps(&self) -> usize {
        let raw = (self.t_end / self.dt * (1.0 - 1e-12)).ceil() as usize;
        let raw = raw.max(self.samples);
        // a multiple of `samples` so every record falls on a step
        raw.div_ceil(self.samples) * self.samples
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Validation(msg));
        let n = self.grid_points;
        if n < 8 || !n.is_power_of_two() {
            return fail(format!("grid_points must be a power of two >= 8, got {n}"));
        }
        for (name, v) in [
            ("box_length", self.box_length),
            ("r_c", self.r_c),
            ("dt", self.dt),
            ("t_end", self.t_end),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return fail(format!("{name} must be positive, got {v}"));
            }
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return fail(format!("lambda must be non-negative, got {}", self.lambda));
        }
        let dx = self.box_length / n as f64;
        if dx > self.r_c / 4.0 {
            return fail(format!(
                "grid spacing {dx} does not resolve r_c = {} (need dx <= r_c/4)",
                self.r_c
            ));
        }
        if let Potential::Table { values } = &self.potential {
            if values.len() != n {
                return fail(format!(
                    "potential table has {} values for {n} grid points",
                    values.len()
                ));
            }
            if values.iter().any(|v| !v.is_finite()) {
                return fail("potential table contains non-finite values".into());
            }
        }
        let phase = self.dt * self.hamiltonian_bound();
        if phase > MAX_PHASE_PER_STEP * (1.0 + 1e-12) {
            return fail(format!(
                "dt = {} gives dt*max|H| = {phase:.3} > {MAX_PHASE_PER_STEP}",
                self.dt
            ));
        }
        if self.samples < MIN_SAMPLES {
            return fail(format!(
                "need at least {MIN_SAMPLES} samples, got {}",
                self.samples
            ));
        }
        match self.initial_state {
            InitialState::Gaussian { width, .. } | InitialState::Superposition { width, .. }
                if !(width > 0.0) =>
            {
                return fail(format!("packet width must be positive, got {width}"));
            }
            InitialState::ExcitedOscillator { omega, .. } if !(omega > 0.0) => {
                return fail(format!(
                    "oscillator frequency must be positive, got {omega}"
                ));
            }
            _ => {}
        }
        Ok(())
    }
}
