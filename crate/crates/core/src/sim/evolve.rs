use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::Serialize;

use super::config::{Grid, InitialState, SimConfig};
use crate::error::{Error, Result};

/// Trace drift or anti-Hermitian part above this aborts a run.
pub const ABORT_TOLERANCE: f64 = 1e-8;
/// Fraction of initial momentum probability allowed above half the Nyquist
/// momentum.
pub const BAND_LIMIT_LEAKAGE: f64 = 1e-10;
/// Packets must stay this many standard deviations away from the wrap point.
pub const BOUNDARY_WIDTHS: f64 = 5.0;

// Rows per rayon task; keeps each task's FFT batch cache-sized.
const ROW_CHUNK: usize = 32;
// Column block of the fused stage pass.
const TILE: usize = 32;

/// Dense single-particle density matrix over the grid, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrixState {
    pub points: usize,
    pub rho: Vec<Complex64>,
    pub time: f64,
}

impl DensityMatrixState {
    pub fn pure(psi: &[Complex64]) -> Self {
        let n = psi.len();
        let mut rho = vec![Complex64::new(0.0, 0.0); n * n];
        for (i, row) in rho.chunks_mut(n).enumerate() {
            for (j, value) in row.iter_mut().enumerate() {
                *value = psi[i] * psi[j].conj();
            }
        }
        DensityMatrixState {
            points: n,
            rho,
            time: 0.0,
        }
    }

    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.rho[i * self.points + j]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.points).map(|i| self.at(i, i)).sum()
    }

    pub fn purity(&self) -> f64 {
        self.rho.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `max |ρ_ij − conj(ρ_ji)|`.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.points;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.at(i, j) - self.at(j, i).conj()).norm());
            }
        }
        worst
    }

    /// Mean and standard deviation of the position distribution.
    pub fn position_moments(&self, grid: &Grid) -> (f64, f64) {
        let diag: Vec<f64> = (0..self.points).map(|i| self.at(i, i).re).collect();
        let norm: f64 = diag.iter().sum();
        let mean = diag
            .iter()
            .zip(&grid.positions)
            .map(|(p, x)| p * x)
            .sum::<f64>()
            / norm;
        let var = diag
            .iter()
            .zip(&grid.positions)
            .map(|(p, x)| p * (x - mean).powi(2))
            .sum::<f64>()
            / norm;
        (mean, var.max(0.0).sqrt())
    }
}

/// `Γ(s) = λ(1 − e^{−s²/(4r_c²)})`, the decay rate of the coherence between
/// two points at separation `s`.
pub fn decoherence_rate(s: f64, lambda: f64, r_c: f64) -> f64 {
    -lambda * (-s * s / (4.0 * r_c * r_c)).exp_m1()
}

/// `Γ''(0) = λ/(2r_c²)`.
pub fn decoherence_curvature(lambda: f64, r_c: f64) -> f64 {
    lambda / (2.0 * r_c * r_c)
}

/// `d⟨H⟩/dt = Γ''(0)/2 = λ/(4r_c²)` in units `ħ = m = 1`.
pub fn analytic_heating_rate(lambda: f64, r_c: f64) -> f64 {
    0.5 * decoherence_curvature(lambda, r_c)
}

fn decoherence_matrix(grid: &Grid, lambda: f64, r_c: f64) -> Vec<f64> {
    let n = grid.points;
    let mut gamma = vec![0.0; n * n];
    for (i, row) in gamma.chunks_mut(n).enumerate() {
        for (j, g) in row.iter_mut().enumerate() {
            *g = decoherence_rate(grid.separation(i, j), lambda, r_c);
        }
    }
    gamma
}

/// `Γ` against the signed index offset: entry `n − 1 + (j − i)` holds the
/// rate for points `i` and `j`.
fn decoherence_band(grid: &Grid, lambda: f64, r_c: f64) -> Vec<f64> {
    let n = grid.points;
    (0..2 * n - 1)
        .map(|k| decoherence_rate(grid.separation(k % n, n - 1), lambda, r_c))
        .collect()
}

/// Decoherence contribution `−Γ(x_i − x_j)·ρ_ij` to `dρ/dt`.
pub fn decoherence_superoperator(
    state: &DensityMatrixState,
    grid: &Grid,
    lambda: f64,
    r_c: f64,
) -> Vec<Complex64> {
    let gamma = decoherence_matrix(grid, lambda, r_c);
    state.rho.iter().zip(&gamma).map(|(r, g)| -*g * r).collect()
}

fn gaussian_packet(grid: &Grid, x0: f64, p0: f64, width: f64) -> Vec<Complex64> {
    grid.positions
        .iter()
        .map(|&x| {
            let envelope = (-(x - x0).powi(2) / (4.0 * width * width)).exp();
            Complex64::from_polar(envelope, p0 * x)
        })
        .collect()
}

/// Normalized Hermite functions by the three-term recurrence.
fn oscillator_eigenstate(grid: &Grid, n: usize, omega: f64) -> Vec<Complex64> {
    grid.positions
        .iter()
        .map(|&x| {
            let xi = omega.sqrt() * x;
            let mut previous = 0.0;
            let mut current = (omega / PI).powf(0.25) * (-0.5 * xi * xi).exp();
            for k in 0..n {
                let next = (2.0 / (k as f64 + 1.0)).sqrt() * xi * current
                    - (k as f64 / (k as f64 + 1.0)).sqrt() * previous;
                previous = current;
                current = next;
            }
            Complex64::new(current, 0.0)
        })
        .collect()
}

fn normalize(psi: &mut [Complex64], dx: f64) {
    let norm = (psi.iter().map(|z| z.norm_sqr()).sum::<f64>() * dx).sqrt();
    for z in psi.iter_mut() {
        *z /= norm;
    }
}

/// Initial wave function, normalized so that `Σ|ψ_i|² = 1`.
pub fn initial_wavefunction(config: &SimConfig, grid: &Grid) -> Vec<Complex64> {
    let mut psi = match config.initial_state {
        InitialState::Gaussian { x0, p0, width } => gaussian_packet(grid, x0, p0, width),
        InitialState::ExcitedOscillator { n, omega } => oscillator_eigenstate(grid, n, omega),
        InitialState::Superposition { separation, width } => {
            let left = gaussian_packet(grid, -0.5 * separation, 0.0, width);
            let right = gaussian_packet(grid, 0.5 * separation, 0.0, width);
            left.iter().zip(&right).map(|(a, b)| a + b).collect()
        }
    };
    normalize(&mut psi, 1.0);
    psi
}

/// Probability carried by momenta above half the Nyquist momentum.
pub fn momentum_leakage(psi: &[Complex64], grid: &Grid) -> f64 {
    let mut spectrum = psi.to_vec();
    FftPlanner::new()
        .plan_fft_forward(psi.len())
        .process(&mut spectrum);
    let total: f64 = spectrum.iter().map(|z| z.norm_sqr()).sum();
    let cut = 0.5 * grid.nyquist();
    spectrum
        .iter()
        .zip(&grid.momenta)
        .filter(|(_, p)| p.abs() > cut)
        .map(|(z, _)| z.norm_sqr())
        .sum::<f64>()
        / total
}

/// Right-hand side `dρ/dt = −i[H, ρ] − Γ∘ρ` with a spectral kinetic term.
struct Liouvillian {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    kinetic: Vec<f64>,
    potential: Vec<f64>,
    /// Circulant band from [`decoherence_band`].
    gamma: Vec<f64>,
}

impl Liouvillian {
    fn new(config: &SimConfig, grid: &Grid) -> Self {
        let n = grid.points;
        let mut planner = FftPlanner::new();
        let scale = 1.0 / n as f64;
        Liouvillian {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
            // 1/n normalization of the inverse FFT folded in
            kinetic: grid.momenta.iter().map(|p| 0.5 * p * p * scale).collect(),
            potential: config.potential_values(grid),
            gamma: decoherence_band(grid, config.lambda, config.r_c),
        }
    }

    /// `work ← ρK`, row by row, with `K` the spectral kinetic operator.
    fn kinetic_product(&self, rho: &[Complex64], work: &mut [Complex64]) {
        let n = self.n;
        let scratch_len = self
            .forward
            .get_inplace_scratch_len()
            .max(self.inverse.get_inplace_scratch_len());
        work.par_chunks_mut(n * ROW_CHUNK)
            .zip(rho.par_chunks(n * ROW_CHUNK))
            .for_each_init(
                || vec![Complex64::new(0.0, 0.0); scratch_len],
                |scratch, (rows, source)| {
                    rows.copy_from_slice(source);
                    self.forward.process_with_scratch(rows, scratch);
                    for row in rows.chunks_mut(n) {
                        for (z, k) in row.iter_mut().zip(&self.kinetic) {
                            *z *= *k;
                        }
                    }
                    self.inverse.process_with_scratch(rows, scratch);
                },
            );
    }

    /// Evaluates one RK4 stage from `work = input·K` and folds the
    /// derivative into `acc`, `stage` and `rho` in the same pass.
    ///
    /// `KIND` 0 reads `rho` and starts `acc`; 1 reads `stage` and adds
    /// `2k` to `acc`; both set `stage = rho + coef·k`. `KIND` 2 reads
    /// `stage` and sets `rho += coef·(acc + k)`.
    fn stage<const KIND: u8>(
        &self,
        coef: f64,
        work: &[Complex64],
        rho: &mut [Complex64],
        stage: &mut [Complex64],
        acc: &mut [Complex64],
    ) {
        let n = self.n;
        let chunk = n * ROW_CHUNK;
        rho.par_chunks_mut(chunk)
            .zip(stage.par_chunks_mut(chunk))
            .zip(acc.par_chunks_mut(chunk))
            .enumerate()
            .for_each(|(c, ((rho, stage), acc))| {
                let rows = rho.len() / n;
                // tiles keep the transposed reads of `work` in cache
                for jb in (0..n).step_by(TILE) {
                    let je = (jb + TILE).min(n);
                    let v_tile = &self.potential[jb..je];
                    for di in 0..rows {
                        let i = c * ROW_CHUNK + di;
                        let (row, local) = (i * n, di * n);
                        let v_i = self.potential[i];
                        let w_row = &work[row + jb..row + je];
                        let g_row = &self.gamma[n - 1 - i + jb..n - 1 - i + je];
                        let rho_t = &mut rho[local + jb..local + je];
                        let stage_t = &mut stage[local + jb..local + je];
                        let acc_t = &mut acc[local + jb..local + je];
                        for t in 0..je - jb {
                            let input = if KIND == 0 { rho_t[t] } else { stage_t[t] };
                            // Kρ = (ρK)† for Hermitian ρ; [V, ρ]_ij = (V_i − V_j)ρ_ij
                            let commutator = work[(jb + t) * n + i].conj() - w_row[t]
                                + input * (v_i - v_tile[t]);
                            let k =
                                Complex64::new(commutator.im, -commutator.re) - input * g_row[t];
                            match KIND {
                                0 => {
                                    acc_t[t] = k;
                                    stage_t[t] = rho_t[t] + k * coef;
                                }
                                1 => {
                                    acc_t[t] += k * 2.0;
                                    stage_t[t] = rho_t[t] + k * coef;
                                }
                                _ => rho_t[t] += (acc_t[t] + k) * coef,
                            }
                        }
                    }
                }
            });
    }

    fn energy(&self, rho: &[Complex64], work: &mut [Complex64]) -> f64 {
        self.kinetic_product(rho, work);
        (0..self.n)
            .map(|i| work[i * self.n + i].re + rho[i * self.n + i].re * self.potential[i])
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesSample {
    pub t: f64,
    pub energy: f64,
    pub trace: f64,
    pub trace_err: f64,
    pub purity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergySeries {
    pub samples: Vec<SeriesSample>,
    pub hermiticity_error: f64,
    pub max_trace_error: f64,
}

impl EnergySeries {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,energy,trace_err,purity\n");
        for s in &self.samples {
            out.push_str(&format!(
                "{:.12e},{:.15e},{:.6e},{:.15e}\n",
                s.t, s.energy, s.trace_err, s.purity
            ));
        }
        out
    }
}

/// Integrates the master equation with fixed-step RK4 and records
/// `(t, ⟨H⟩, tr ρ, tr ρ²)` at `config.samples + 1` equally spaced times.
pub fn evolve(config: &SimConfig) -> Result<EnergySeries> {
    config.validate()?;
    let grid = config.grid();
    let psi = initial_wavefunction(config, &grid);
    let leakage = momentum_leakage(&psi, &grid);
    if leakage > BAND_LIMIT_LEAKAGE {
        return Err(Error::Validation(format!(
            "initial state not band-limited: {leakage:.2e} of its momentum probability lies above half the Nyquist momentum"
        )));
    }

    let mut state = DensityMatrixState::pure(&psi);
    let liouvillian = Liouvillian::new(config, &grid);
    let steps = config.steps();
    let stride = steps / config.samples;
    let dt = config.t_end / steps as f64;
    let zero = Complex64::new(0.0, 0.0);
    let size = grid.points * grid.points;
    let (mut work, mut stage, mut acc) = (vec![zero; size], vec![zero; size], vec![zero; size]);

    let mut series = EnergySeries {
        samples: Vec::with_capacity(config.samples + 1),
        hermiticity_error: 0.0,
        max_trace_error: 0.0,
    };

    for step in 0..=steps {
        if step % stride == 0 {
            record(&mut series, &state, &grid, &liouvillian, &mut work)?;
        }
        if step == steps {
            break;
        }
        // classic RK4; `acc` accumulates k1 + 2k2 + 2k3
        let lv = &liouvillian;
        lv.kinetic_product(&state.rho, &mut work);
        lv.stage::<0>(0.5 * dt, &work, &mut state.rho, &mut stage, &mut acc);
        lv.kinetic_product(&stage, &mut work);
        lv.stage::<1>(0.5 * dt, &work, &mut state.rho, &mut stage, &mut acc);
        lv.kinetic_product(&stage, &mut work);
        lv.stage::<1>(dt, &work, &mut state.rho, &mut stage, &mut acc);
        lv.kinetic_product(&stage, &mut work);
        lv.stage::<2>(dt / 6.0, &work, &mut state.rho, &mut stage, &mut acc);
        state.time = (step + 1) as f64 * dt;
    }
    Ok(series)
}

fn record(
    series: &mut EnergySeries,
    state: &DensityMatrixState,
    grid: &Grid,
    liouvillian: &Liouvillian,
    work: &mut [Complex64],
) -> Result<()> {
    let abort = |reason: String| Error::Simulation {
        time: state.time,
        reason,
    };
    let trace = state.trace();
    let trace_err = (trace - 1.0).norm();
    if trace_err > ABORT_TOLERANCE {
        return Err(abort(format!("trace drifted by {trace_err:.3e}")));
    }
    let hermiticity = state.hermiticity_error();
    if hermiticity > ABORT_TOLERANCE {
        return Err(abort(format!("Hermiticity violated by {hermiticity:.3e}")));
    }
    let (mean, std) = state.position_moments(grid);
    if mean.abs() + BOUNDARY_WIDTHS * std > 0.5 * grid.length {
        return Err(abort(format!(
            "state within {BOUNDARY_WIDTHS} widths of the periodic boundary (mean {mean:.3}, width {std:.3}, box {})",
            grid.length
        )));
    }
    series.hermiticity_error = series.hermiticity_error.max(hermiticity);
    series.max_trace_error = series.max_trace_error.max(trace_err);
    series.samples.push(SeriesSample {
        t: state.time,
        energy: liouvillian.energy(&state.rho, work),
        trace: trace.re,
        trace_err,
        purity: state.purity(),
    });
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::config::Potential;
    use approx::assert_relative_eq;

    /// Kinetic operator built by explicit DFT sums, independent of the FFT
    /// path used by the integrator.
    fn dense_kinetic(grid: &Grid) -> Vec<Complex64> {
        let n = grid.points;
        let mut k = vec![Complex64::new(0.0, 0.0); n * n];
        for a in 0..n {
            for b in 0..n {
                let dxab = grid.positions[a] - grid.positions[b];
                k[a * n + b] = grid
                    .momenta
                    .iter()
                    .map(|p| Complex64::from_polar(0.5 * p * p / n as f64, p * dxab))
                    .sum();
            }
        }
        k
    }

    fn dense_heating_rate(config: &SimConfig) -> f64 {
        let grid = config.grid();
        let psi = initial_wavefunction(config, &grid);
        let state = DensityMatrixState::pure(&psi);
        let d = decoherence_superoperator(&state, &grid, config.lambda, config.r_c);
        let k = dense_kinetic(&grid);
        let n = grid.points;
        // tr(K·D(ρ))
        let mut tr = Complex64::new(0.0, 0.0);
        for a in 0..n {
            for b in 0..n {
                tr += k[a * n + b] * d[b * n + a];
            }
        }
        tr.re
    }

    #[test]
    fn brute_force_rate_is_state_independent() {
        let base = SimConfig::new(128, 0.01, 1.0).with_box_length(32.0);
        let expected = analytic_heating_rate(0.01, 1.0);
        assert_eq!(expected, 2.5e-3);
        let states = [
            InitialState::Gaussian {
                x0: 0.0,
                p0: 0.0,
                width: 1.0,
            },
            InitialState::Gaussian {
                x0: 2.0,
                p0: 1.5,
                width: 0.7,
            },
            InitialState::ExcitedOscillator { n: 2, omega: 1.0 },
            InitialState::Superposition {
                separation: 6.0,
                width: 1.0,
            },
        ];
        for s in states {
            let rate = dense_heating_rate(&base.clone().with_initial_state(s.clone()));
            assert_relative_eq!(rate, expected, max_relative = 1e-8);
        }
        // r_c = 2 on the same grid
        let wide = SimConfig::new(128, 0.01, 2.0).with_box_length(32.0);
        assert_relative_eq!(
            dense_heating_rate(&wide),
            analytic_heating_rate(0.01, 2.0),
            max_relative = 1e-8
        );
    }

    #[test]
    fn decoherence_rate_limits() {
        assert_eq!(decoherence_rate(0.0, 0.01, 1.0), 0.0);
        assert_relative_eq!(
            decoherence_rate(100.0, 0.01, 1.0),
            0.01,
            max_relative = 1e-15
        );
        // Γ''(0) by central differences
        let h = 1e-3;
        let fd = 2.0 * decoherence_rate(h, 0.01, 1.0) / (h * h);
        assert_relative_eq!(fd, decoherence_curvature(0.01, 1.0), max_relative = 1e-6);
    }

    #[test]
    fn band_matches_matrix() {
        let grid = Grid::new(16, 4.0);
        let band = decoherence_band(&grid, 0.3, 0.5);
        let matrix = decoherence_matrix(&grid, 0.3, 0.5);
        for i in 0..16 {
            for j in 0..16 {
                assert_eq!(band[15 + j - i], matrix[i * 16 + j]);
            }
        }
    }

    #[test]
    fn superoperator_preserves_diagonal() {
        let config = SimConfig::new(32, 0.01, 1.0);
        let grid = config.grid();
        let psi = initial_wavefunction(&config, &grid);
        let state = DensityMatrixState::pure(&psi);
        let d = decoherence_superoperator(&state, &grid, 0.01, 1.0);
        for i in 0..32 {
            assert_eq!(d[i * 32 + i], Complex64::new(0.0, 0.0));
        }
        assert!(d.iter().any(|z| z.norm() > 0.0));
    }

    #[test]
    fn initial_states_normalized() {
        for s in [
            InitialState::Gaussian {
                x0: 1.0,
                p0: 1.0,
                width: 1.0,
            },
            InitialState::ExcitedOscillator { n: 3, omega: 1.0 },
            InitialState::Superposition {
                separation: 6.0,
                width: 1.0,
            },
        ] {
            let config = SimConfig::new(256, 0.01, 1.0).with_initial_state(s);
            let grid = config.grid();
            let psi = initial_wavefunction(&config, &grid);
            let state = DensityMatrixState::pure(&psi);
            assert_relative_eq!(state.trace().re, 1.0, max_relative = 1e-14);
            assert_relative_eq!(state.purity(), 1.0, max_relative = 1e-12);
            assert!(momentum_leakage(&psi, &grid) < BAND_LIMIT_LEAKAGE);
        }
    }

    #[test]
    fn oscillator_eigenstate_energy() {
        // ⟨H⟩ of the n-th oscillator level is n + 1/2
        let config = SimConfig::new(256, 0.0, 1.0)
            .with_potential(Potential::Harmonic { omega: 1.0 })
            .with_initial_state(InitialState::ExcitedOscillator { n: 2, omega: 1.0 });
        let grid = config.grid();
        let state = DensityMatrixState::pure(&initial_wavefunction(&config, &grid));
        let l = Liouvillian::new(&config, &grid);
        let mut work = vec![Complex64::new(0.0, 0.0); 256 * 256];
        assert_relative_eq!(l.energy(&state.rho, &mut work), 2.5, max_relative = 1e-10);
    }

    #[test]
    fn aliased_state_rejected() {
        let config = SimConfig::new(64, 0.01, 1.0).with_initial_state(InitialState::Gaussian {
            x0: 0.0,
            p0: 10.0,
            width: 1.0,
        });
        assert!(matches!(evolve(&config), Err(Error::Validation(_))));
    }

    #[test]
    fn boundary_proximity_aborts() {
        let config = SimConfig::new(64, 0.0, 1.0)
            .with_initial_state(InitialState::Gaussian {
                x0: 0.0,
                p0: 0.0,
                width: 1.0,
            })
            .with_t_end(10.0);
        assert!(matches!(evolve(&config), Err(Error::Simulation { .. })));
    }

    #[test]
    fn unitary_limit_conserves_energy() {
        let config = SimConfig::new(64, 0.0, 1.0)
            .with_potential(Potential::Harmonic { omega: 1.0 })
            .with_initial_state(InitialState::Gaussian {
                x0: 1.0,
                p0: 0.5,
                width: 0.7,
            })
            .with_t_end(10.0);
        let series = evolve(&config).unwrap();
        let e0 = series.samples[0].energy;
        for s in &series.samples {
            assert!(((s.energy - e0) / e0).abs() <= 1e-9, "{s:?}");
            assert!(s.trace_err <= 1e-10);
        }
    }

    #[test]
    fn free_heating_and_purity_loss() {
        let config = SimConfig::new(64, 0.05, 1.0).with_t_end(1.0);
        let series = evolve(&config).unwrap();
        assert_eq!(series.samples.len(), 101);
        assert!(series
            .samples
            .windows(2)
            .all(|w| w[1].purity <= w[0].purity + 1e-14));
        assert!(series.samples.last().unwrap().purity < 1.0);
        let gain = series.samples.last().unwrap().energy - series.samples[0].energy;
        assert_relative_eq!(gain, analytic_heating_rate(0.05, 1.0), max_relative = 1e-3);
        assert!(series.to_csv().starts_with("t,energy,trace_err,purity\n"));
    }
}
