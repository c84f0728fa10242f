//! CSL and Diósi–Penrose model parameters, their regularized kernels, and the
//! closed-form collapse heating power of a body made of `N` neutrons.
//!
//! Kernels are radial functions of the separation `s = |x − y|`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::error::{require_non_negative, require_positive, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Csl,
    Dp,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Csl => "CSL",
            ModelKind::Dp => "DP",
        })
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csl" => Ok(ModelKind::Csl),
            "dp" => Ok(ModelKind::Dp),
            other => Err(Error::Validation(format!(
                "unknown model '{other}' (expected csl|dp)"
            ))),
        }
    }
}

/// Numerical prefactor of the DP kernel `c·G/(ħ|x−y|)`. Both conventions
/// are in use in the literature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum DpPrefactor {
    #[default]
    Quarter,
    Eighth,
}

impl DpPrefactor {
    pub fn value(self) -> f64 {
        match self {
            DpPrefactor::Quarter => 0.25,
            DpPrefactor::Eighth => 0.125,
        }
    }

    pub fn from_value(value: f64) -> Result<Self> {
        if value == 0.25 {
            Ok(DpPrefactor::Quarter)
        } else if value == 0.125 {
            Ok(DpPrefactor::Eighth)
        } else {
            Err(Error::InvalidParameter {
                name: "dp_prefactor",
                value,
                reason: "must be 0.25 or 0.125",
            })
        }
    }

    /// Ratio to the default 1/4 convention.
    fn relative(self) -> f64 {
        self.value() / 0.25
    }
}

/// Validated parameters of one collapse model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CollapseParams {
    model: ModelKind,
    r_c: f64,
    lambda: Option<f64>,
    gamma: Option<f64>,
    dp_prefactor: Option<DpPrefactor>,
}

impl CollapseParams {
    /// CSL from the collapse rate `λ` (s⁻¹) and correlation length `r_c` (m).
    pub fn csl(lambda: f64, r_c: f64) -> Result<Self> {
        let lambda = require_positive("lambda", lambda)?;
        let r_c = require_positive("r_c", r_c)?;
        Ok(CollapseParams {
            model: ModelKind::Csl,
            r_c,
            lambda: Some(lambda),
            gamma: Some(gamma_from_lambda(lambda, r_c)?),
            dp_prefactor: None,
        })
    }

    /// CSL from the collapse strength `γ` (m³·s⁻¹).
    pub fn csl_from_gamma(gamma: f64, r_c: f64) -> Result<Self> {
        let lambda = lambda_from_gamma(gamma, r_c)?;
        Ok(CollapseParams {
            model: ModelKind::Csl,
            r_c,
            lambda: Some(lambda),
            gamma: Some(gamma),
            dp_prefactor: None,
        })
    }

    pub fn dp(r_c: f64, prefactor: DpPrefactor) -> Result<Self> {
        let r_c = require_positive("r_c", r_c)?;
        Ok(CollapseParams {
            model: ModelKind::Dp,
            r_c,
            lambda: None,
            gamma: None,
            dp_prefactor: Some(prefactor),
        })
    }

    pub fn model(&self) -> ModelKind {
        self.model
    }

    pub fn r_c(&self) -> f64 {
        self.r_c
    }

    pub fn lambda(&self) -> Option<f64> {
        self.lambda
    }

    pub fn gamma(&self) -> Option<f64> {
        self.gamma
    }

    pub fn dp_prefactor(&self) -> Option<DpPrefactor> {
        self.dp_prefactor
    }

    fn expect(&self, model: ModelKind) -> Result<()> {
        if self.model == model {
            Ok(())
        } else {
            Err(Error::WrongModel {
                expected: model,
                found: self.model,
            })
        }
    }
}

/// `(4π r_c²)^{3/2}`, the volume relating CSL strength and rate.
fn csl_volume(r_c: f64) -> f64 {
    (4.0 * PI * r_c * r_c).powf(1.5)
}

/// `λ = γ / (4π r_c²)^{3/2}`.
pub fn lambda_from_gamma(gamma: f64, r_c: f64) -> Result<f64> {
    let gamma = require_positive("gamma", gamma)?;
    let r_c = require_positive("r_c", r_c)?;
    Ok(gamma / csl_volume(r_c))
}

/// `γ = λ (4π r_c²)^{3/2}`.
pub fn gamma_from_lambda(lambda: f64, r_c: f64) -> Result<f64> {
    let lambda = require_positive("lambda", lambda)?;
    let r_c = require_positive("r_c", r_c)?;
    Ok(lambda * csl_volume(r_c))
}

/// CSL heating power `3λħ²N / (4 r_c² m_n)` in watts.
pub fn heating_power_csl(
    params: &CollapseParams,
    n_baryons: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    params.expect(ModelKind::Csl)?;
    let n = require_non_negative("n_baryons", n_baryons)?;
    let lambda = params.lambda.expect("CSL params carry lambda");
    let hbar = constants.hbar;
    let r_c = params.r_c;
    Ok(3.0 * lambda * hbar * hbar * n / (4.0 * r_c * r_c * constants.neutron_mass))
}

/// DP heating power `G ħ m_n N / (8√π r_c³)` for the 1/4 prefactor, scaled
/// linearly for the 1/8 convention.
pub fn heating_power_dp(
    params: &CollapseParams,
    n_baryons: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    params.expect(ModelKind::Dp)?;
    let n = require_non_negative("n_baryons", n_baryons)?;
    let prefactor = params.dp_prefactor.expect("DP params carry a prefactor");
    Ok(
        prefactor.relative()
            * constants.gravitational
            * constants.hbar
            * constants.neutron_mass
            * n
            / (8.0 * PI.sqrt() * params.r_c.powi(3)),
    )
}

pub fn heating_power(
    params: &CollapseParams,
    n_baryons: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    match params.model {
        ModelKind::Csl => heating_power_csl(params, n_baryons, constants),
        ModelKind::Dp => heating_power_dp(params, n_baryons, constants),
    }
}

/// Normalized Gaussian regulator `g_r(s) = e^{−s²/(2r²)} / (2π r²)^{3/2}`.
pub fn regulator(s: f64, r_c: f64) -> f64 {
    (-s * s / (2.0 * r_c * r_c)).exp() / (2.0 * PI * r_c * r_c).powf(1.5)
}

/// `f^CSL_{r_c}(s) = γ/(2m²) · (g_{r_c} * g_{r_c})(s)
///                 = γ / (2m² (4π r_c²)^{3/2}) · e^{−s²/(4 r_c²)}`.
pub fn kernel_csl_regularized(s: f64, r_c: f64, gamma: f64, m: f64) -> f64 {
    gamma / (2.0 * m * m * csl_volume(r_c)) * (-s * s / (4.0 * r_c * r_c)).exp()
}

/// Real-space DP regularized kernel `c·(G/ħ)·erf(s/(2r_c))/s`, with the
/// finite limit `c·(G/ħ)/(r_c√π)` at `s = 0`.
pub fn kernel_dp_regularized(
    s: f64,
    r_c: f64,
    prefactor: DpPrefactor,
    constants: &PhysicalConstants,
) -> f64 {
    let coupling = prefactor.value() * constants.gravitational / constants.hbar;
    let u = s.abs() / (2.0 * r_c);
    // erf(u)/u by its Taylor series near the origin, where erf(u)/s cancels
    let erf_over_u = if u < 1e-3 {
        let u2 = u * u;
        2.0 / PI.sqrt() * (1.0 - u2 / 3.0 + u2 * u2 / 10.0 - u2 * u2 * u2 / 42.0)
    } else {
        libm::erf(u) / u
    };
    coupling * erf_over_u / (2.0 * r_c)
}

/// What the DP Fourier-space integrand represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FourierMode {
    /// Spectral density of `f^DP_{r_c}` itself, `4π c(G/ħ) e^{−k²r_c²}/k²`.
    Kernel,
    /// Spectral density of `−∇² f^DP_{r_c}`; the `k²` cancels the pole.
    Laplacian,
}

/// DP regularized kernel in Fourier space at wavenumber `k` (m⁻¹).
///
/// Integrating `∫ d³k/(2π)³` of this gives the kernel (or its negative
/// Laplacian) at the origin.
pub fn kernel_dp_fourier_integrand(
    k: f64,
    r_c: f64,
    prefactor: DpPrefactor,
    constants: &PhysicalConstants,
    mode: FourierMode,
) -> f64 {
    let coupling = 4.0 * PI * prefactor.value() * constants.gravitational / constants.hbar;
    let cutoff = (-(k * r_c).powi(2)).exp();
    match mode {
        FourierMode::Kernel => coupling * cutoff / (k * k),
        FourierMode::Laplacian => coupling * cutoff,
    }
}

/// A regularized kernel ready for evaluation at separations `s ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelSpec {
    Csl {
        r_c: f64,
        gamma: f64,
        mass: f64,
    },
    Dp {
        r_c: f64,
        prefactor: DpPrefactor,
        constants: PhysicalConstants,
    },
}

impl KernelSpec {
    pub fn for_params(params: &CollapseParams, constants: &PhysicalConstants) -> Self {
        match params.model {
            ModelKind::Csl => KernelSpec::Csl {
                r_c: params.r_c,
                gamma: params.gamma.expect("CSL params carry gamma"),
                mass: constants.neutron_mass,
            },
            ModelKind::Dp => KernelSpec::Dp {
                r_c: params.r_c,
                prefactor: params.dp_prefactor.expect("DP params carry a prefactor"),
                constants: *constants,
            },
        }
    }

    pub fn model(&self) -> ModelKind {
        match self {
            KernelSpec::Csl { .. } => ModelKind::Csl,
            KernelSpec::Dp { .. } => ModelKind::Dp,
        }
    }

    pub fn r_c(&self) -> f64 {
        match *self {
            KernelSpec::Csl { r_c, .. } | KernelSpec::Dp { r_c, .. } => r_c,
        }
    }

    pub fn eval(&self, s: f64) -> f64 {
        match *self {
            KernelSpec::Csl { r_c, gamma, mass } => {
                kernel_csl_regularized(s.abs(), r_c, gamma, mass)
            }
            KernelSpec::Dp {
                r_c,
                prefactor,
                ref constants,
            } => kernel_dp_regularized(s, r_c, prefactor, constants),
        }
    }

    /// Closed form of `−2∇²f_{r_c}(0)`: `3λ/(2m²r_c²)` for CSL and
    /// `2·(c/¼)·G/(8√π ħ r_c³)` for DP.
    pub fn laplacian_coefficient(&self) -> f64 {
        match *self {
            KernelSpec::Csl { r_c, gamma, mass } => {
                let lambda = gamma / csl_volume(r_c);
                3.0 * lambda / (2.0 * mass * mass * r_c * r_c)
            }
            KernelSpec::Dp {
                r_c,
                prefactor,
                ref constants,
            } => {
                2.0 * prefactor.relative() * constants.gravitational
                    / (8.0 * PI.sqrt() * constants.hbar * r_c.powi(3))
            }
        }
    }
}
