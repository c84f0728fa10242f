//! Numerical checks of the Laplacian-at-origin coefficient `−2∇²f_{r_c}(0)`
//! that fixes the collapse heating power per particle,
//! `P = (ħ²/2)·m·(−2∇²f_{r_c}(0))`.
//!
//! Two independent routes per model: central finite differences on the
//! real-space radial kernel, and adaptive quadrature of its Fourier
//! representation. Neither route uses the closed forms in [`crate::models`]
//! except as the value being checked.

use std::f64::consts::PI;

use serde::Serialize;

use crate::constants::PhysicalConstants;
use crate::error::{require_positive, Error, Result};
use crate::models::{
    heating_power, kernel_dp_fourier_integrand, CollapseParams, DpPrefactor, FourierMode,
    KernelSpec, ModelKind,
};
use crate::quadrature::Quadrature;

pub const FINITE_DIFFERENCE_TOLERANCE: f64 = 1e-6;
pub const QUADRATURE_TOLERANCE: f64 = 1e-8;
/// Finite-difference step as a fraction of `r_c`.
pub const DEFAULT_STEP_FRACTION: f64 = 1e-3;
/// Correlation lengths (m) covered by [`verify_heating_coefficients`].
pub const TEST_RC_VALUES: [f64; 3] = [1e-9, 1e-7, 1e-5];
/// CSL rate (s⁻¹) used by [`verify_heating_coefficients`].
pub const TEST_LAMBDA: f64 = 1e-16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleMethod {
    FiniteDifference,
    FourierQuadrature,
}

impl OracleMethod {
    pub fn tolerance(self) -> f64 {
        match self {
            OracleMethod::FiniteDifference => FINITE_DIFFERENCE_TOLERANCE,
            OracleMethod::FourierQuadrature => QUADRATURE_TOLERANCE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleReport {
    pub model: ModelKind,
    pub method: OracleMethod,
    #[serde(rename = "rc_m")]
    pub r_c: f64,
    /// Closed-form `−2∇²f(0)` (kg⁻²·m⁻²·s⁻¹).
    #[serde(rename = "analytic_per_kg2_m2_s")]
    pub analytic_value: f64,
    #[serde(rename = "numeric_per_kg2_m2_s")]
    pub numeric_value: f64,
    pub relative_error: f64,
    /// Heating power per neutron from the closed-form heating law.
    #[serde(rename = "power_per_particle_closed_form_W")]
    pub power_closed_form: f64,
    /// `(ħ²/2)·m·numeric_value`.
    #[serde(rename = "power_per_particle_oracle_W")]
    pub power_oracle: f64,
    pub power_relative_error: f64,
    pub tolerance: f64,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.relative_error <= self.tolerance && self.power_relative_error <= self.tolerance
    }
}

fn relative_error(numeric: f64, analytic: f64) -> f64 {
    if analytic == 0.0 {
        numeric.abs()
    } else {
        ((numeric - analytic) / analytic).abs()
    }
}

/// `−2∇²f(0)` of an isotropic kernel by central differences on `3·f''(0)`.
pub fn laplacian_fd(kernel: &KernelSpec, step: f64) -> Result<f64> {
    let r_c = kernel.r_c();
    let step = require_positive("step", step)?;
    if step >= r_c / 10.0 {
        return Err(Error::InvalidParameter {
            name: "step",
            value: step,
            reason: "must be below r_c/10 for a resolved finite difference",
        });
    }
    let second = (kernel.eval(step) - 2.0 * kernel.eval(0.0) + kernel.eval(-step)) / (step * step);
    Ok(-2.0 * 3.0 * second)
}

/// Central-difference radial gradient at the origin. Vanishes for any
/// isotropic kernel.
pub fn gradient_at_origin(kernel: &KernelSpec, step: f64) -> f64 {
    (kernel.eval(step) - kernel.eval(-step)) / (2.0 * step)
}

/// `−2∇²f(0) = 2·∫ d³k/(2π)³ k² f̂(k)`, done as a radial integral.
pub fn laplacian_fourier(kernel: &KernelSpec, rel_tol: f64) -> Result<f64> {
    let rel_tol = require_positive("quadrature_tol", rel_tol)?;
    let r_c = kernel.r_c();
    let spectral: Box<dyn Fn(f64) -> f64> = match *kernel {
        KernelSpec::Csl { r_c, gamma, mass } => {
            // f̂(k) = γ/(2m²)·e^{−k²r_c²}, the Gaussian regulator squared
            let amplitude = gamma / (2.0 * mass * mass);
            Box::new(move |k: f64| k * k * amplitude * (-(k * r_c).powi(2)).exp())
        }
        KernelSpec::Dp {
            r_c,
            prefactor,
            constants,
        } => Box::new(move |k: f64| {
            kernel_dp_fourier_integrand(k, r_c, prefactor, &constants, FourierMode::Laplacian)
        }),
    };
    let quadrature = Quadrature::with_rel_tol(rel_tol * 1e-2);
    let result = quadrature.integrate_to_infinity(|k| k * k * spectral(k), 0.0, 1.0 / r_c)?;
    if result.abs_error > rel_tol * result.value.abs() {
        return Err(Error::QuadratureNotConverged {
            achieved: result.abs_error / result.value.abs(),
            requested: rel_tol,
        });
    }
    Ok(2.0 * result.value / (2.0 * PI * PI))
}

/// CSL coefficient by finite differences of the Gaussian-convolved kernel.
pub fn laplacian_at_origin_csl(r_c: f64, gamma: f64, m: f64, step: f64) -> Result<f64> {
    let kernel = KernelSpec::Csl {
        r_c: require_positive("r_c", r_c)?,
        gamma: require_positive("gamma", gamma)?,
        mass: require_positive("m", m)?,
    };
    laplacian_fd(&kernel, step)
}

/// DP coefficient by quadrature of `4π c(G/ħ) ∫ d³k/(2π)³ e^{−k²r_c²}`.
pub fn laplacian_at_origin_dp(
    r_c: f64,
    prefactor: DpPrefactor,
    constants: &PhysicalConstants,
    quadrature_tol: f64,
) -> Result<f64> {
    let kernel = KernelSpec::Dp {
        r_c: require_positive("r_c", r_c)?,
        prefactor,
        constants: *constants,
    };
    laplacian_fourier(&kernel, quadrature_tol)
}

/// Checks one parameter set by one method against the closed forms.
pub fn check(
    params: &CollapseParams,
    method: OracleMethod,
    constants: &PhysicalConstants,
) -> Result<OracleReport> {
    let kernel = KernelSpec::for_params(params, constants);
    let numeric = match method {
        OracleMethod::FiniteDifference => {
            laplacian_fd(&kernel, params.r_c() * DEFAULT_STEP_FRACTION)?
        }
        OracleMethod::FourierQuadrature => laplacian_fourier(&kernel, QUADRATURE_TOLERANCE)?,
    };
    let analytic = kernel.laplacian_coefficient();
    let hbar = constants.hbar;
    let power_oracle = 0.5 * hbar * hbar * constants.neutron_mass * numeric;
    let power_closed_form = heating_power(params, 1.0, constants)?;
    Ok(OracleReport {
        model: params.model(),
        method,
        r_c: params.r_c(),
        analytic_value: analytic,
        numeric_value: numeric,
        relative_error: relative_error(numeric, analytic),
        power_closed_form,
        power_oracle,
        power_relative_error: relative_error(power_oracle, power_closed_form),
        tolerance: method.tolerance(),
    })
}

/// Every model × method × r_c in the fixed test set.
pub fn verify_heating_coefficients(constants: &PhysicalConstants) -> Result<Vec<OracleReport>> {
    let mut reports = Vec::new();
    for &r_c in &TEST_RC_VALUES {
        let sets = [
            CollapseParams::csl(TEST_LAMBDA, r_c)?,
            CollapseParams::dp(r_c, DpPrefactor::Quarter)?,
        ];
        for params in &sets {
            for method in [
                OracleMethod::FiniteDifference,
                OracleMethod::FourierQuadrature,
            ] {
                reports.push(check(params, method, constants)?);
            }
        }
    }
    Ok(reports)
}

/// `(g_r * g_r)(s)` by direct quadrature of the 3D convolution reduced to
/// radial form:
/// `(2π/s) ∫₀^∞ ρ g(ρ) ∫_{|s−ρ|}^{s+ρ} t g(t) dt dρ`, or
/// `4π ∫ ρ² g(ρ)² dρ` at `s = 0`.
pub fn gaussian_self_convolution(s: f64, r: f64, rel_tol: f64) -> Result<f64> {
    let g = |x: f64| crate::models::regulator(x, r);
    let quad = Quadrature::with_rel_tol(rel_tol);
    if s == 0.0 {
        let v = quad.integrate_to_infinity(|rho| rho * rho * g(rho) * g(rho), 0.0, r)?;
        return Ok(4.0 * PI * v.value);
    }
    let inner_quad = Quadrature::with_rel_tol(rel_tol * 1e-2);
    let outer = |rho: f64| -> f64 {
        let inner = inner_quad
            .integrate(|t| t * g(t), (s - rho).abs(), s + rho)
            .map(|q| q.value)
            .unwrap_or(f64::NAN);
        rho * g(rho) * inner
    };
    let v = quad.integrate_to_infinity(outer, 0.0, r)?;
    if !v.value.is_finite() {
        return Err(Error::QuadratureNotConverged {
            achieved: f64::INFINITY,
            requested: rel_tol,
        });
    }
    Ok(2.0 * PI / s * v.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::CODATA;
    use crate::models::{gamma_from_lambda, regulator};
    use approx::assert_relative_eq;

    #[test]
    fn csl_fd_matches_closed_form() {
        let m = CODATA.neutron_mass;
        let gamma = gamma_from_lambda(1e-16, 1e-7).unwrap();
        let value = laplacian_at_origin_csl(1e-7, gamma, m, 1e-10).unwrap();
        let exact = 3.0 * 1e-16 / (2.0 * m * m * 1e-14);
        assert!(relative_error(value, exact) <= 1e-6);
    }

    #[test]
    fn csl_fd_second_order() {
        let m = CODATA.neutron_mass;
        let gamma = gamma_from_lambda(1e-16, 1e-7).unwrap();
        let exact = 3.0 * 1e-16 / (2.0 * m * m * 1e-14);
        let e1 = relative_error(
            laplacian_at_origin_csl(1e-7, gamma, m, 1e-9).unwrap(),
            exact,
        );
        let e2 = relative_error(
            laplacian_at_origin_csl(1e-7, gamma, m, 5e-10).unwrap(),
            exact,
        );
        let ratio = e1 / e2;
        assert!((3.8..4.2).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn csl_fd_scaling_and_step_guard() {
        let m = CODATA.neutron_mass;
        let at = |r_c: f64| {
            let gamma = gamma_from_lambda(1e-16, r_c).unwrap();
            laplacian_at_origin_csl(r_c, gamma, m, r_c * 1e-3).unwrap()
        };
        assert_relative_eq!(at(2e-7) / at(1e-7), 0.25, max_relative = 1e-6);
        let gamma = gamma_from_lambda(1e-16, 1e-7).unwrap();
        assert!(laplacian_at_origin_csl(1e-7, gamma, m, 1e-8).is_err());
        assert!(laplacian_at_origin_csl(1e-7, gamma, m, 0.0).is_err());
    }

    #[test]
    fn dp_quadrature_matches_restored_hbar_form() {
        for r_c in TEST_RC_VALUES {
            let value = laplacian_at_origin_dp(r_c, DpPrefactor::Quarter, &CODATA, 1e-10).unwrap();
            let exact = 2.0 * CODATA.gravitational / (8.0 * PI.sqrt() * CODATA.hbar * r_c.powi(3));
            assert!(relative_error(value, exact) <= 1e-8);
        }
        let a = laplacian_at_origin_dp(1e-7, DpPrefactor::Quarter, &CODATA, 1e-10).unwrap();
        let b = laplacian_at_origin_dp(2e-7, DpPrefactor::Quarter, &CODATA, 1e-10).unwrap();
        assert_relative_eq!(a / b, 8.0, max_relative = 1e-9);
        assert!(laplacian_at_origin_dp(1e-7, DpPrefactor::Quarter, &CODATA, 0.0).is_err());
    }

    #[test]
    fn per_particle_powers() {
        let csl = check(
            &CollapseParams::csl(1e-16, 1e-7).unwrap(),
            OracleMethod::FiniteDifference,
            &CODATA,
        )
        .unwrap();
        assert_relative_eq!(csl.power_closed_form, 4.9799e-44, max_relative = 1e-4);
        assert!(csl.power_relative_error <= 1e-6);
        let dp = check(
            &CollapseParams::dp(1e-7, DpPrefactor::Quarter).unwrap(),
            OracleMethod::FourierQuadrature,
            &CODATA,
        )
        .unwrap();
        assert_relative_eq!(dp.power_closed_form, 8.314e-52, max_relative = 1e-3);
        assert!(dp.power_relative_error <= 1e-6);
    }

    #[test]
    fn all_reports_pass() {
        let reports = verify_heating_coefficients(&CODATA).unwrap();
        assert_eq!(reports.len(), 12);
        for r in &reports {
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn gradient_vanishes() {
        let spec = KernelSpec::for_params(&CollapseParams::csl(1e-16, 1e-7).unwrap(), &CODATA);
        assert_eq!(gradient_at_origin(&spec, 1e-10), 0.0);
        let dp = KernelSpec::for_params(
            &CollapseParams::dp(1e-7, DpPrefactor::Quarter).unwrap(),
            &CODATA,
        );
        assert_eq!(gradient_at_origin(&dp, 1e-10), 0.0);
    }

    #[test]
    fn self_convolution_is_wider_gaussian() {
        let r = 1e-7;
        for i in 0..20 {
            let s = i as f64 * 0.2 * r;
            let brute = gaussian_self_convolution(s, r, 1e-12).unwrap();
            let closed = regulator(s, 2f64.sqrt() * r);
            assert!(
                relative_error(brute, closed) <= 1e-8,
                "s = {s:e}: {brute:e} vs {closed:e}"
            );
        }
    }
}
