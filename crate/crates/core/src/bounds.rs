//! Exclusion bounds: for a temperature scenario, the CSL rate `λ_crit(r_c)`
//! above which a star would be heated beyond that temperature, and the DP
//! minimal correlation length.

use std::f64::consts::PI;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::error::{require_positive, Error, Result};
use crate::models::{heating_power, CollapseParams, DpPrefactor, ModelKind};
use crate::thermal::{equilibrium_temperature, max_heating_power, StarModel};

/// Short-distance tests of Newtonian gravity cap the DP regulator at 100 µm.
pub const DP_GRAVITATIONAL_UPPER_BOUND_M: f64 = 1e-4;

pub const DEFAULT_RC_MIN_M: f64 = 1e-9;
pub const DEFAULT_RC_MAX_M: f64 = 1e-3;
pub const DEFAULT_RC_POINTS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioKind {
    Observed,
    Speculative,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TemperatureScenario {
    pub label: String,
    #[serde(rename = "temperature_K")]
    pub temperature: f64,
    pub kind: ScenarioKind,
}

impl TemperatureScenario {
    pub fn new(label: impl Into<String>, temperature: f64, kind: ScenarioKind) -> Result<Self> {
        Ok(TemperatureScenario {
            label: label.into(),
            temperature: require_positive("temperature", temperature)?,
            kind,
        })
    }

    fn validate(&self) -> Result<()> {
        require_positive("temperature", self.temperature).map(|_| ())
    }
}

/// The coldest observed neutron star plus the survey and limiting-temperature
/// hypotheses, hottest first.
pub fn builtin_scenarios() -> Vec<TemperatureScenario> {
    [
        ("PSR J 840-1419", 2.8e5, ScenarioKind::Observed),
        ("DES", 2.2e4, ScenarioKind::Speculative),
        ("LSST/Sun", 7.0e3, ScenarioKind::Speculative),
        ("Earth", 3.0e2, ScenarioKind::Speculative),
        ("Ultimate/CMB", 5.0, ScenarioKind::Speculative),
    ]
    .into_iter()
    .map(|(label, t, kind)| TemperatureScenario {
        label: label.to_string(),
        temperature: t,
        kind,
    })
    .collect()
}

pub fn load_scenarios(path: &Path) -> Result<Vec<TemperatureScenario>> {
    let text = std::fs::read_to_string(path)?;
    let scenarios: Vec<TemperatureScenario> =
        serde_json::from_str(&text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
    for s in &scenarios {
        s.validate().map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            message: format!("scenario '{}': {e}", s.label),
        })?;
    }
    Ok(scenarios)
}

/// `λ_crit = 4 r_c² m_n ε S σ T⁴ / (3 ħ² N)`.
pub fn csl_lambda_crit(
    r_c: f64,
    scenario: &TemperatureScenario,
    star: &StarModel,
    constants: &PhysicalConstants,
) -> Result<f64> {
    let r_c = require_positive("r_c", r_c)?;
    let p_max = max_heating_power(star, scenario.temperature, constants)?;
    let hbar = constants.hbar;
    Ok(4.0 * r_c * r_c * constants.neutron_mass * p_max / (3.0 * hbar * hbar * star.n_baryons()))
}

/// `r_c,min = ((c/¼) G ħ m_n N / (8√π ε S σ T⁴))^{1/3}`.
pub fn dp_rc_min(
    scenario: &TemperatureScenario,
    star: &StarModel,
    prefactor: DpPrefactor,
    constants: &PhysicalConstants,
) -> Result<f64> {
    let p_max = max_heating_power(star, scenario.temperature, constants)?;
    let numerator = prefactor.value() / 0.25
        * constants.gravitational
        * constants.hbar
        * constants.neutron_mass
        * star.n_baryons();
    Ok((numerator / (8.0 * PI.sqrt() * p_max)).cbrt())
}

pub fn dp_gravitational_upper_bound() -> f64 {
    DP_GRAVITATIONAL_UPPER_BOUND_M
}

/// A parameter point is excluded iff its equilibrium temperature strictly
/// exceeds the scenario temperature.
pub fn is_excluded(
    params: &CollapseParams,
    scenario: &TemperatureScenario,
    star: &StarModel,
    constants: &PhysicalConstants,
) -> Result<bool> {
    let p = heating_power(params, star.n_baryons(), constants)?;
    Ok(equilibrium_temperature(star, p, constants)? > scenario.temperature)
}

/// `n` log-spaced points from `min` to `max`, both endpoints exact.
pub fn log_grid(min: f64, max: f64, n: usize) -> Result<Vec<f64>> {
    require_positive("grid min", min)?;
    require_positive("grid max", max)?;
    if n < 2 || min >= max {
        return Err(Error::InvalidGrid(format!(
            "need min < max and at least 2 points, got {min:e}:{max:e}:{n}"
        )));
    }
    let (lo, hi) = (min.ln(), max.ln());
    let step = (hi - lo) / (n - 1) as f64;
    let mut grid: Vec<f64> = (0..n).map(|i| (lo + step * i as f64).exp()).collect();
    grid[0] = min;
    grid[n - 1] = max;
    Ok(grid)
}

/// `min:max:N` specification of a log-spaced r_c grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RcGrid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Default for RcGrid {
    fn default() -> Self {
        RcGrid {
            min: DEFAULT_RC_MIN_M,
            max: DEFAULT_RC_MAX_M,
            points: DEFAULT_RC_POINTS,
        }
    }
}

impl RcGrid {
    pub fn values(&self) -> Result<Vec<f64>> {
        log_grid(self.min, self.max, self.points)
    }
}

impl FromStr for RcGrid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidGrid(format!("expected min:max:N, got '{s}'"));
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let grid = RcGrid {
            min: parts[0].trim().parse().map_err(|_| bad())?,
            max: parts[1].trim().parse().map_err(|_| bad())?,
            points: parts[2].trim().parse().map_err(|_| bad())?,
        };
        grid.values()?;
        Ok(grid)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveSample {
    #[serde(rename = "rc_m")]
    pub r_c: f64,
    #[serde(rename = "lambda_crit_per_s")]
    pub lambda_crit: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum CurveData {
    Csl {
        samples: Vec<CurveSample>,
    },
    Dp {
        #[serde(rename = "rc_min_m")]
        rc_min: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExclusionCurve {
    pub scenario: TemperatureScenario,
    pub star: String,
    pub model: ModelKind,
    #[serde(flatten)]
    pub data: CurveData,
}

impl ExclusionCurve {
    pub fn samples(&self) -> &[CurveSample] {
        match &self.data {
            CurveData::Csl { samples } => samples,
            CurveData::Dp { .. } => &[],
        }
    }

    pub fn rc_min(&self) -> Option<f64> {
        match self.data {
            CurveData::Dp { rc_min } => Some(rc_min),
            CurveData::Csl { .. } => None,
        }
    }
}

/// Samples the exclusion boundary of `model` over `rc_grid`.
///
/// The DP bound does not depend on the grid beyond its validation.
pub fn build_exclusion_curve(
    scenario: &TemperatureScenario,
    star: &StarModel,
    model: ModelKind,
    rc_grid: &[f64],
    dp_prefactor: DpPrefactor,
    constants: &PhysicalConstants,
) -> Result<ExclusionCurve> {
    if rc_grid.is_empty() {
        return Err(Error::InvalidGrid("empty r_c grid".into()));
    }
    if let Some(bad) = rc_grid.iter().find(|r| !(**r > 0.0 && r.is_finite())) {
        return Err(Error::InvalidGrid(format!(
            "non-positive r_c {bad:e} in grid"
        )));
    }
    if let Some(i) = rc_grid.windows(2).position(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid(format!(
            "r_c grid not strictly increasing at index {}",
            i + 1
        )));
    }
    scenario.validate()?;

    let data = match model {
        ModelKind::Csl => CurveData::Csl {
            samples: rc_grid
                .iter()
                .map(|&r_c| {
                    Ok(CurveSample {
                        r_c,
                        lambda_crit: csl_lambda_crit(r_c, scenario, star, constants)?,
                    })
                })
                .collect::<Result<_>>()?,
        },
        ModelKind::Dp => CurveData::Dp {
            rc_min: dp_rc_min(scenario, star, dp_prefactor, constants)?,
        },
    };
    Ok(ExclusionCurve {
        scenario: scenario.clone(),
        star: star.name().to_string(),
        model,
        data,
    })
}
