//! Stefan–Boltzmann balance between collapse heating and thermal radiation.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::error::{require_non_negative, require_positive, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AreaModel {
    /// `4πR²`
    #[default]
    FullSphere,
    /// `πR²`
    Disk,
}

impl AreaModel {
    pub fn area(self, radius: f64) -> f64 {
        match self {
            AreaModel::FullSphere => 4.0 * PI * radius * radius,
            AreaModel::Disk => PI * radius * radius,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            AreaModel::FullSphere => "full_sphere",
            AreaModel::Disk => "disk",
        }
    }
}

impl std::str::FromStr for AreaModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full_sphere" => Ok(AreaModel::FullSphere),
            "disk" => Ok(AreaModel::Disk),
            other => Err(Error::Validation(format!(
                "unknown area model '{other}' (expected full_sphere|disk)"
            ))),
        }
    }
}

/// A lumped, uniform-temperature star.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StarModel {
    name: String,
    mass: f64,
    radius: f64,
    n_baryons: f64,
    emissivity: f64,
    area_model: AreaModel,
}

/// On-disk form of a [`StarModel`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StarFile {
    pub name: String,
    pub mass_kg: f64,
    pub radius_m: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_baryons: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub emissivity: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub area_model: Option<AreaModel>,
}

impl StarModel {
    /// A black, fully radiating star whose baryon count defaults to
    /// `mass / m_n`.
    pub fn new(
        name: impl Into<String>,
        mass: f64,
        radius: f64,
        constants: &PhysicalConstants,
    ) -> Result<Self> {
        let mass = require_positive("mass", mass)?;
        Ok(StarModel {
            name: name.into(),
            mass,
            radius: require_positive("radius", radius)?,
            n_baryons: mass / constants.neutron_mass,
            emissivity: 1.0,
            area_model: AreaModel::FullSphere,
        })
    }

    /// Canonical 10 km, 2e30 kg star with `N = 1e57` set explicitly.
    pub fn default_star() -> Self {
        StarModel {
            name: "default".to_string(),
            mass: 2.0e30,
            radius: 1.0e4,
            n_baryons: 1.0e57,
            emissivity: 1.0,
            area_model: AreaModel::FullSphere,
        }
    }

    pub fn with_n_baryons(mut self, n: f64) -> Result<Self> {
        self.n_baryons = require_positive("n_baryons", n)?;
        Ok(self)
    }

    pub fn with_emissivity(mut self, emissivity: f64) -> Result<Self> {
        if !(emissivity > 0.0 && emissivity <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "emissivity",
                value: emissivity,
                reason: "must lie in (0, 1]",
            });
        }
        self.emissivity = emissivity;
        Ok(self)
    }

    pub fn with_area_model(mut self, area_model: AreaModel) -> Self {
        self.area_model = area_model;
        self
    }

    pub fn with_radius(mut self, radius: f64) -> Result<Self> {
        self.radius = require_positive("radius", radius)?;
        Ok(self)
    }

    pub fn from_file(file: StarFile, constants: &PhysicalConstants) -> Result<Self> {
        let mut star = StarModel::new(file.name, file.mass_kg, file.radius_m, constants)?;
        if let Some(n) = file.n_baryons {
            star = star.with_n_baryons(n)?;
        }
        if let Some(e) = file.emissivity {
            star = star.with_emissivity(e)?;
        }
        if let Some(a) = file.area_model {
            star = star.with_area_model(a);
        }
        Ok(star)
    }

    pub fn load(path: &Path, constants: &PhysicalConstants) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let file: StarFile = serde_json::from_str(&text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        StarModel::from_file(file, constants)
    }

    pub fn to_file(&self) -> StarFile {
        StarFile {
            name: self.name.clone(),
            mass_kg: self.mass,
            radius_m: self.radius,
            n_baryons: Some(self.n_baryons),
            emissivity: Some(self.emissivity),
            area_model: Some(self.area_model),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn n_baryons(&self) -> f64 {
        self.n_baryons
    }

    pub fn emissivity(&self) -> f64 {
        self.emissivity
    }

    pub fn area_model(&self) -> AreaModel {
        self.area_model
    }

    pub fn radiating_area(&self) -> f64 {
        self.area_model.area(self.radius)
    }

    /// `ε S σ`, the factor multiplying `T⁴`.
    fn radiative_conductance(&self, constants: &PhysicalConstants) -> f64 {
        self.emissivity * self.radiating_area() * constants.stefan_boltzmann
    }
}

/// `P = ε S σ T⁴`.
pub fn radiated_power(
    star: &StarModel,
    temperature: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    let t = require_non_negative("temperature", temperature)?;
    let t2 = t * t;
    Ok(star.radiative_conductance(constants) * t2 * t2)
}

/// Temperature at which radiation balances `p_heat`: `(P / (ε S σ))^{1/4}`.
pub fn equilibrium_temperature(
    star: &StarModel,
    p_heat: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    let p = require_non_negative("p_heat", p_heat)?;
    Ok((p / star.radiative_conductance(constants)).sqrt().sqrt())
}

/// Largest heating power compatible with an observed equilibrium surface
/// temperature `t_obs`.
pub fn max_heating_power(
    star: &StarModel,
    t_obs: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    let t = require_positive("t_obs", t_obs)?;
    radiated_power(star, t, constants)
}
