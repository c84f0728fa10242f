//! Apparent magnitude ⇄ luminosity ⇄ blackbody surface temperature.
//!
//! Magnitudes are treated as bolometric, zero-pointed on the Sun
//! (`M_bol,⊙`, `L_⊙` from the constants profile). No band, extinction or
//! bolometric correction is applied.

use serde::Serialize;

use crate::constants::PhysicalConstants;
use crate::error::{require_non_negative, require_positive, Result};
use crate::thermal::{radiated_power, StarModel};

pub const BOLOMETRIC_ASSUMPTION: &str =
    "apparent magnitudes treated as bolometric; zero point M_bol_sun = 4.74, L_sun = 3.828e26 W; no extinction";

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Observation {
    pub apparent_magnitude: f64,
    /// Distance to the source (m).
    pub distance: f64,
    /// Radius assumed for the emitting star (m).
    pub radius_assumed: f64,
}

impl Observation {
    pub fn new(apparent_magnitude: f64, distance: f64, radius_assumed: f64) -> Result<Self> {
        Ok(Observation {
            apparent_magnitude,
            distance: require_positive("distance", distance)?,
            radius_assumed: require_positive("radius_assumed", radius_assumed)?,
        })
    }

    pub fn from_parsecs(
        apparent_magnitude: f64,
        distance_pc: f64,
        radius_assumed: f64,
        constants: &PhysicalConstants,
    ) -> Result<Self> {
        let d = require_positive("distance_pc", distance_pc)?;
        Observation::new(apparent_magnitude, d * constants.parsec, radius_assumed)
    }
}

/// `m − M = 5 log10(d / 10 pc)`.
pub fn distance_modulus(distance: f64, constants: &PhysicalConstants) -> f64 {
    5.0 * (distance / (10.0 * constants.parsec)).log10()
}

pub fn luminosity_from_magnitude(obs: &Observation, constants: &PhysicalConstants) -> Result<f64> {
    let d = require_positive("distance", obs.distance)?;
    let absolute = obs.apparent_magnitude - distance_modulus(d, constants);
    Ok(constants.solar_luminosity
        * 10f64.powf((constants.solar_bolometric_magnitude - absolute) / 2.5))
}

pub fn temperature_from_luminosity(
    luminosity: f64,
    star: &StarModel,
    constants: &PhysicalConstants,
) -> Result<f64> {
    let l = require_non_negative("luminosity", luminosity)?;
    let conductance = star.emissivity() * star.radiating_area() * constants.stefan_boltzmann;
    Ok((l / conductance).sqrt().sqrt())
}

/// Apparent magnitude of a star radiating at `temperature` seen from `distance`.
pub fn magnitude_from_temperature(
    temperature: f64,
    star: &StarModel,
    distance: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    let t = require_positive("temperature", temperature)?;
    let d = require_positive("distance", distance)?;
    let luminosity = radiated_power(star, t, constants)?;
    let absolute = constants.solar_bolometric_magnitude
        - 2.5 * (luminosity / constants.solar_luminosity).log10();
    Ok(absolute + distance_modulus(d, constants))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::CODATA;
    use crate::thermal::AreaModel;
    use approx::assert_relative_eq;

    fn obs(m: f64, pc: f64) -> Observation {
        Observation::from_parsecs(m, pc, 1e4, &CODATA).unwrap()
    }

    #[test]
    fn survey_luminosities() {
        // 3.828e26 · 10^((4.74 − 23 + 5 log10 0.5)/2.5), evaluated independently
        assert_relative_eq!(
            luminosity_from_magnitude(&obs(23.0, 5.0), &CODATA).unwrap(),
            4.752e18,
            max_relative = 1e-3
        );
        assert_relative_eq!(
            luminosity_from_magnitude(&obs(28.0, 5.0), &CODATA).unwrap(),
            4.752e16,
            max_relative = 1e-3
        );
        let bright = luminosity_from_magnitude(&obs(20.0, 5.0), &CODATA).unwrap();
        let faint = luminosity_from_magnitude(&obs(25.0, 5.0), &CODATA).unwrap();
        assert_relative_eq!(bright / faint, 100.0, max_relative = 1e-12);
    }

    #[test]
    fn survey_temperatures() {
        let disk = StarModel::default_star().with_area_model(AreaModel::Disk);
        let sphere = StarModel::default_star();
        assert_relative_eq!(
            temperature_from_luminosity(4.8e18, &disk, &CODATA).unwrap(),
            2.27835e4,
            max_relative = 1e-3
        );
        assert_relative_eq!(
            temperature_from_luminosity(4.8e18, &sphere, &CODATA).unwrap(),
            1.61103e4,
            max_relative = 1e-3
        );
        assert_relative_eq!(
            temperature_from_luminosity(4.8e16, &disk, &CODATA).unwrap(),
            7204.77,
            max_relative = 1e-3
        );
        assert!(temperature_from_luminosity(-1.0, &disk, &CODATA).is_err());
    }

    #[test]
    fn magnitude_of_hot_and_cold_stars() {
        let d = 5.0 * CODATA.parsec;
        let sphere = StarModel::default_star();
        assert_relative_eq!(
            magnitude_from_temperature(914.3, &sphere, d, &CODATA).unwrap(),
            35.449,
            epsilon = 5e-3
        );
        let disk = sphere.with_area_model(AreaModel::Disk);
        assert_relative_eq!(
            magnitude_from_temperature(7e3, &disk, d, &CODATA).unwrap(),
            28.11,
            epsilon = 1e-2
        );
    }

    #[test]
    fn invalid_inputs() {
        assert!(Observation::new(20.0, 0.0, 1e4).is_err());
        assert!(Observation::new(20.0, 1e17, -1.0).is_err());
        let star = StarModel::default_star();
        assert!(magnitude_from_temperature(0.0, &star, 1e17, &CODATA).is_err());
        assert!(magnitude_from_temperature(100.0, &star, 0.0, &CODATA).is_err());
    }
}
