//! Physical constants and unit-tagged scalars.
//!
//! Everything is SI. Two frozen profiles exist: current CODATA/IAU values and a
//! rounded profile (`σ = 5.6e-8`, `M_sun = 2.0e30`) for reproducing
//! order-of-magnitude hand arithmetic.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalConstants {
    /// Reduced Planck constant (J·s).
    pub hbar: f64,
    /// Newton's constant (m³·kg⁻¹·s⁻²).
    pub gravitational: f64,
    /// Stefan–Boltzmann constant (W·m⁻²·K⁻⁴).
    pub stefan_boltzmann: f64,
    /// Neutron mass (kg).
    pub neutron_mass: f64,
    /// Solar mass (kg).
    pub solar_mass: f64,
    /// Nominal solar luminosity (W).
    pub solar_luminosity: f64,
    /// Absolute bolometric magnitude of the Sun.
    pub solar_bolometric_magnitude: f64,
    /// Parsec (m).
    pub parsec: f64,
}

pub const CODATA: PhysicalConstants = PhysicalConstants {
    hbar: 1.054_571_817e-34,
    gravitational: 6.674_30e-11,
    stefan_boltzmann: 5.670_374e-8,
    neutron_mass: 1.674_927_498_04e-27,
    solar_mass: 1.988_47e30,
    solar_luminosity: 3.828e26,
    solar_bolometric_magnitude: 4.74,
    parsec: 3.0857e16,
};

pub const PAPER_ROUNDED: PhysicalConstants = PhysicalConstants {
    stefan_boltzmann: 5.6e-8,
    solar_mass: 2.0e30,
    ..CODATA
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstantsProfile {
    #[default]
    Codata,
    Paper,
}

impl ConstantsProfile {
    pub fn constants(self) -> &'static PhysicalConstants {
        match self {
            ConstantsProfile::Codata => &CODATA,
            ConstantsProfile::Paper => &PAPER_ROUNDED,
        }
    }
}

impl FromStr for ConstantsProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "codata" => Ok(ConstantsProfile::Codata),
            "paper" => Ok(ConstantsProfile::Paper),
            other => Err(Error::Validation(format!(
                "unknown constants profile '{other}' (expected codata|paper)"
            ))),
        }
    }
}

/// The CODATA profile.
pub fn default_constants() -> &'static PhysicalConstants {
    &CODATA
}

impl PhysicalConstants {
    #[cfg(test)]
    fn values(&self) -> [f64; 8] {
        [
            self.hbar,
            self.gravitational,
            self.stefan_boltzmann,
            self.neutron_mass,
            self.solar_mass,
            self.solar_luminosity,
            self.solar_bolometric_magnitude,
            self.parsec,
        ]
    }
}

/// Dimensions that occur in this crate. Not a general units system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dimension {
    Dimensionless,
    Power,
    Temperature,
    Length,
    Rate,
    Mass,
    Luminosity,
    Area,
    /// Power per unit area.
    Flux,
}

impl Dimension {
    /// Suffix appended to JSON/CSV keys carrying a value of this dimension.
    pub fn unit_suffix(self) -> &'static str {
        match self {
            Dimension::Dimensionless => "",
            Dimension::Power | Dimension::Luminosity => "_W",
            Dimension::Temperature => "_K",
            Dimension::Length => "_m",
            Dimension::Rate => "_per_s",
            Dimension::Mass => "_kg",
            Dimension::Area => "_m2",
            Dimension::Flux => "_W_per_m2",
        }
    }

    fn is_energy_rate(self) -> bool {
        matches!(self, Dimension::Power | Dimension::Luminosity)
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Dimension::Dimensionless => "dimensionless",
            Dimension::Power => "power",
            Dimension::Temperature => "temperature",
            Dimension::Length => "length",
            Dimension::Rate => "rate",
            Dimension::Mass => "mass",
            Dimension::Luminosity => "luminosity",
            Dimension::Area => "area",
            Dimension::Flux => "flux",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Quantity {
    pub value: f64,
    pub dimension: Dimension,
}

impl Quantity {
    pub const fn new(value: f64, dimension: Dimension) -> Self {
        Quantity { value, dimension }
    }

    pub const fn power(watts: f64) -> Self {
        Quantity::new(watts, Dimension::Power)
    }

    pub const fn temperature(kelvin: f64) -> Self {
        Quantity::new(kelvin, Dimension::Temperature)
    }

    pub const fn length(metres: f64) -> Self {
        Quantity::new(metres, Dimension::Length)
    }

    pub const fn area(square_metres: f64) -> Self {
        Quantity::new(square_metres, Dimension::Area)
    }

    pub fn checked_add(self, rhs: Quantity) -> Result<Quantity> {
        self.same_dimension(rhs, "add")?;
        Ok(Quantity::new(self.value + rhs.value, self.dimension))
    }

    pub fn checked_sub(self, rhs: Quantity) -> Result<Quantity> {
        self.same_dimension(rhs, "subtract")?;
        Ok(Quantity::new(self.value - rhs.value, self.dimension))
    }

    pub fn scale(self, factor: f64) -> Quantity {
        Quantity::new(self.value * factor, self.dimension)
    }

    /// Division for the handful of dimension pairs that have a meaning here.
    pub fn checked_div(self, rhs: Quantity) -> Result<Quantity> {
        use Dimension::*;
        let dimension = match (self.dimension, rhs.dimension) {
            (a, b) if a == b => Dimensionless,
            (a, Dimensionless) => a,
            (a, Area) if a.is_energy_rate() => Flux,
            (a, Flux) if a.is_energy_rate() => Area,
            _ => return Err(self.mismatch(rhs, "divide")),
        };
        Ok(Quantity::new(self.value / rhs.value, dimension))
    }

    /// Blackbody temperature `(flux / σ)^{1/4}` of a flux.
    pub fn blackbody_temperature(self, constants: &PhysicalConstants) -> Result<Quantity> {
        if self.dimension != Dimension::Flux {
            return Err(self.mismatch(
                Quantity::new(0.0, Dimension::Flux),
                "take the blackbody temperature of",
            ));
        }
        Ok(Quantity::temperature(
            (self.value / constants.stefan_boltzmann).powf(0.25),
        ))
    }

    fn same_dimension(self, rhs: Quantity, op: &'static str) -> Result<()> {
        if self.dimension == rhs.dimension {
            Ok(())
        } else {
            Err(self.mismatch(rhs, op))
        }
    }

    fn mismatch(self, rhs: Quantity, op: &'static str) -> Error {
        Error::DimensionMismatch {
            op,
            left: self.dimension,
            right: rhs.dimension,
        }
    }
}
