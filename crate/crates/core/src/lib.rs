//! Collapse-model (CSL, Diósi–Penrose) heating of neutron stars.
//!
//! The crate computes the heating power a collapse model injects into a
//! star of `N` neutrons, the Stefan–Boltzmann equilibrium temperature it
//! implies, and the parameter regions excluded by observed or hypothetical
//! temperatures. Numerical oracles check the Laplacian-at-origin coefficient
//! behind the heating law, and a 1D density-matrix simulator shows the
//! heating rate is constant and independent of state and potential.

pub mod astro;
pub mod bounds;
pub mod cli;
pub mod constants;
pub mod diagram;
pub mod error;
pub mod models;
pub mod oracle;
pub mod quadrature;
pub mod sim;
pub mod thermal;

pub use constants::{default_constants, ConstantsProfile, Dimension, PhysicalConstants, Quantity};
pub use error::{Error, Result};
pub use models::{CollapseParams, DpPrefactor, KernelSpec, ModelKind};
pub use thermal::{AreaModel, StarModel};
