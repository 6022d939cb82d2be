//! Bathtub heat-conduction simulation.
//!
//! The water body is modelled as a rigid conductor on a uniform
//! cell-centered grid and advanced with an explicit finite-difference
//! scheme. Surface exchange with room air, constant heat injection and
//! wall conduction enter as source and boundary terms. The [`scenarios`]
//! module packages the standard experiments (surface cooling, local hot
//! water addition, continuous heating, parameter sweeps and the depth
//! design search); [`cli`] exposes them on the command line.

pub mod boundary;
pub mod cli;
pub mod config;
pub mod error;
pub mod field;
pub mod geometry;
pub mod grid;
pub mod material;
pub mod output;
pub mod physics;
pub mod scenarios;
pub mod solver;
pub mod units;

pub use boundary::{BoundaryCondition, Boundaries, WallSpec};
pub use error::{Error, Result};
pub use field::{total_energy, TemperatureField};
pub use geometry::TubGeometry;
pub use grid::{CellBox, Face, GridSpec};
pub use material::{diffusivity, Material};
pub use solver::{detect_steady, run, stability_limit, step, SimulationResult, SolverConfig};
pub use scenarios::{ScenarioKind, ScenarioSpec, SweepParameter, SweepResult};
pub use config::{parse_config, serialize_config};
pub use units::{convert_temperature, TemperatureUnit};
