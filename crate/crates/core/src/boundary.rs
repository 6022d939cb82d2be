//! Per-face boundary conditions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Face;

/// Conduction through a tub wall to a fixed exterior temperature.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WallSpec {
    conductivity: f64,
    thickness: f64,
    exterior: f64,
}

impl WallSpec {
    pub fn new(conductivity: f64, thickness: f64, exterior: f64) -> Result<Self> {
        if !(conductivity.is_finite() && conductivity >= 0.0) {
            return Err(Error::invalid("wall.k_wall", format!("must be >= 0, got {conductivity}")));
        }
        if !(thickness.is_finite() && thickness > 0.0) {
            return Err(Error::invalid("wall.thickness_m", format!("must be > 0, got {thickness}")));
        }
        if !exterior.is_finite() {
            return Err(Error::invalid("wall.exterior", "must be finite"));
        }
        Ok(WallSpec {
            conductivity,
            thickness,
            exterior,
        })
    }

    pub fn conductivity(&self) -> f64 {
        self.conductivity
    }

    pub fn thickness(&self) -> f64 {
        self.thickness
    }

    pub fn exterior(&self) -> f64 {
        self.exterior
    }

    /// Overall transfer coefficient k_wall/d in W/(m²·K).
    pub fn transfer_coefficient(&self) -> f64 {
        self.conductivity / self.thickness
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub enum BoundaryCondition {
    /// Zero flux; the ghost cell mirrors the adjacent interior cell.
    #[default]
    Insulated,
    /// The face value is pinned to this temperature (°C).
    FixedTemperature(f64),
    /// Robin flux k_wall·(T_cell − T_ext)/d leaving through the face.
    WallLoss(WallSpec),
}

/// Boundary conditions for all six faces. Faces beyond the grid's
/// dimensionality are ignored.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct Boundaries {
    faces: [BoundaryCondition; 6],
}

impl Boundaries {
    pub fn insulated() -> Self {
        Boundaries::default()
    }

    pub fn uniform(bc: BoundaryCondition) -> Self {
        Boundaries { faces: [bc; 6] }
    }

    pub fn with(mut self, face: Face, bc: BoundaryCondition) -> Self {
        self.faces[face as usize] = bc;
        self
    }

    pub fn set(&mut self, face: Face, bc: BoundaryCondition) {
        self.faces[face as usize] = bc;
    }

    pub fn get(&self, face: Face) -> BoundaryCondition {
        self.faces[face as usize]
    }

    /// Fixed temperatures on the active faces of a `dims`-dimensional grid.
    pub fn fixed_temperatures(&self, dims: usize) -> impl Iterator<Item = f64> + '_ {
        Face::active(dims).iter().filter_map(|&f| match self.get(f) {
            BoundaryCondition::FixedTemperature(t) => Some(t),
            _ => None,
        })
    }

    pub fn has_wall_loss(&self, dims: usize) -> bool {
        Face::active(dims)
            .iter()
            .any(|&f| matches!(self.get(f), BoundaryCondition::WallLoss(_)))
    }
}
