use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rectangular tub used by the lumped design calculations.
///
/// The wetted wall area is configured rather than derived from the
/// dimensions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TubGeometry {
    pub length: f64,
    pub width: f64,
    pub water_depth: f64,
    pub total_depth: f64,
    pub surface_area: f64,
    pub wall_thickness: f64,
    pub wall_conductivity: f64,
}

impl TubGeometry {
    pub fn new(
        length: f64,
        width: f64,
        water_depth: f64,
        total_depth: f64,
        surface_area: f64,
        wall_thickness: f64,
        wall_conductivity: f64,
    ) -> Result<Self> {
        for (name, v) in [
            ("geometry.length_m", length),
            ("geometry.width_m", width),
            ("geometry.water_depth_m", water_depth),
            ("geometry.total_depth_m", total_depth),
            ("wall.area_m2", surface_area),
            ("wall.thickness_m", wall_thickness),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(name, format!("must be > 0, got {v}")));
            }
        }
        if !(wall_conductivity.is_finite() && wall_conductivity >= 0.0) {
            return Err(Error::invalid("wall.k_wall", "must be >= 0"));
        }
        if total_depth < water_depth {
            return Err(Error::invalid(
                "geometry.total_depth_m",
                format!("total depth {total_depth} is below the water depth {water_depth}"),
            ));
        }
        Ok(TubGeometry {
            length,
            width,
            water_depth,
            total_depth,
            surface_area,
            wall_thickness,
            wall_conductivity,
        })
    }

    /// Footprint area a = length × width.
    pub fn footprint(&self) -> f64 {
        self.length * self.width
    }
}
