use crate::error::{Error, Result};
use crate::grid::{CellBox, GridSpec};
use crate::material::Material;

/// Cell temperatures (°C) on a [`GridSpec`]. Always finite.
#[derive(Clone, Debug, PartialEq)]
pub struct TemperatureField {
    grid: GridSpec,
    values: Vec<f64>,
}

impl TemperatureField {
    pub fn new(grid: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::invalid(
                "field",
                format!("expected {} values, got {}", grid.len(), values.len()),
            ));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid("field", format!("value at cell {i} is not finite")));
        }
        Ok(TemperatureField { grid, values })
    }

    pub fn uniform(grid: GridSpec, temperature: f64) -> Result<Self> {
        let n = grid.len();
        TemperatureField::new(grid, vec![temperature; n])
    }

    /// Builds a field cell by cell from center coordinates `[x, y, z]`.
    pub fn from_fn(grid: GridSpec, mut f: impl FnMut([f64; 3]) -> f64) -> Result<Self> {
        let values = (0..grid.len())
            .map(|idx| {
                let ijk = grid.coords(idx);
                let mut pos = [0.0; 3];
                for axis in 0..grid.dims() {
                    pos[axis] = grid.center(axis, ijk[axis]);
                }
                f(pos)
            })
            .collect();
        TemperatureField::new(grid, values)
    }

    /// Skips the finiteness scan; the solver checks separately.
    pub(crate) fn from_parts_unchecked(grid: GridSpec, values: Vec<f64>) -> Self {
        debug_assert_eq!(grid.len(), values.len());
        TemperatureField { grid, values }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn get(&self, ijk: [usize; 3]) -> f64 {
        self.values[self.grid.index(ijk)]
    }

    /// Overwrites every cell in `region` with `temperature`.
    pub fn fill_box(&mut self, region: &CellBox, temperature: f64) -> Result<()> {
        if !temperature.is_finite() {
            return Err(Error::invalid("field", "fill temperature is not finite"));
        }
        for idx in 0..self.values.len() {
            if region.contains(self.grid.coords(idx)) {
                self.values[idx] = temperature;
            }
        }
        Ok(())
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Returns a field with every value mapped through `f`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        TemperatureField::new(self.grid.clone(), self.values.iter().map(|&v| f(v)).collect())
    }
}

/// Thermal energy ρc·ΣT·ΔV in joules relative to a 0 °C datum.
pub fn total_energy(field: &TemperatureField, m: &Material) -> f64 {
    let sum: f64 = field.values.iter().sum();
    m.heat_capacity() * sum * field.grid.cell_volume()
}
