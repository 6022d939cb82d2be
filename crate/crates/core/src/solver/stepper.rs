use crate::boundary::{BoundaryCondition, Boundaries};
use crate::error::{Error, Result};
use crate::field::TemperatureField;
use crate::grid::{Face, GridSpec};
use crate::material::{diffusivity, Material};
use crate::physics::SourceTerm;

/// Any |T| above this (°C) is treated as a diverged solution.
pub const BLOWUP_MAGNITUDE: f64 = 1.0e9;

/// Precomputed coefficients for repeated FTCS updates on one grid.
#[derive(Clone, Debug)]
pub struct Stepper {
    grid: GridSpec,
    /// α/Δ² per axis (zero for inactive axes).
    axis_coeff: [f64; 3],
    /// (k_wall/d)/(ρcΔ) per face for wall-loss faces.
    wall_coeff: [f64; 6],
    bcs: Boundaries,
    cooling: Vec<(f64, f64)>,
    /// f/(ρc) per cell, summed over heat sources.
    heating: Vec<f64>,
}

impl Stepper {
    pub fn new(grid: &GridSpec, m: &Material, sources: &[SourceTerm], bcs: &Boundaries) -> Result<Self> {
        let alpha = diffusivity(m);
        let rho_c = m.heat_capacity();
        let mut axis_coeff = [0.0; 3];
        for axis in 0..grid.dims() {
            let d = grid.spacing(axis);
            axis_coeff[axis] = alpha / (d * d);
        }
        let mut wall_coeff = [0.0; 6];
        for &face in Face::active(grid.dims()) {
            if let BoundaryCondition::WallLoss(w) = bcs.get(face) {
                wall_coeff[face as usize] = w.transfer_coefficient() / (rho_c * grid.spacing(face.axis()));
            }
        }
        let mut cooling = Vec::new();
        let mut heating = vec![0.0; grid.len()];
        for src in sources {
            match src {
                SourceTerm::SurfaceCooling(s) => cooling.push((s.relaxation_rate(m), s.ambient)),
                SourceTerm::Heat(h) => {
                    if !h.region.fits(grid) {
                        return Err(Error::invalid("source.region", "region lies outside the grid"));
                    }
                    let rate = h.power / rho_c;
                    for (idx, cell) in heating.iter_mut().enumerate() {
                        if h.region.contains(grid.coords(idx)) {
                            *cell += rate;
                        }
                    }
                }
            }
        }
        Ok(Stepper {
            grid: grid.clone(),
            axis_coeff,
            wall_coeff,
            bcs: *bcs,
            cooling,
            heating,
        })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    /// Advances `src` by `dt` into `dst`. Returns the index of the first
    /// cell that blew up, if any.
    pub fn advance(&self, src: &[f64], dst: &mut [f64], dt: f64) -> Option<usize> {
        let n = [self.grid.cells(0), self.grid.cells(1), self.grid.cells(2)];
        let strides = self.grid.strides();
        let dims = self.grid.dims();
        let mut bad = None;
        let mut idx = 0;
        for i in 0..n[0] {
            for j in 0..n[1] {
                for k in 0..n[2] {
                    let ijk = [i, j, k];
                    let t = src[idx];
                    let mut rate = 0.0;
                    for axis in 0..dims {
                        let c = ijk[axis];
                        let lo = if c > 0 {
                            src[idx - strides[axis]] - t
                        } else {
                            self.boundary_difference(Face::of(axis, false), t)
                        };
                        let hi = if c + 1 < n[axis] {
                            src[idx + strides[axis]] - t
                        } else {
                            self.boundary_difference(Face::of(axis, true), t)
                        };
                        rate += self.axis_coeff[axis] * (lo + hi);
                        if c == 0 {
                            rate += self.wall_rate(Face::of(axis, false), t);
                        }
                        if c + 1 == n[axis] {
                            rate += self.wall_rate(Face::of(axis, true), t);
                        }
                    }
                    for &(beta, ambient) in &self.cooling {
                        rate += beta * (ambient - t);
                    }
                    rate += self.heating[idx];
                    let next = t + dt * rate;
                    if bad.is_none() && !(next.abs() <= BLOWUP_MAGNITUDE) {
                        bad = Some(idx);
                    }
                    dst[idx] = next;
                    idx += 1;
                }
            }
        }
        bad
    }

    /// Ghost-minus-cell difference across a domain face.
    #[inline]
    fn boundary_difference(&self, face: Face, t: f64) -> f64 {
        match self.bcs.get(face) {
            BoundaryCondition::FixedTemperature(tb) => 2.0 * (tb - t),
            // Wall flux is added separately; the ghost mirrors the cell.
            BoundaryCondition::Insulated | BoundaryCondition::WallLoss(_) => 0.0,
        }
    }

    #[inline]
    fn wall_rate(&self, face: Face, t: f64) -> f64 {
        match self.bcs.get(face) {
            BoundaryCondition::WallLoss(w) => self.wall_coeff[face as usize] * (w.exterior() - t),
            _ => 0.0,
        }
    }
}

/// One explicit time step. The input field is left untouched.
pub fn step(
    field: &TemperatureField,
    m: &Material,
    sources: &[SourceTerm],
    bcs: &Boundaries,
    dt: f64,
) -> Result<TemperatureField> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::invalid("time.dt_s", format!("must be > 0, got {dt}")));
    }
    let stepper = Stepper::new(field.grid(), m, sources, bcs)?;
    let mut out = vec![0.0; field.values().len()];
    if stepper.advance(field.values(), &mut out, dt).is_some() {
        return Err(Error::BlowUp {
            step: 1,
            time: dt,
            partial: None,
        });
    }
    Ok(TemperatureField::from_parts_unchecked(field.grid().clone(), out))
}
