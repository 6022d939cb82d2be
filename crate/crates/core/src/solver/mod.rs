//! Explicit (forward-time, centered-space) integration of
//!
//! ```text
//! ρc ∂T/∂t = k ∇²T + h_air (ΔA/ΔV) (T_c − T) + f
//! ```
//!
//! on a cell-centered grid with ghost-cell boundaries.

mod run;
mod steady;
mod stepper;

pub use run::{run, SeriesRow, SimulationResult, Snapshot, SolverConfig};
pub use steady::{detect_steady, least_squares_slope, SteadyState};
pub use stepper::{step, Stepper, BLOWUP_MAGNITUDE};

use crate::grid::GridSpec;
use crate::material::{diffusivity, Material};

/// Largest stable explicit time step 1/(2α·Σ 1/Δᵢ²), or +∞ when α = 0.
pub fn stability_limit(m: &Material, grid: &GridSpec) -> f64 {
    let alpha = diffusivity(m);
    if alpha == 0.0 {
        return f64::INFINITY;
    }
    1.0 / (2.0 * alpha * grid.inverse_spacing_sq_sum())
}

/// Diffusion number r = α·Δt·Σ 1/Δᵢ². The scheme is stable for r ≤ 1/2.
pub fn diffusion_number(m: &Material, grid: &GridSpec, dt: f64) -> f64 {
    diffusivity(m) * dt * grid.inverse_spacing_sq_sum()
}
