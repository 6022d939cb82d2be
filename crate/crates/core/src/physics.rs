//! Source terms for the conduction equation and the closed-form lumped
//! relations: Newton cooling, convective exchange, wall conduction, faucet
//! heat balance and water-level rise.
//!
//! Sign conventions: `convective_rate` and `wall_loss_rate` return heat
//! *leaving* the water as a positive number, while `cooling_source_rate`
//! returns the temperature rate of a cell, which is negative whenever the
//! water is warmer than the air.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{CellBox, GridSpec};
use crate::material::Material;

/// Convective exchange between the water surface and room air.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfaceCoolingSpec {
    /// W/(m²·K)
    pub h_air: f64,
    /// Exposed area per unit volume ΔA/ΔV, 1/m.
    pub area_to_volume: f64,
    /// °C
    pub ambient: f64,
}

impl SurfaceCoolingSpec {
    pub fn new(h_air: f64, area_to_volume: f64, ambient: f64) -> Result<Self> {
        if !(h_air.is_finite() && h_air >= 0.0) {
            return Err(Error::invalid("surface.h_air", format!("must be >= 0, got {h_air}")));
        }
        if !(area_to_volume.is_finite() && area_to_volume >= 0.0) {
            return Err(Error::invalid(
                "surface.area_to_volume",
                format!("must be >= 0, got {area_to_volume}"),
            ));
        }
        if !ambient.is_finite() {
            return Err(Error::invalid("surface.ambient", "must be finite"));
        }
        Ok(SurfaceCoolingSpec {
            h_air,
            area_to_volume,
            ambient,
        })
    }

    /// Volumetric exchange coefficient h_air·ΔA/ΔV in W/(m³·K).
    pub fn volumetric_coefficient(&self) -> f64 {
        self.h_air * self.area_to_volume
    }

    /// Relaxation rate h_air·(ΔA/ΔV)/(ρc) in 1/s.
    pub fn relaxation_rate(&self, m: &Material) -> f64 {
        self.volumetric_coefficient() / m.heat_capacity()
    }
}

/// Constant volumetric heating `power` (W/m³) over a box of cells.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeatSourceSpec {
    pub power: f64,
    pub region: CellBox,
}

impl HeatSourceSpec {
    pub fn new(power: f64, region: CellBox, grid: &GridSpec) -> Result<Self> {
        if !power.is_finite() {
            return Err(Error::invalid("source.power", "must be finite"));
        }
        if !region.fits(grid) {
            return Err(Error::invalid("source.region", "region lies outside the grid"));
        }
        Ok(HeatSourceSpec { power, region })
    }
}

/// A right-hand-side contribution to the conduction equation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum SourceTerm {
    /// Applies to every cell.
    SurfaceCooling(SurfaceCoolingSpec),
    Heat(HeatSourceSpec),
}

/// Exponential relaxation of a well-mixed body toward ambient.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NewtonCoolingSpec {
    pub initial: f64,
    pub ambient: f64,
    /// Time constant τ in seconds.
    pub time_constant: f64,
}

impl NewtonCoolingSpec {
    pub fn new(initial: f64, ambient: f64, time_constant: f64) -> Result<Self> {
        if !(time_constant.is_finite() && time_constant > 0.0) {
            return Err(Error::invalid("tau", format!("must be > 0, got {time_constant}")));
        }
        if !(initial.is_finite() && ambient.is_finite()) {
            return Err(Error::invalid("temperature", "must be finite"));
        }
        Ok(NewtonCoolingSpec {
            initial,
            ambient,
            time_constant,
        })
    }

    /// The lumped time constant ρc/(h_air·ΔA/ΔV) of a cooling spec.
    pub fn from_surface(initial: f64, surface: &SurfaceCoolingSpec, m: &Material) -> Result<Self> {
        NewtonCoolingSpec::new(initial, surface.ambient, 1.0 / surface.relaxation_rate(m))
    }
}

/// T(t) = T_c + (T₀ − T_c)·exp(−t/τ).
pub fn newton_temperature(spec: &NewtonCoolingSpec, t: f64) -> f64 {
    spec.ambient + (spec.initial - spec.ambient) * (-t / spec.time_constant).exp()
}

/// Time for the body to reach `temperature`: τ·ln((T₀ − T_c)/(T − T_c)).
pub fn newton_time_to_reach(spec: &NewtonCoolingSpec, temperature: f64) -> Result<f64> {
    let start = spec.initial - spec.ambient;
    let now = temperature - spec.ambient;
    // T must lie in (T_c, T₀] on whichever side of ambient the body starts.
    let reachable = if start > 0.0 {
        now > 0.0 && now <= start
    } else if start < 0.0 {
        now < 0.0 && now >= start
    } else {
        false
    };
    if !reachable {
        return Err(Error::Domain(format!(
            "temperature {temperature} is not reachable from {} toward ambient {}",
            spec.initial, spec.ambient
        )));
    }
    Ok(spec.time_constant * (start / now).ln())
}

/// Q = h_air·A·(T − T_c) in W; positive when heat leaves the water.
pub fn convective_rate(h_air: f64, area: f64, temperature: f64, ambient: f64) -> f64 {
    h_air * area * (temperature - ambient)
}

/// Temperature rate (K/s) that surface cooling contributes to a cell at `temperature`.
pub fn cooling_source_rate(temperature: f64, spec: &SurfaceCoolingSpec, m: &Material) -> f64 {
    spec.volumetric_coefficient() * (spec.ambient - temperature) / m.heat_capacity()
}

/// Heat (W) conducted out through a wall: k_wall·S·ΔT/d.
pub fn wall_loss_rate(k_wall: f64, thickness: f64, area: f64, delta_t: f64) -> Result<f64> {
    if !(thickness > 0.0) {
        return Err(Error::Domain(format!("wall thickness must be > 0, got {thickness}")));
    }
    Ok(k_wall * area * delta_t / thickness)
}

/// Heat the faucet must deliver: the maintenance load plus the wall loss.
pub fn faucet_heat_requirement(q_maintain: f64, q_wall: f64) -> f64 {
    q_maintain + q_wall
}

/// Inflow velocity (m/s) that delivers `q2` watts: q2/(ρ·c·ΔT·A_pipe).
pub fn faucet_velocity(q2: f64, m: &Material, supply_delta_t: f64, pipe_area: f64) -> Result<f64> {
    if !(supply_delta_t > 0.0) {
        return Err(Error::Domain(format!("supply temperature drop must be > 0, got {supply_delta_t}")));
    }
    if !(pipe_area > 0.0) {
        return Err(Error::Domain(format!("pipe area must be > 0, got {pipe_area}")));
    }
    Ok(q2 / (m.heat_capacity() * supply_delta_t * pipe_area))
}

/// Cross-section of a round pipe.
pub fn pipe_area(diameter: f64) -> f64 {
    std::f64::consts::PI * diameter * diameter / 4.0
}

/// Rise (m) of the water level when a body of volume `body_volume` enters a
/// tub of footprint `footprint`.
pub fn water_level_rise(body_volume: f64, footprint: f64) -> Result<f64> {
    if !(footprint > 0.0) {
        return Err(Error::Domain(format!("footprint must be > 0, got {footprint}")));
    }
    if !(body_volume >= 0.0) {
        return Err(Error::Domain(format!("body volume must be >= 0, got {body_volume}")));
    }
    Ok(body_volume / footprint)
}

/// Explicit-Euler integration of a single well-mixed cell under surface
/// cooling. Returns `(t, T)` pairs including the initial state.
pub fn simulate_lumped(
    initial: f64,
    surface: &SurfaceCoolingSpec,
    m: &Material,
    dt: f64,
    steps: usize,
) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(steps + 1);
    let mut t = initial;
    out.push((0.0, t));
    for n in 1..=steps {
        t += dt * cooling_source_rate(t, surface, m);
        out.push((n as f64 * dt, t));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn spec() -> NewtonCoolingSpec {
        NewtonCoolingSpec::new(31.33, 25.0, 1200.0).unwrap()
    }

    #[test]
    fn newton_examples() {
        assert_eq!(newton_temperature(&spec(), 0.0), 31.33);
        assert_relative_eq!(newton_temperature(&spec(), 1e7), 25.0, max_relative = 1e-12);
        // (31.33 − 25)/e + 25
        assert_relative_eq!(newton_temperature(&spec(), 1200.0), 27.328_666, max_relative = 1e-6);
    }

    #[test]
    fn newton_inverse_examples() {
        let s = spec();
        assert_eq!(newton_time_to_reach(&s, 31.33).unwrap(), 0.0);
        let at_tau = 25.0 + 6.33 / std::f64::consts::E;
        assert_relative_eq!(newton_time_to_reach(&s, at_tau).unwrap(), 1200.0, max_relative = 1e-12);
        assert!(matches!(newton_time_to_reach(&s, 25.0), Err(Error::Domain(_))));
        assert!(newton_time_to_reach(&s, 20.0).is_err());
        assert!(newton_time_to_reach(&s, 40.0).is_err());
        // warming toward ambient
        let warming = NewtonCoolingSpec::new(10.0, 25.0, 100.0).unwrap();
        assert!(newton_time_to_reach(&warming, 20.0).unwrap() > 0.0);
    }

    #[test]
    fn convective_examples() {
        assert_eq!(convective_rate(10.0, 0.9, 30.0, 30.0), 0.0);
        assert_relative_eq!(convective_rate(10.0, 0.9, 38.0, 25.0), 117.0, max_relative = 1e-12);
        assert_eq!(convective_rate(10.0, 0.9, 25.0, 38.0), -convective_rate(10.0, 0.9, 38.0, 25.0));
    }

    #[test]
    fn cooling_rate_examples() {
        let water = Material::water();
        let s = SurfaceCoolingSpec::new(10.0, 1.0 / 0.34, 20.0).unwrap();
        assert_eq!(cooling_source_rate(20.0, &s, &water), 0.0);
        let doubled = SurfaceCoolingSpec::new(10.0, 2.0 / 0.34, 20.0).unwrap();
        assert_relative_eq!(
            cooling_source_rate(30.0, &doubled, &water),
            2.0 * cooling_source_rate(30.0, &s, &water),
            max_relative = 1e-14
        );
        // 10 · 2.941 · 10 / (1000 · 4186), negated
        assert_relative_eq!(cooling_source_rate(30.0, &s, &water), -7.0265e-5, max_relative = 1e-4);
    }

    #[test]
    fn wall_examples() {
        assert_eq!(wall_loss_rate(0.19, 0.02, 1.908, 0.0).unwrap(), 0.0);
        let thin = wall_loss_rate(0.19, 0.02, 1.908, 5.0).unwrap();
        let thick = wall_loss_rate(0.19, 0.04, 1.908, 5.0).unwrap();
        assert_relative_eq!(thick, thin / 2.0, max_relative = 1e-14);
        // lumped k·ΔT/d = 9.5003 W/m² over S = 1.908 m²
        let q1 = wall_loss_rate(9.5003, 1.0, 1.908, 1.0).unwrap();
        assert!((q1 - 18.126).abs() < 1e-3, "q1 = {q1}");
        assert!(wall_loss_rate(0.19, 0.0, 1.908, 1.0).is_err());
    }

    #[test]
    fn faucet_examples() {
        assert_relative_eq!(faucet_heat_requirement(80.0, 18.126), 98.126, max_relative = 1e-15);
        assert_eq!(faucet_heat_requirement(0.0, 0.0), 0.0);
        assert_eq!(faucet_heat_requirement(80.0, 0.0), 80.0);

        let water = Material::water();
        let area = pipe_area(0.010);
        assert_relative_eq!(area, 7.854e-5, max_relative = 1e-4);
        assert_eq!(faucet_velocity(0.0, &water, 7.1, area).unwrap(), 0.0);
        let v = faucet_velocity(98.126, &water, 7.1, area).unwrap();
        assert!((v - 0.0420).abs() < 5e-5, "v = {v}");
        let v2 = faucet_velocity(98.126, &water, 7.1, 2.0 * area).unwrap();
        assert_relative_eq!(v2, v / 2.0, max_relative = 1e-14);
        assert!(faucet_velocity(98.0, &water, 0.0, area).is_err());
        assert!(faucet_velocity(98.0, &water, 7.0, 0.0).is_err());
    }

    #[test]
    fn level_rise_examples() {
        assert_eq!(water_level_rise(0.0, 0.9).unwrap(), 0.0);
        let rise = water_level_rise(0.070, 0.9).unwrap();
        assert!((rise - 0.077_78).abs() < 1e-5);
        assert!((rise - 0.078).abs() < 5e-4);
        assert_relative_eq!(water_level_rise(0.070, 1.8).unwrap(), rise / 2.0);
        assert!(water_level_rise(0.070, 0.0).is_err());
    }

    #[test]
    fn lumped_euler_tracks_closed_form() {
        let water = Material::water();
        let surface = SurfaceCoolingSpec::new(50.0, 1.0 / 0.34, 25.0).unwrap();
        let newton = NewtonCoolingSpec::from_surface(31.33, &surface, &water).unwrap();
        let tau = newton.time_constant;
        let dt = tau / 1000.0;
        for (t, temp) in simulate_lumped(31.33, &surface, &water, dt, 5000) {
            let exact = newton_temperature(&newton, t);
            assert!(((temp - exact) / exact).abs() < 1e-3);
        }
    }

    proptest! {
        #[test]
        fn newton_round_trip(t0 in -20.0f64..90.0, tc in -20.0f64..90.0, tau in 1.0f64..1e5, frac in 0.0f64..10.0) {
            prop_assume!((t0 - tc).abs() > 1.0);
            let s = NewtonCoolingSpec::new(t0, tc, tau).unwrap();
            let t = frac * tau;
            let temp = newton_temperature(&s, t);
            prop_assume!(temp != tc);
            let back = newton_time_to_reach(&s, temp).unwrap();
            prop_assert!((back - t).abs() <= 1e-9 * t.max(tau * 1e-3));
        }

        #[test]
        fn cooling_sign(temp in -50.0f64..150.0, ambient in -50.0f64..150.0, h in 0.01f64..100.0, av in 0.01f64..100.0) {
            let s = SurfaceCoolingSpec::new(h, av, ambient).unwrap();
            let r = cooling_source_rate(temp, &s, &Material::water());
            if temp > ambient { prop_assert!(r < 0.0) }
            else if temp < ambient { prop_assert!(r > 0.0) }
            else { prop_assert_eq!(r, 0.0) }
        }

        #[test]
        fn faucet_inverse(q2 in 0.0f64..1e4, dt in 0.1f64..50.0, d in 0.001f64..0.1) {
            let water = Material::water();
            let area = pipe_area(d);
            let v = faucet_velocity(q2, &water, dt, area).unwrap();
            let back = v * area * water.heat_capacity() * dt;
            prop_assert!((back - q2).abs() <= 1e-12 * q2.max(1.0));
        }
    }
}
