use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Constant thermophysical properties of a medium.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Material {
    /// kg/m³
    density: f64,
    /// J/(kg·K)
    specific_heat: f64,
    /// W/(m·K)
    conductivity: f64,
}

impl Material {
    pub fn new(density: f64, specific_heat: f64, conductivity: f64) -> Result<Self> {
        if !(density.is_finite() && density > 0.0) {
            return Err(Error::invalid("material.rho", format!("must be > 0, got {density}")));
        }
        if !(specific_heat.is_finite() && specific_heat > 0.0) {
            return Err(Error::invalid("material.c", format!("must be > 0, got {specific_heat}")));
        }
        if !(conductivity.is_finite() && conductivity >= 0.0) {
            return Err(Error::invalid("material.k", format!("must be >= 0, got {conductivity}")));
        }
        Ok(Material {
            density,
            specific_heat,
            conductivity,
        })
    }

    /// Liquid water near bathing temperature.
    pub fn water() -> Self {
        Material {
            density: 1000.0,
            specific_heat: 4186.0,
            conductivity: 0.6,
        }
    }

    pub fn air() -> Self {
        Material {
            density: 1.2,
            specific_heat: 1005.0,
            conductivity: 0.026,
        }
    }

    pub fn density(&self) -> f64 {
        self.density
    }

    pub fn specific_heat(&self) -> f64 {
        self.specific_heat
    }

    pub fn conductivity(&self) -> f64 {
        self.conductivity
    }

    /// Volumetric heat capacity ρc in J/(m³·K).
    pub fn heat_capacity(&self) -> f64 {
        self.density * self.specific_heat
    }

    pub fn with_conductivity(&self, conductivity: f64) -> Result<Self> {
        Material::new(self.density, self.specific_heat, conductivity)
    }
}

/// Thermal diffusivity α = k/(ρc) in m²/s.
pub fn diffusivity(m: &Material) -> f64 {
    m.conductivity / (m.density * m.specific_heat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn diffusivity_examples() {
        assert_eq!(diffusivity(&Material::new(1.0, 1.0, 1.0).unwrap()), 1.0);
        assert_eq!(diffusivity(&Material::new(7.0, 3.0, 0.0).unwrap()), 0.0);
        assert_relative_eq!(
            diffusivity(&Material::water()),
            0.6 / (1000.0 * 4186.0),
            max_relative = 1e-15
        );
        assert_relative_eq!(diffusivity(&Material::water()), 1.4334e-7, max_relative = 1e-4);
    }

    #[test]
    fn rejects_bad_properties() {
        let err = Material::new(-1.0, 4186.0, 0.6).unwrap_err();
        assert!(err.to_string().contains("material.rho"));
        assert!(Material::new(1000.0, 0.0, 0.6).is_err());
        assert!(Material::new(1000.0, 4186.0, -0.1).is_err());
        assert!(Material::new(f64::NAN, 4186.0, 0.6).is_err());
    }

    proptest! {
        #[test]
        fn diffusivity_is_homogeneous(
            rho in 0.1f64..1e4, c in 0.1f64..1e4, k in 0.0f64..1e3, s in 0.01f64..100.0
        ) {
            let base = diffusivity(&Material::new(rho, c, k).unwrap());
            let scaled_k = diffusivity(&Material::new(rho, c, k * s).unwrap());
            let scaled_rho = diffusivity(&Material::new(rho * s, c, k).unwrap());
            let scaled_c = diffusivity(&Material::new(rho, c * s, k).unwrap());
            let tol = 1e-12 * base.max(f64::MIN_POSITIVE);
            prop_assert!((scaled_k - base * s).abs() <= tol * s.max(1.0));
            prop_assert!((scaled_rho - base / s).abs() <= tol / s.min(1.0));
            prop_assert!((scaled_c - base / s).abs() <= tol / s.min(1.0));
        }
    }
}
