//! Temperature units and the fixed-width number formatting used by every
//! emitted CSV file.
//!
//! Everything inside the crate works in degrees Celsius. Fahrenheit and
//! Kelvin only appear at the I/O boundary.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum TemperatureUnit {
    #[default]
    #[serde(rename = "C")]
    Celsius,
    #[serde(rename = "F")]
    Fahrenheit,
    #[serde(rename = "K")]
    Kelvin,
}

impl TemperatureUnit {
    pub fn symbol(self) -> &'static str {
        match self {
            TemperatureUnit::Celsius => "C",
            TemperatureUnit::Fahrenheit => "F",
            TemperatureUnit::Kelvin => "K",
        }
    }

    /// Size of one degree of this unit expressed in kelvin.
    pub fn degree_in_kelvin(self) -> f64 {
        match self {
            TemperatureUnit::Fahrenheit => 5.0 / 9.0,
            TemperatureUnit::Celsius | TemperatureUnit::Kelvin => 1.0,
        }
    }

    /// Converts a temperature *difference* (or rate) given in this unit to kelvin.
    pub fn delta_to_kelvin(self, delta: f64) -> f64 {
        match self {
            TemperatureUnit::Fahrenheit => delta * 5.0 / 9.0,
            _ => delta,
        }
    }

    pub fn delta_from_kelvin(self, delta: f64) -> f64 {
        match self {
            TemperatureUnit::Fahrenheit => delta * 9.0 / 5.0,
            _ => delta,
        }
    }
}

impl fmt::Display for TemperatureUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for TemperatureUnit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "C" | "c" | "celsius" | "Celsius" => Ok(TemperatureUnit::Celsius),
            "F" | "f" | "fahrenheit" | "Fahrenheit" => Ok(TemperatureUnit::Fahrenheit),
            "K" | "k" | "kelvin" | "Kelvin" => Ok(TemperatureUnit::Kelvin),
            other => Err(Error::invalid("units", format!("unknown temperature unit `{other}`"))),
        }
    }
}

const KELVIN_OFFSET: f64 = 273.15;

fn to_celsius(value: f64, from: TemperatureUnit) -> f64 {
    match from {
        TemperatureUnit::Celsius => value,
        TemperatureUnit::Fahrenheit => (value - 32.0) * 5.0 / 9.0,
        TemperatureUnit::Kelvin => value - KELVIN_OFFSET,
    }
}

fn from_celsius(value: f64, to: TemperatureUnit) -> f64 {
    match to {
        TemperatureUnit::Celsius => value,
        TemperatureUnit::Fahrenheit => value * 9.0 / 5.0 + 32.0,
        TemperatureUnit::Kelvin => value + KELVIN_OFFSET,
    }
}

/// Exact affine conversion between temperature scales.
pub fn convert_temperature(value: f64, from: TemperatureUnit, to: TemperatureUnit) -> f64 {
    if from == to {
        return value;
    }
    from_celsius(to_celsius(value, from), to)
}

/// Formats `x` with six significant digits in fixed (non-exponent) notation.
///
/// The output only depends on the bit pattern of `x`, so repeated runs
/// produce byte-identical files.
pub fn format_sig6(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    let mut s = if decimals == 0 {
        // Keep six significant digits for large values, zero the rest.
        let scale = 10f64.powi(magnitude - 5);
        format!("{:.0}", (x / scale).round() * scale)
    } else {
        format!("{x:.decimals$}")
    };
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s.remove(0);
    }
    s
}
