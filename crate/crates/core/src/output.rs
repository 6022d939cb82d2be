//! Result files. CSV numbers are written with six significant digits;
//! JSON keeps full precision.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scenarios::{DesignOutcome, FaucetPlan, SweepResult};
use crate::solver::{SeriesRow, SimulationResult};
use crate::units::{convert_temperature, format_sig6, TemperatureUnit};

pub const SNAPSHOTS_FILE: &str = "snapshots.csv";
pub const SERIES_FILE: &str = "series.csv";
pub const SUMMARY_FILE: &str = "summary.json";
pub const SWEEP_FILE: &str = "sweep.csv";
pub const DESIGN_FILE: &str = "design.json";

fn out(unit: TemperatureUnit, celsius: f64) -> f64 {
    convert_temperature(celsius, TemperatureUnit::Celsius, unit)
}

/// One row per cell per snapshot: `t_s, x_m[, y_m[, z_m]], T`, cells in
/// row-major order with x varying slowest.
pub fn snapshots_csv(result: &SimulationResult, unit: TemperatureUnit) -> String {
    let mut s = String::new();
    let Some(first) = result.snapshots.first() else {
        return s;
    };
    let grid = first.field.grid();
    s.push_str("t_s");
    for name in ["x_m", "y_m", "z_m"].iter().take(grid.dims()) {
        s.push(',');
        s.push_str(name);
    }
    s.push_str(",T\n");
    for snap in &result.snapshots {
        let t = format_sig6(snap.time);
        for (idx, &v) in snap.field.values().iter().enumerate() {
            let ijk = grid.coords(idx);
            s.push_str(&t);
            for axis in 0..grid.dims() {
                s.push(',');
                s.push_str(&format_sig6(grid.center(axis, ijk[axis])));
            }
            s.push(',');
            s.push_str(&format_sig6(out(unit, v)));
            s.push('\n');
        }
    }
    s
}

pub fn series_csv(series: &[SeriesRow], unit: TemperatureUnit) -> String {
    let mut s = String::from("t_s,mean,min,max,energy_J\n");
    for r in series {
        let cols = [
            format_sig6(r.time),
            format_sig6(out(unit, r.mean)),
            format_sig6(out(unit, r.min)),
            format_sig6(out(unit, r.max)),
            format_sig6(r.energy),
        ];
        s.push_str(&cols.join(","));
        s.push('\n');
    }
    s
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub scenario: String,
    pub units: TemperatureUnit,
    pub steady_temperature: Option<f64>,
    pub steady_time_s: Option<f64>,
    pub final_mean: f64,
    pub dt_used_s: f64,
    /// `null` when the material does not conduct.
    pub dt_stable_max_s: Option<f64>,
    pub steps: u64,
    pub blowup: bool,
}

impl Summary {
    pub fn new(scenario: &str, result: &SimulationResult, unit: TemperatureUnit, blowup: bool) -> Self {
        Summary {
            scenario: scenario.to_string(),
            units: unit,
            steady_temperature: result.steady.map(|s| out(unit, s.temperature)),
            steady_time_s: result.steady.map(|s| s.time),
            final_mean: out(unit, result.final_mean()),
            dt_used_s: result.dt,
            dt_stable_max_s: result.dt_stable_max.is_finite().then_some(result.dt_stable_max),
            steps: result.steps,
            blowup,
        }
    }
}

pub fn sweep_csv(sweep: &SweepResult, unit: TemperatureUnit) -> String {
    let mut s = format!("{},steady_temperature,steady_time_s,final_mean\n", sweep.parameter);
    for (row, run) in sweep.rows.iter().zip(&sweep.runs) {
        let (temp, time) = match row.steady {
            Some(st) => (format_sig6(out(unit, st.temperature)), format_sig6(st.time)),
            None => (String::new(), String::new()),
        };
        s.push_str(&format!(
            "{},{temp},{time},{}\n",
            format_sig6(row.value),
            format_sig6(out(unit, run.final_mean()))
        ));
    }
    s
}

/// `design.json` contents with temperatures in `unit`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DesignReport {
    pub units: TemperatureUnit,
    pub target: f64,
    pub steady_temperature: f64,
    pub water_depth_m: f64,
    pub level_rise_m: f64,
    pub total_depth_m: f64,
    pub iterations: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub faucet: Option<FaucetReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FaucetReport {
    pub q_maintain_w: f64,
    pub q_wall_w: f64,
    pub q_supply_w: f64,
    pub supply_delta: f64,
    pub pipe_area_m2: f64,
    pub velocity_m_s: f64,
}

impl DesignReport {
    pub fn new(d: &DesignOutcome, unit: TemperatureUnit) -> Self {
        DesignReport {
            units: unit,
            target: out(unit, d.target),
            steady_temperature: out(unit, d.steady_temperature),
            water_depth_m: d.water_depth,
            level_rise_m: d.level_rise,
            total_depth_m: d.total_depth,
            iterations: d.iterations,
            faucet: d.faucet.as_ref().map(|f: &FaucetPlan| FaucetReport {
                q_maintain_w: f.q_maintain,
                q_wall_w: f.q_wall,
                q_supply_w: f.q_supply,
                supply_delta: unit.delta_from_kelvin(f.supply_delta_t),
                pipe_area_m2: f.pipe_area,
                velocity_m_s: f.velocity,
            }),
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types always serialize");
    s.push('\n');
    s
}

/// Writes `contents` to `dir/name` and returns the path.
pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(path)
}

/// Writes snapshots, series and summary for one run.
pub fn write_run(
    dir: &Path,
    scenario: &str,
    result: &SimulationResult,
    unit: TemperatureUnit,
    blowup: bool,
) -> Result<Vec<PathBuf>> {
    Ok(vec![
        write_file(dir, SNAPSHOTS_FILE, &snapshots_csv(result, unit))?,
        write_file(dir, SERIES_FILE, &series_csv(&result.series, unit))?,
        write_file(dir, SUMMARY_FILE, &to_json(&Summary::new(scenario, result, unit, blowup)))?,
    ])
}

pub fn write_sweep(dir: &Path, sweep: &SweepResult, unit: TemperatureUnit) -> Result<Vec<PathBuf>> {
    let mut files = vec![write_file(dir, SWEEP_FILE, &sweep_csv(sweep, unit))?];
    for (i, run) in sweep.runs.iter().enumerate() {
        files.push(write_file(dir, &format!("series_{i}.csv"), &series_csv(&run.series, unit))?);
    }
    Ok(files)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::TemperatureField;
    use crate::grid::GridSpec;
    use crate::solver::Snapshot;

    fn tiny() -> SimulationResult {
        let g = GridSpec::new(&[1.0, 2.0], &[2, 2]).unwrap();
        let f = TemperatureField::new(g, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        SimulationResult {
            snapshots: vec![Snapshot { time: 0.0, field: f }],
            series: vec![SeriesRow { time: 0.0, mean: 2.5, min: 1.0, max: 4.0, energy: 1e7 }],
            steady: None,
            steps: 0,
            dt: 1.0,
            dt_stable_max: f64::INFINITY,
        }
    }

    #[test]
    fn snapshot_rows_are_x_major() {
        let csv = snapshots_csv(&tiny(), TemperatureUnit::Celsius);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "t_s,x_m,y_m,T");
        assert_eq!(lines[1], "0,0.250000,0.500000,1.00000");
        assert_eq!(lines[2], "0,0.250000,1.50000,2.00000");
        assert_eq!(lines[3], "0,0.750000,0.500000,3.00000");
    }

    #[test]
    fn series_in_fahrenheit() {
        let csv = series_csv(&tiny().series, TemperatureUnit::Fahrenheit);
        assert_eq!(csv.lines().nth(1).unwrap(), "0,36.5000,33.8000,39.2000,10000000");
    }

    #[test]
    fn summary_keys() {
        let json: serde_json::Value =
            serde_json::from_str(&to_json(&Summary::new("x", &tiny(), TemperatureUnit::Celsius, false))).unwrap();
        for key in [
            "scenario",
            "steady_temperature",
            "steady_time_s",
            "final_mean",
            "dt_used_s",
            "dt_stable_max_s",
            "steps",
            "blowup",
        ] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
        assert!(json["dt_stable_max_s"].is_null());
    }
}
