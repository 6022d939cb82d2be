//! Python bindings for `tubheat`.
//!
//! Temperatures are °C unless a unit string ("C", "F", "K") is given.
//! Scenario entry points take the same JSON text as the command line.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use tubheat::physics::{self, NewtonCoolingSpec};
use tubheat::scenarios::{self, DesignPlan, SweepParameter};
use tubheat::solver::SimulationResult;
use tubheat::{Error, GridSpec, TemperatureUnit};

fn to_py(err: Error) -> PyErr {
    match err {
        Error::Unstable { .. } | Error::BlowUp { .. } | Error::NotSteady(_) => {
            PyRuntimeError::new_err(format!("{}: {err}", err.kind()))
        }
        _ => PyValueError::new_err(format!("{}: {err}", err.kind())),
    }
}

fn unit(s: &str) -> PyResult<TemperatureUnit> {
    s.parse().map_err(to_py)
}

#[pyclass(name = "Material", module = "tubheat", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyMaterial {
    inner: tubheat::Material,
}

#[pymethods]
impl PyMaterial {
    #[new]
    fn new(rho: f64, c: f64, k: f64) -> PyResult<Self> {
        Ok(PyMaterial {
            inner: tubheat::Material::new(rho, c, k).map_err(to_py)?,
        })
    }

    #[staticmethod]
    fn water() -> Self {
        PyMaterial {
            inner: tubheat::Material::water(),
        }
    }

    #[staticmethod]
    fn air() -> Self {
        PyMaterial {
            inner: tubheat::Material::air(),
        }
    }

    #[getter]
    fn rho(&self) -> f64 {
        self.inner.density()
    }

    #[getter]
    fn c(&self) -> f64 {
        self.inner.specific_heat()
    }

    #[getter]
    fn k(&self) -> f64 {
        self.inner.conductivity()
    }

    fn diffusivity(&self) -> f64 {
        tubheat::diffusivity(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Material(rho={}, c={}, k={})", self.rho(), self.c(), self.k())
    }
}

#[pyfunction]
fn diffusivity(material: &PyMaterial) -> f64 {
    tubheat::diffusivity(&material.inner)
}

#[pyfunction]
fn convert_temperature(value: f64, from_unit: &str, to_unit: &str) -> PyResult<f64> {
    Ok(tubheat::convert_temperature(value, unit(from_unit)?, unit(to_unit)?))
}

#[pyfunction]
fn newton_temperature(initial: f64, ambient: f64, tau: f64, t: f64) -> PyResult<f64> {
    let spec = NewtonCoolingSpec::new(initial, ambient, tau).map_err(to_py)?;
    Ok(physics::newton_temperature(&spec, t))
}

#[pyfunction]
fn newton_time_to_reach(initial: f64, ambient: f64, tau: f64, temperature: f64) -> PyResult<f64> {
    let spec = NewtonCoolingSpec::new(initial, ambient, tau).map_err(to_py)?;
    physics::newton_time_to_reach(&spec, temperature).map_err(to_py)
}

#[pyfunction]
fn convective_rate(h_air: f64, area: f64, temperature: f64, ambient: f64) -> f64 {
    physics::convective_rate(h_air, area, temperature, ambient)
}

#[pyfunction]
fn wall_loss_rate(k_wall: f64, thickness: f64, area: f64, delta_t: f64) -> PyResult<f64> {
    physics::wall_loss_rate(k_wall, thickness, area, delta_t).map_err(to_py)
}

#[pyfunction]
fn faucet_heat_requirement(q_maintain: f64, q_wall: f64) -> f64 {
    physics::faucet_heat_requirement(q_maintain, q_wall)
}

#[pyfunction]
#[pyo3(signature = (q2, supply_delta_t, pipe_area, material = None))]
fn faucet_velocity(q2: f64, supply_delta_t: f64, pipe_area: f64, material: Option<PyMaterial>) -> PyResult<f64> {
    let m = material.map(|m| m.inner).unwrap_or_else(tubheat::Material::water);
    physics::faucet_velocity(q2, &m, supply_delta_t, pipe_area).map_err(to_py)
}

#[pyfunction]
fn pipe_area(diameter: f64) -> f64 {
    physics::pipe_area(diameter)
}

#[pyfunction]
fn water_level_rise(body_volume: f64, footprint: f64) -> PyResult<f64> {
    physics::water_level_rise(body_volume, footprint).map_err(to_py)
}

/// Largest stable time step for a grid of the given lengths and cell counts.
#[pyfunction]
fn stability_limit(material: &PyMaterial, lengths: Vec<f64>, cells: Vec<usize>) -> PyResult<f64> {
    let grid = GridSpec::new(&lengths, &cells).map_err(to_py)?;
    Ok(tubheat::stability_limit(&material.inner, &grid))
}

/// Parses a scenario and returns it in normalized JSON form.
#[pyfunction]
fn normalize_config(text: &str) -> PyResult<String> {
    Ok(tubheat::serialize_config(&tubheat::parse_config(text).map_err(to_py)?))
}

fn result_dict<'py>(py: Python<'py>, r: &SimulationResult) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("steady_temperature", r.steady.map(|s| s.temperature))?;
    d.set_item("steady_time", r.steady.map(|s| s.time))?;
    d.set_item("final_mean", r.final_mean())?;
    d.set_item("steps", r.steps)?;
    d.set_item("dt", r.dt)?;
    d.set_item("dt_stable_max", r.dt_stable_max)?;
    let series: Vec<(f64, f64, f64, f64, f64)> =
        r.series.iter().map(|s| (s.time, s.mean, s.min, s.max, s.energy)).collect();
    d.set_item("series", series)?;
    d.set_item("final_field", r.final_field().values().to_vec())?;
    Ok(d)
}

/// Runs a scenario from JSON text. Temperatures in the result are °C.
#[pyfunction]
fn run(py: Python<'_>, config: &str) -> PyResult<Py<PyDict>> {
    let spec = tubheat::parse_config(config).map_err(to_py)?;
    let result = py.detach(|| scenarios::run_scenario(&spec)).map_err(to_py)?;
    Ok(result_dict(py, &result)?.unbind())
}

/// Returns `[(value, steady °C or None), ...]` in input order.
#[pyfunction]
#[pyo3(signature = (config, param = None, values = None, parallel = false))]
fn sweep(
    py: Python<'_>,
    config: &str,
    param: Option<&str>,
    values: Option<Vec<f64>>,
    parallel: bool,
) -> PyResult<Vec<(f64, Option<f64>)>> {
    let spec = tubheat::parse_config(config).map_err(to_py)?;
    let param: SweepParameter = match (param, &spec.sweep) {
        (Some(p), _) => p.parse().map_err(to_py)?,
        (None, Some(plan)) => plan.param,
        (None, None) => return Err(PyValueError::new_err("no sweep parameter given")),
    };
    let values = match (values, &spec.sweep) {
        (Some(v), _) => v,
        (None, Some(plan)) => plan.values.clone(),
        (None, None) => return Err(PyValueError::new_err("no sweep values given")),
    };
    let result = py
        .detach(|| scenarios::sweep(&spec, param, &values, parallel))
        .map_err(to_py)?;
    Ok(result.rows.iter().map(|r| (r.value, r.steady.map(|s| s.temperature))).collect())
}

/// Depth search. `target` (°C) and `tol` (K) override the config's design block.
#[pyfunction]
#[pyo3(signature = (config, target = None, tol = None))]
fn design(py: Python<'_>, config: &str, target: Option<f64>, tol: Option<f64>) -> PyResult<Py<PyDict>> {
    let spec = tubheat::parse_config(config).map_err(to_py)?;
    let mut plan = match (&spec.design, target, tol) {
        (Some(p), _, _) => p.clone(),
        (None, Some(t), Some(k)) => DesignPlan::new(t, k),
        _ => return Err(PyValueError::new_err("give target and tol or a design block")),
    };
    if let Some(t) = target {
        plan.target = t;
    }
    if let Some(k) = tol {
        plan.tolerance = k;
    }
    let outcome = py.detach(|| scenarios::design_depth(&spec, &plan)).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("water_depth", outcome.water_depth)?;
    d.set_item("total_depth", outcome.total_depth)?;
    d.set_item("level_rise", outcome.level_rise)?;
    d.set_item("steady_temperature", outcome.steady_temperature)?;
    d.set_item("iterations", outcome.iterations)?;
    if let Some(f) = outcome.faucet {
        d.set_item("q_wall", f.q_wall)?;
        d.set_item("q_supply", f.q_supply)?;
        d.set_item("velocity", f.velocity)?;
    }
    Ok(d.unbind())
}

#[pymodule]
#[pyo3(name = "tubheat")]
fn tubheat_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMaterial>()?;
    m.add_function(wrap_pyfunction!(diffusivity, m)?)?;
    m.add_function(wrap_pyfunction!(convert_temperature, m)?)?;
    m.add_function(wrap_pyfunction!(newton_temperature, m)?)?;
    m.add_function(wrap_pyfunction!(newton_time_to_reach, m)?)?;
    m.add_function(wrap_pyfunction!(convective_rate, m)?)?;
    m.add_function(wrap_pyfunction!(wall_loss_rate, m)?)?;
    m.add_function(wrap_pyfunction!(faucet_heat_requirement, m)?)?;
    m.add_function(wrap_pyfunction!(faucet_velocity, m)?)?;
    m.add_function(wrap_pyfunction!(pipe_area, m)?)?;
    m.add_function(wrap_pyfunction!(water_level_rise, m)?)?;
    m.add_function(wrap_pyfunction!(stability_limit, m)?)?;
    m.add_function(wrap_pyfunction!(normalize_config, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(design, m)?)?;
    Ok(())
}
