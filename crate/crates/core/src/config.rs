//! JSON scenario files.
//!
//! Parsing is strict: unknown keys, wrong types and out-of-range values are
//! rejected with the dotted path of the offending field. Temperatures in the
//! file are read in the unit named by the top-level `units` key (default °C);
//! the resulting [`ScenarioSpec`] always holds °C.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::boundary::WallSpec;
use crate::error::{Error, Result};
use crate::grid::{Face, GridSpec};
use crate::material::Material;
use crate::physics::SurfaceCoolingSpec;
use crate::scenarios::{
    DesignGeometry, DesignPlan, FixedConfig, InitRegion, InitialCondition, Modifiers, ScenarioKind, ScenarioSpec,
    SourceConfig, SweepParameter, SweepPlan, WallConfig,
};
use crate::solver::SolverConfig;
use crate::units::{convert_temperature, TemperatureUnit};

/// Default steady-state tolerance ε in K/s.
pub const DEFAULT_STEADY_EPSILON: f64 = 1e-6;
/// Default steady-state window as a multiple of the snapshot interval.
pub const DEFAULT_WINDOW_SNAPSHOTS: f64 = 10.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    pub scenario: ScenarioKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub units: Option<TemperatureUnit>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub grid: GridDoc,
    pub material: MaterialDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface: Option<SurfaceDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall: Option<WallDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed: Option<FixedDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<SourceDoc>,
    pub init: InitDoc,
    pub time: TimeDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steady: Option<SteadyDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometry: Option<GeometryDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modifiers: Option<ModifiersDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub design: Option<DesignDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridDoc {
    pub dims: usize,
    pub lengths_m: Vec<f64>,
    pub cells: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialDoc {
    pub rho: f64,
    pub c: f64,
    pub k: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceDoc {
    pub h_air: f64,
    pub ambient: f64,
    pub area_to_volume: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WallDoc {
    pub k_wall: f64,
    pub thickness_m: f64,
    pub area_m2: f64,
    pub exterior: f64,
    /// Faces that lose heat through the wall; all active faces if omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub faces: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixedDoc {
    pub temp: f64,
    pub faces: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionDoc {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceDoc {
    pub power: f64,
    pub region: RegionDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitRegionDoc {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub temp: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uniform: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regions: Option<Vec<InitRegionDoc>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesMode {
    Snapshot,
    Step,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeDoc {
    pub dt_s: f64,
    pub end_s: f64,
    pub snapshot_s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<SeriesMode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub allow_unstable: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SteadyDoc {
    /// Degrees per second in the file's unit.
    pub epsilon: f64,
    pub window_s: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryDoc {
    pub length_m: f64,
    pub width_m: f64,
    pub body_volume_m3: f64,
    pub pipe_diameter_m: f64,
    /// Temperature drop of faucet water on mixing, in the file's unit.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub supply_delta: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModifiersDoc {
    #[serde(default = "one")]
    pub mixing_factor: f64,
    #[serde(default = "one")]
    pub surface_factor: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepDoc {
    pub param: SweepParameter,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignDoc {
    pub target: f64,
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth_lo_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth_hi_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution_m: Option<f64>,
}

/// Parses and validates scenario JSON.
pub fn parse_config(text: &str) -> Result<ScenarioSpec> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let doc: ConfigDocument = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if inner.is_syntax() || inner.is_eof() {
            Error::Parse(inner.to_string())
        } else {
            Error::Invalid {
                field: if path == "." { "config".into() } else { path },
                reason: inner.to_string(),
            }
        }
    })?;
    from_document(&doc)
}

pub fn load_config(path: &Path) -> Result<ScenarioSpec> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_config(&text)
}

/// Pretty JSON that parses back to the same spec.
pub fn serialize_config(spec: &ScenarioSpec) -> String {
    serde_json::to_string_pretty(&to_document(spec)).expect("config documents always serialize")
}

fn faces(names: &[String], dims: usize, path: &str) -> Result<Vec<Face>> {
    let active = Face::active(dims);
    let mut out = Vec::with_capacity(names.len());
    for (n, name) in names.iter().enumerate() {
        let field = format!("{path}[{n}]");
        let face: Face = name.parse().map_err(|_| Error::invalid(&field, format!("unknown face `{name}`")))?;
        if !active.contains(&face) {
            return Err(Error::invalid(field, format!("face `{name}` does not exist on a {dims}-D grid")));
        }
        if !out.contains(&face) {
            out.push(face);
        }
    }
    Ok(out)
}

fn positive(value: f64, field: &str) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::invalid(field, format!("must be > 0, got {value}")))
    }
}

/// Builds a validated spec from a parsed document.
pub fn from_document(doc: &ConfigDocument) -> Result<ScenarioSpec> {
    let unit = doc.units.unwrap_or_default();
    let temp = |v: f64| convert_temperature(v, unit, TemperatureUnit::Celsius);
    let delta = |v: f64| unit.delta_to_kelvin(v);

    let g = &doc.grid;
    if !(1..=3).contains(&g.dims) {
        return Err(Error::invalid("grid.dims", format!("must be 1, 2 or 3, got {}", g.dims)));
    }
    if g.lengths_m.len() != g.dims {
        return Err(Error::invalid("grid.lengths_m", format!("expected {} entries", g.dims)));
    }
    if g.cells.len() != g.dims {
        return Err(Error::invalid("grid.cells", format!("expected {} entries", g.dims)));
    }
    let grid = GridSpec::new(&g.lengths_m, &g.cells)?;
    let material = Material::new(doc.material.rho, doc.material.c, doc.material.k)?;

    let surface = doc
        .surface
        .as_ref()
        .map(|s| SurfaceCoolingSpec::new(s.h_air, s.area_to_volume, temp(s.ambient)))
        .transpose()?;

    let wall = match &doc.wall {
        Some(w) => Some(WallConfig {
            spec: WallSpec::new(w.k_wall, w.thickness_m, temp(w.exterior))?,
            area: positive(w.area_m2, "wall.area_m2")?,
            faces: match &w.faces {
                Some(names) => faces(names, grid.dims(), "wall.faces")?,
                None => Face::active(grid.dims()).to_vec(),
            },
        }),
        None => None,
    };
    let fixed = match &doc.fixed {
        Some(f) => {
            if !f.temp.is_finite() {
                return Err(Error::invalid("fixed.temp", "must be finite"));
            }
            Some(FixedConfig {
                temp: temp(f.temp),
                faces: faces(&f.faces, grid.dims(), "fixed.faces")?,
            })
        }
        None => None,
    };
    if let (Some(w), Some(f)) = (&wall, &fixed) {
        if let Some(face) = f.faces.iter().find(|face| w.faces.contains(face)) {
            return Err(Error::invalid("fixed.faces", format!("face `{face}` already has a wall")));
        }
    }

    let source = doc.source.as_ref().map(|s| SourceConfig {
        power: s.power,
        lo: s.region.lo.clone(),
        hi: s.region.hi.clone(),
    });

    let init = InitialCondition {
        uniform: doc.init.uniform.map(temp),
        regions: doc
            .init
            .regions
            .iter()
            .flatten()
            .map(|r| InitRegion {
                lo: r.lo.clone(),
                hi: r.hi.clone(),
                temp: temp(r.temp),
            })
            .collect(),
    };
    if doc.init.uniform.is_none() && init.regions.is_empty() {
        return Err(Error::invalid("init", "give `uniform`, `regions`, or both"));
    }

    let t = &doc.time;
    let mut solver = SolverConfig::new(t.dt_s, t.end_s, t.snapshot_s)?;
    solver.allow_unstable = t.allow_unstable.unwrap_or(false);
    solver.series_every_step = t.series == Some(SeriesMode::Step);
    let solver = match &doc.steady {
        Some(s) => solver.with_steady(delta(s.epsilon), s.window_s)?,
        None => solver.with_steady(DEFAULT_STEADY_EPSILON, DEFAULT_WINDOW_SNAPSHOTS * t.snapshot_s)?,
    };

    let geometry = match &doc.geometry {
        Some(g) => Some(DesignGeometry {
            length: positive(g.length_m, "geometry.length_m")?,
            width: positive(g.width_m, "geometry.width_m")?,
            body_volume: {
                if !(g.body_volume_m3.is_finite() && g.body_volume_m3 >= 0.0) {
                    return Err(Error::invalid("geometry.body_volume_m3", "must be >= 0"));
                }
                g.body_volume_m3
            },
            pipe_diameter: positive(g.pipe_diameter_m, "geometry.pipe_diameter_m")?,
            supply_delta_t: g
                .supply_delta
                .map(|d| positive(d, "geometry.supply_delta").map(delta))
                .transpose()?,
        }),
        None => None,
    };

    let modifiers = match &doc.modifiers {
        Some(m) => Modifiers {
            mixing: positive(m.mixing_factor, "modifiers.mixing_factor")?,
            surface: {
                if !(m.surface_factor.is_finite() && m.surface_factor >= 0.0) {
                    return Err(Error::invalid("modifiers.surface_factor", "must be >= 0"));
                }
                m.surface_factor
            },
        },
        None => Modifiers::default(),
    };

    let sweep = doc.sweep.as_ref().map(|s| SweepPlan {
        param: s.param,
        values: s.values.clone(),
    });
    let design = match &doc.design {
        Some(d) => {
            if !d.target.is_finite() {
                return Err(Error::invalid("design.target", "must be finite"));
            }
            let mut plan = DesignPlan::new(temp(d.target), delta(positive(d.tolerance, "design.tolerance")?));
            if let Some(v) = d.depth_lo_m {
                plan.depth_lo = positive(v, "design.depth_lo_m")?;
            }
            if let Some(v) = d.depth_hi_m {
                plan.depth_hi = positive(v, "design.depth_hi_m")?;
            }
            if let Some(v) = d.resolution_m {
                plan.resolution = positive(v, "design.resolution_m")?;
            }
            if plan.depth_hi <= plan.depth_lo {
                return Err(Error::invalid("design.depth_hi_m", "must exceed depth_lo_m"));
            }
            Some(plan)
        }
        None => None,
    };

    let spec = ScenarioSpec {
        kind: doc.scenario,
        units: unit,
        notes: doc.notes.clone(),
        grid,
        material,
        surface,
        wall,
        fixed,
        source,
        init,
        solver,
        geometry,
        modifiers,
        sweep,
        design,
    };
    // Surface regions, source boxes and the initial field are checked
    // against the grid here so that a bad file fails before any run.
    spec.effective_material()?;
    spec.sources()?;
    spec.initial_field()?;
    if let Some(plan) = &spec.sweep {
        let base = spec.clone();
        for (n, &v) in plan.values.iter().enumerate() {
            base.with_parameter(plan.param, v).map_err(|e| match e {
                Error::Invalid { reason, .. } => Error::invalid(format!("sweep.values[{n}]"), reason),
                other => other,
            })?;
        }
    }
    Ok(spec)
}

/// Inverse of [`from_document`]; temperatures are written in `spec.units`.
pub fn to_document(spec: &ScenarioSpec) -> ConfigDocument {
    let unit = spec.units;
    let temp = |v: f64| convert_temperature(v, TemperatureUnit::Celsius, unit);
    let delta = |v: f64| unit.delta_from_kelvin(v);
    let names = |faces: &[Face]| faces.iter().map(|f| f.name().to_string()).collect::<Vec<_>>();

    ConfigDocument {
        scenario: spec.kind,
        units: Some(unit),
        notes: spec.notes.clone(),
        grid: GridDoc {
            dims: spec.grid.dims(),
            lengths_m: spec.grid.lengths().to_vec(),
            cells: spec.grid.cell_counts().to_vec(),
        },
        material: MaterialDoc {
            rho: spec.material.density(),
            c: spec.material.specific_heat(),
            k: spec.material.conductivity(),
        },
        surface: spec.surface.map(|s| SurfaceDoc {
            h_air: s.h_air,
            ambient: temp(s.ambient),
            area_to_volume: s.area_to_volume,
        }),
        wall: spec.wall.as_ref().map(|w| WallDoc {
            k_wall: w.spec.conductivity(),
            thickness_m: w.spec.thickness(),
            area_m2: w.area,
            exterior: temp(w.spec.exterior()),
            faces: Some(names(&w.faces)),
        }),
        fixed: spec.fixed.as_ref().map(|f| FixedDoc {
            temp: temp(f.temp),
            faces: names(&f.faces),
        }),
        source: spec.source.as_ref().map(|s| SourceDoc {
            power: s.power,
            region: RegionDoc {
                lo: s.lo.clone(),
                hi: s.hi.clone(),
            },
        }),
        init: InitDoc {
            uniform: spec.init.uniform.map(temp),
            regions: (!spec.init.regions.is_empty()).then(|| {
                spec.init
                    .regions
                    .iter()
                    .map(|r| InitRegionDoc {
                        lo: r.lo.clone(),
                        hi: r.hi.clone(),
                        temp: temp(r.temp),
                    })
                    .collect()
            }),
        },
        time: TimeDoc {
            dt_s: spec.solver.dt,
            end_s: spec.solver.end_time,
            snapshot_s: spec.solver.snapshot_interval,
            series: Some(if spec.solver.series_every_step {
                SeriesMode::Step
            } else {
                SeriesMode::Snapshot
            }),
            allow_unstable: Some(spec.solver.allow_unstable),
        },
        steady: Some(SteadyDoc {
            epsilon: delta(spec.solver.steady_tolerance),
            window_s: spec.solver.steady_window,
        }),
        geometry: spec.geometry.as_ref().map(|g| GeometryDoc {
            length_m: g.length,
            width_m: g.width,
            body_volume_m3: g.body_volume,
            pipe_diameter_m: g.pipe_diameter,
            supply_delta: g.supply_delta_t.map(delta),
        }),
        modifiers: Some(ModifiersDoc {
            mixing_factor: spec.modifiers.mixing,
            surface_factor: spec.modifiers.surface,
        }),
        sweep: spec.sweep.as_ref().map(|s| SweepDoc {
            param: s.param,
            values: s.values.clone(),
        }),
        design: spec.design.as_ref().map(|d| DesignDoc {
            target: temp(d.target),
            tolerance: delta(d.tolerance),
            depth_lo_m: Some(d.depth_lo),
            depth_hi_m: Some(d.depth_hi),
            resolution_m: Some(d.resolution),
        }),
    }
}
