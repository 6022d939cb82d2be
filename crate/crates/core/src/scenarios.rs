//! Ready-made experiments: surface cooling of a 2-D water surface, local hot
//! water addition in 1-D (with and without air cooling), a continuous
//! heat source, parameter sweeps, and the bisection search for the water
//! depth that holds a target bath temperature.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boundary::{BoundaryCondition, Boundaries, WallSpec};
use crate::error::{Error, Result};
use crate::field::TemperatureField;
use crate::geometry::TubGeometry;
use crate::grid::{Face, GridSpec};
use crate::material::Material;
use crate::physics::{
    faucet_heat_requirement, faucet_velocity, pipe_area, wall_loss_rate, water_level_rise, HeatSourceSpec,
    SourceTerm, SurfaceCoolingSpec,
};
use crate::solver::{run, stability_limit, SimulationResult, SolverConfig, SteadyState};
use crate::units::TemperatureUnit;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScenarioKind {
    #[serde(rename = "surface_cooling_2d")]
    SurfaceCooling2d,
    #[serde(rename = "local_add_1d")]
    LocalAdd1d,
    #[serde(rename = "local_add_cooling_1d")]
    LocalAddCooling1d,
    #[serde(rename = "continuous_source_1d")]
    ContinuousSource1d,
    #[serde(rename = "sweep")]
    Sweep,
    #[serde(rename = "design_depth")]
    DesignDepth,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 6] = [
        ScenarioKind::SurfaceCooling2d,
        ScenarioKind::LocalAdd1d,
        ScenarioKind::LocalAddCooling1d,
        ScenarioKind::ContinuousSource1d,
        ScenarioKind::Sweep,
        ScenarioKind::DesignDepth,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::SurfaceCooling2d => "surface_cooling_2d",
            ScenarioKind::LocalAdd1d => "local_add_1d",
            ScenarioKind::LocalAddCooling1d => "local_add_cooling_1d",
            ScenarioKind::ContinuousSource1d => "continuous_source_1d",
            ScenarioKind::Sweep => "sweep",
            ScenarioKind::DesignDepth => "design_depth",
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ScenarioKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::invalid("scenario", format!("unknown scenario `{s}`")))
    }
}

/// Axis-aligned box in metres with a temperature.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InitRegion {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub temp: f64,
}

/// Starting temperatures. Regions are painted in order over the uniform
/// background; without a background they must cover every cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InitialCondition {
    pub uniform: Option<f64>,
    pub regions: Vec<InitRegion>,
}

impl InitialCondition {
    pub fn uniform(temp: f64) -> Self {
        InitialCondition {
            uniform: Some(temp),
            regions: Vec::new(),
        }
    }

    pub fn build(&self, grid: &GridSpec) -> Result<TemperatureField> {
        let mut covered = vec![self.uniform.is_some(); grid.len()];
        let mut field = TemperatureField::uniform(grid.clone(), self.uniform.unwrap_or(0.0))
            .map_err(|_| Error::invalid("init.uniform", "must be finite"))?;
        for (n, r) in self.regions.iter().enumerate() {
            let path = format!("init.regions[{n}]");
            if !r.temp.is_finite() {
                return Err(Error::invalid(format!("{path}.temp"), "must be finite"));
            }
            let cells = grid.cell_box(&r.lo, &r.hi, &path)?;
            field.fill_box(&cells, r.temp)?;
            for (idx, c) in covered.iter_mut().enumerate() {
                if cells.contains(grid.coords(idx)) {
                    *c = true;
                }
            }
        }
        if let Some(idx) = covered.iter().position(|c| !c) {
            return Err(Error::invalid(
                "init.regions",
                format!("cell {idx} is not covered and no uniform background is set"),
            ));
        }
        Ok(field)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WallConfig {
    pub spec: WallSpec,
    /// Wetted wall area S (m²) for the lumped wall-loss balance.
    pub area: f64,
    pub faces: Vec<Face>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FixedConfig {
    pub temp: f64,
    pub faces: Vec<Face>,
}

/// Volumetric heat source `power` (W/m³) over a box given in metres.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SourceConfig {
    pub power: f64,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

/// Tub dimensions used by the design search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DesignGeometry {
    pub length: f64,
    pub width: f64,
    pub body_volume: f64,
    pub pipe_diameter: f64,
    /// Temperature drop (K) of the faucet water as it mixes into the bath.
    pub supply_delta_t: Option<f64>,
}

/// Scalar knobs for bather activity and bubble cover.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Modifiers {
    /// Multiplies k (stirring by the bather).
    pub mixing: f64,
    /// Multiplies ΔA/ΔV (> 1 splashing, < 1 bubble cover).
    pub surface: f64,
}

impl Default for Modifiers {
    fn default() -> Self {
        Modifiers {
            mixing: 1.0,
            surface: 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SweepParameter {
    /// Water depth h_w (m); sets ΔA/ΔV = 1/h_w.
    #[serde(rename = "depth")]
    Depth,
    /// Water conductivity k (W/(m·K)).
    #[serde(rename = "k")]
    Conductivity,
    /// Source power Q.
    #[serde(rename = "Q")]
    SourcePower,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::Depth => "depth",
            SweepParameter::Conductivity => "k",
            SweepParameter::SourcePower => "Q",
        }
    }
}

impl fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "depth" => Ok(SweepParameter::Depth),
            "k" => Ok(SweepParameter::Conductivity),
            "Q" | "q" => Ok(SweepParameter::SourcePower),
            other => Err(Error::invalid("sweep.param", format!("unknown parameter `{other}` (depth, k, Q)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPlan {
    pub param: SweepParameter,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DesignPlan {
    /// Target steady temperature (°C).
    pub target: f64,
    /// Allowed |steady − target| (K).
    pub tolerance: f64,
    pub depth_lo: f64,
    pub depth_hi: f64,
    pub resolution: f64,
}

impl DesignPlan {
    pub const DEFAULT_DEPTH_LO: f64 = 0.2;
    pub const DEFAULT_DEPTH_HI: f64 = 0.9;
    pub const DEFAULT_RESOLUTION: f64 = 1e-3;

    pub fn new(target: f64, tolerance: f64) -> Self {
        DesignPlan {
            target,
            tolerance,
            depth_lo: Self::DEFAULT_DEPTH_LO,
            depth_hi: Self::DEFAULT_DEPTH_HI,
            resolution: Self::DEFAULT_RESOLUTION,
        }
    }
}

/// Everything needed to run one experiment. Temperatures are °C.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioSpec {
    pub kind: ScenarioKind,
    /// Unit used for config temperatures and reports.
    pub units: TemperatureUnit,
    pub notes: Vec<String>,
    pub grid: GridSpec,
    pub material: Material,
    pub surface: Option<SurfaceCoolingSpec>,
    pub wall: Option<WallConfig>,
    pub fixed: Option<FixedConfig>,
    pub source: Option<SourceConfig>,
    pub init: InitialCondition,
    pub solver: SolverConfig,
    pub geometry: Option<DesignGeometry>,
    pub modifiers: Modifiers,
    pub sweep: Option<SweepPlan>,
    pub design: Option<DesignPlan>,
}

impl ScenarioSpec {
    /// Material with the mixing multiplier applied to k.
    pub fn effective_material(&self) -> Result<Material> {
        self.material
            .with_conductivity(self.material.conductivity() * self.modifiers.mixing)
    }

    /// Surface cooling with the coverage multiplier applied to ΔA/ΔV.
    pub fn effective_surface(&self) -> Result<Option<SurfaceCoolingSpec>> {
        self.surface
            .map(|s| SurfaceCoolingSpec::new(s.h_air, s.area_to_volume * self.modifiers.surface, s.ambient))
            .transpose()
    }

    pub fn sources(&self) -> Result<Vec<SourceTerm>> {
        let mut out = Vec::new();
        if let Some(s) = self.effective_surface()? {
            out.push(SourceTerm::SurfaceCooling(s));
        }
        if let Some(src) = &self.source {
            let region = self.grid.cell_box(&src.lo, &src.hi, "source.region")?;
            out.push(SourceTerm::Heat(HeatSourceSpec::new(src.power, region, &self.grid)?));
        }
        Ok(out)
    }

    pub fn boundaries(&self) -> Boundaries {
        let mut b = Boundaries::insulated();
        if let Some(fixed) = &self.fixed {
            for &f in &fixed.faces {
                b.set(f, BoundaryCondition::FixedTemperature(fixed.temp));
            }
        }
        if let Some(wall) = &self.wall {
            for &f in &wall.faces {
                b.set(f, BoundaryCondition::WallLoss(wall.spec));
            }
        }
        b
    }

    pub fn initial_field(&self) -> Result<TemperatureField> {
        self.init.build(&self.grid)
    }

    pub fn stability_limit(&self) -> Result<f64> {
        Ok(stability_limit(&self.effective_material()?, &self.grid))
    }

    /// Runs the configured model once.
    pub fn simulate(&self) -> Result<SimulationResult> {
        let m = self.effective_material()?;
        run(&self.initial_field()?, &m, &self.sources()?, &self.boundaries(), &self.solver)
    }

    /// Copy of the spec with one sweep parameter changed.
    pub fn with_parameter(&self, param: SweepParameter, value: f64) -> Result<ScenarioSpec> {
        if !(value.is_finite()) {
            return Err(Error::invalid("sweep.values", "values must be finite"));
        }
        let mut spec = self.clone();
        match param {
            SweepParameter::Depth => {
                if value <= 0.0 {
                    return Err(Error::invalid("sweep.values", format!("depth must be > 0, got {value}")));
                }
                let s = spec
                    .surface
                    .ok_or_else(|| Error::invalid("surface", "a depth sweep needs surface cooling"))?;
                spec.surface = Some(SurfaceCoolingSpec::new(s.h_air, 1.0 / value, s.ambient)?);
            }
            SweepParameter::Conductivity => {
                spec.material = spec.material.with_conductivity(value)?;
            }
            SweepParameter::SourcePower => {
                let src = spec
                    .source
                    .as_mut()
                    .ok_or_else(|| Error::invalid("source", "a Q sweep needs a heat source"))?;
                src.power = value;
            }
        }
        Ok(spec)
    }
}

fn require(cond: bool, field: &str, reason: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::invalid(field, reason))
    }
}

/// Conduction plus air cooling of a 2-D water surface, no heat input.
pub fn surface_cooling_2d(spec: &ScenarioSpec) -> Result<SimulationResult> {
    require(spec.grid.dims() == 2, "grid.dims", "surface_cooling_2d needs a 2-D grid")?;
    require(spec.surface.is_some(), "surface", "surface_cooling_2d needs surface cooling")?;
    require(spec.source.is_none(), "source", "surface_cooling_2d takes no heat source")?;
    spec.simulate()
}

/// Pure conduction after hot water is added to part of a 1-D column.
pub fn local_add_1d(spec: &ScenarioSpec) -> Result<SimulationResult> {
    require(spec.grid.dims() == 1, "grid.dims", "local_add_1d needs a 1-D grid")?;
    require(spec.surface.is_none(), "surface", "local_add_1d has no surface cooling")?;
    require(spec.source.is_none(), "source", "local_add_1d takes no heat source")?;
    require(
        spec.wall.is_none() && spec.fixed.is_none(),
        "wall",
        "local_add_1d uses insulated ends",
    )?;
    spec.simulate()
}

/// Local hot water addition with air cooling.
pub fn local_add_cooling_1d(spec: &ScenarioSpec) -> Result<SimulationResult> {
    require(spec.grid.dims() == 1, "grid.dims", "local_add_cooling_1d needs a 1-D grid")?;
    require(spec.surface.is_some(), "surface", "local_add_cooling_1d needs surface cooling")?;
    require(spec.source.is_none(), "source", "local_add_cooling_1d takes no heat source")?;
    spec.simulate()
}

fn check_continuous_source(spec: &ScenarioSpec) -> Result<()> {
    require(spec.grid.dims() == 1, "grid.dims", "continuous_source_1d needs a 1-D grid")?;
    require(spec.source.is_some(), "source", "continuous_source_1d needs a heat source")?;
    require(spec.surface.is_some(), "surface", "continuous_source_1d needs surface cooling")?;
    require(
        spec.init.uniform.is_some() && spec.init.regions.is_empty(),
        "init",
        "continuous_source_1d starts from a uniform temperature",
    )
}

/// Runs a single continuous-source simulation at the configured power.
pub fn continuous_source_run(spec: &ScenarioSpec) -> Result<SimulationResult> {
    check_continuous_source(spec)?;
    spec.simulate()
}

/// Steady temperature for each heat input in `q_values`.
pub fn continuous_source_1d(spec: &ScenarioSpec, q_values: &[f64]) -> Result<SweepResult> {
    check_continuous_source(spec)?;
    sweep(spec, SweepParameter::SourcePower, q_values, false)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub steady: Option<SteadyState>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub parameter: SweepParameter,
    pub rows: Vec<SweepRow>,
    pub runs: Vec<SimulationResult>,
}

impl SweepResult {
    /// (value, steady °C) for rows that reached steady state.
    pub fn steady_points(&self) -> Vec<(f64, f64)> {
        self.rows
            .iter()
            .filter_map(|r| r.steady.map(|s| (r.value, s.temperature)))
            .collect()
    }
}

/// Reruns the scenario once per value. With `parallel` the runs execute on
/// the rayon pool; rows always follow the input order.
pub fn sweep(spec: &ScenarioSpec, param: SweepParameter, values: &[f64], parallel: bool) -> Result<SweepResult> {
    if values.is_empty() {
        return Err(Error::invalid("sweep.values", "at least one value is required"));
    }
    let increasing = values.windows(2).all(|w| w[1] > w[0]);
    let decreasing = values.windows(2).all(|w| w[1] < w[0]);
    if !(increasing || decreasing) {
        return Err(Error::invalid("sweep.values", "values must be strictly monotone"));
    }
    let specs = values
        .iter()
        .map(|&v| spec.with_parameter(param, v))
        .collect::<Result<Vec<_>>>()?;
    // Refuse the whole sweep up front if any entry would be unstable.
    if !spec.solver.allow_unstable {
        for s in &specs {
            let limit = s.stability_limit()?;
            if s.solver.dt > limit {
                return Err(Error::Unstable {
                    dt: s.solver.dt,
                    limit,
                });
            }
        }
    }
    let runs: Vec<Result<SimulationResult>> = if parallel {
        specs.par_iter().map(ScenarioSpec::simulate).collect()
    } else {
        specs.iter().map(ScenarioSpec::simulate).collect()
    };
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;
    let rows = values
        .iter()
        .zip(&runs)
        .map(|(&value, r)| SweepRow { value, steady: r.steady })
        .collect();
    Ok(SweepResult {
        parameter: param,
        rows,
        runs,
    })
}

/// Lumped faucet sizing that goes with a design.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FaucetPlan {
    /// Heat needed to hold the bath against air cooling (W).
    pub q_maintain: f64,
    /// Wall loss magnitude (W).
    pub q_wall: f64,
    /// Heat the faucet must supply (W).
    pub q_supply: f64,
    pub supply_delta_t: f64,
    pub pipe_area: f64,
    pub velocity: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DesignOutcome {
    pub water_depth: f64,
    pub total_depth: f64,
    pub level_rise: f64,
    pub steady_temperature: f64,
    pub target: f64,
    pub iterations: u32,
    pub geometry: Option<TubGeometry>,
    pub faucet: Option<FaucetPlan>,
}

fn steady_at_depth(spec: &ScenarioSpec, depth: f64) -> Result<f64> {
    let r = spec.with_parameter(SweepParameter::Depth, depth)?.simulate()?;
    r.steady
        .map(|s| s.temperature)
        .ok_or_else(|| Error::NotSteady(format!("no steady state at depth {depth} m within the end time")))
}

/// Bisection over the water depth h_w for the depth whose steady temperature
/// is within `plan.tolerance` of `plan.target`. The steady temperature rises
/// with depth because ΔA/ΔV = 1/h_w.
pub fn design_depth(spec: &ScenarioSpec, plan: &DesignPlan) -> Result<DesignOutcome> {
    let geometry = spec
        .geometry
        .as_ref()
        .ok_or_else(|| Error::invalid("geometry", "design_depth needs tub geometry"))?;
    if !(plan.depth_lo > 0.0 && plan.depth_hi > plan.depth_lo) {
        return Err(Error::invalid("design", "need 0 < depth_lo < depth_hi"));
    }
    if !(plan.tolerance > 0.0 && plan.resolution > 0.0) {
        return Err(Error::invalid("design", "tolerance and resolution must be > 0"));
    }

    let (mut lo, mut hi) = (plan.depth_lo, plan.depth_hi);
    let s_lo = steady_at_depth(spec, lo)?;
    let s_hi = steady_at_depth(spec, hi)?;
    let mut iterations = 0;

    let (depth, steady) = if (s_lo - plan.target).abs() <= plan.tolerance {
        (lo, s_lo)
    } else if (s_hi - plan.target).abs() <= plan.tolerance {
        (hi, s_hi)
    } else {
        let (below, above) = (s_lo.min(s_hi), s_lo.max(s_hi));
        if !(below < plan.target && plan.target < above) {
            return Err(Error::Bracket(format!(
                "target {} outside [{below}, {above}] reachable for depths [{lo}, {hi}] m",
                plan.target
            )));
        }
        let rising = s_hi > s_lo;
        while hi - lo > plan.resolution {
            let mid = 0.5 * (lo + hi);
            let s = steady_at_depth(spec, mid)?;
            iterations += 1;
            if (s < plan.target) == rising {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mid = 0.5 * (lo + hi);
        (mid, steady_at_depth(spec, mid)?)
    };
    if (steady - plan.target).abs() > plan.tolerance {
        return Err(Error::Bracket(format!(
            "depth {depth} m gives {steady}, outside the tolerance {} of {}",
            plan.tolerance, plan.target
        )));
    }

    let footprint = geometry.length * geometry.width;
    let level_rise = water_level_rise(geometry.body_volume, footprint)?;
    let total_depth = depth + level_rise;

    let tub = match &spec.wall {
        Some(w) => Some(TubGeometry::new(
            geometry.length,
            geometry.width,
            depth,
            total_depth,
            w.area,
            w.spec.thickness(),
            w.spec.conductivity(),
        )?),
        None => None,
    };
    let faucet = match (&spec.wall, &spec.source, geometry.supply_delta_t) {
        (Some(w), Some(src), Some(supply_delta_t)) => {
            let q_wall = wall_loss_rate(
                w.spec.conductivity(),
                w.spec.thickness(),
                w.area,
                steady - w.spec.exterior(),
            )?;
            let q_supply = faucet_heat_requirement(src.power, q_wall);
            let area = pipe_area(geometry.pipe_diameter);
            Some(FaucetPlan {
                q_maintain: src.power,
                q_wall,
                q_supply,
                supply_delta_t,
                pipe_area: area,
                velocity: faucet_velocity(q_supply, &spec.material, supply_delta_t, area)?,
            })
        }
        _ => None,
    };

    Ok(DesignOutcome {
        water_depth: depth,
        total_depth,
        level_rise,
        steady_temperature: steady,
        target: plan.target,
        iterations,
        geometry: tub,
        faucet,
    })
}

/// Runs a single-simulation scenario according to its kind.
pub fn run_scenario(spec: &ScenarioSpec) -> Result<SimulationResult> {
    match spec.kind {
        ScenarioKind::SurfaceCooling2d => surface_cooling_2d(spec),
        ScenarioKind::LocalAdd1d => local_add_1d(spec),
        ScenarioKind::LocalAddCooling1d => local_add_cooling_1d(spec),
        ScenarioKind::ContinuousSource1d => continuous_source_run(spec),
        ScenarioKind::Sweep | ScenarioKind::DesignDepth => spec.simulate(),
    }
}

/// A 1-D column of water with defaults for quick experiments.
pub fn column_spec(kind: ScenarioKind, length: f64, cells: usize, init: InitialCondition, solver: SolverConfig) -> Result<ScenarioSpec> {
    Ok(ScenarioSpec {
        kind,
        units: TemperatureUnit::Celsius,
        notes: Vec::new(),
        grid: GridSpec::line(length, cells)?,
        material: Material::water(),
        surface: None,
        wall: None,
        fixed: None,
        source: None,
        init,
        solver,
        geometry: None,
        modifiers: Modifiers::default(),
        sweep: None,
        design: None,
    })
}
