use std::path::Path;

use tubheat::config::load_config;
use tubheat::scenarios::{
    continuous_source_1d, design_depth, local_add_1d, local_add_cooling_1d, surface_cooling_2d, sweep, DesignPlan,
    ScenarioSpec, SweepParameter,
};
use tubheat::physics::SurfaceCoolingSpec;
use tubheat::{convert_temperature, Error, TemperatureUnit};

fn reference(name: &str) -> ScenarioSpec {
    load_config(&Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)).unwrap()
}

#[test]
fn corners_cool_first() {
    let spec = reference("surface_cooling_2d.json");
    let r = surface_cooling_2d(&spec).unwrap();
    let g = spec.grid.clone();
    let (nx, ny) = (g.cells(0), g.cells(1));
    for s in &r.snapshots {
        let v = s.field.values();
        let center = v[g.index([nx / 2, ny / 2, 0])];
        for corner in [[0, 0, 0], [nx - 1, 0, 0], [0, ny - 1, 0], [nx - 1, ny - 1, 0]] {
            assert!(v[g.index(corner)] <= center, "t = {}", s.time);
        }
    }
    for w in r.series.windows(2) {
        assert!(w[1].mean < w[0].mean);
    }
}

#[test]
fn without_cooling_nothing_changes() {
    let mut spec = reference("surface_cooling_2d.json");
    spec.wall = None;
    let s = spec.surface.unwrap();
    spec.surface = Some(SurfaceCoolingSpec::new(0.0, s.area_to_volume, s.ambient).unwrap());
    let r = surface_cooling_2d(&spec).unwrap();
    assert_eq!(r.final_field(), &spec.initial_field().unwrap());
}

#[test]
fn hot_end_cools_and_cold_end_warms() {
    let spec = reference("local_add_1d.json");
    let r = local_add_1d(&spec).unwrap();
    let n = spec.grid.cells(0);
    for w in r.snapshots.windows(2) {
        let (a, b) = (w[0].field.values(), w[1].field.values());
        assert!(b[0] <= a[0]);
        assert!(b[n - 1] >= a[n - 1]);
    }
}

#[test]
fn cooling_at_room_temperature_matches_the_adiabatic_run() {
    let mut adiabatic = reference("local_add_1d.json");
    adiabatic.init = tubheat::scenarios::InitialCondition::uniform(30.0);
    let mut cooled = reference("local_add_cooling_1d.json");
    cooled.init = adiabatic.init.clone();
    let s = cooled.surface.unwrap();
    cooled.surface = Some(SurfaceCoolingSpec::new(s.h_air, s.area_to_volume, 30.0).unwrap());
    let a = local_add_1d(&adiabatic).unwrap();
    let c = local_add_cooling_1d(&cooled).unwrap();
    assert_eq!(a.snapshots, c.snapshots);
}

#[test]
fn cooled_mean_settles_at_room_temperature() {
    let spec = reference("local_add_cooling_1d.json");
    let r = local_add_cooling_1d(&spec).unwrap();
    let ambient = spec.surface.unwrap().ambient;
    assert!((r.final_mean() - ambient).abs() < 1e-6);
}

#[test]
fn no_heat_input_settles_below_the_start() {
    let spec = reference("continuous_source_1d.json");
    let rows = continuous_source_1d(&spec, &[0.0]).unwrap();
    let steady = rows.rows[0].steady.unwrap().temperature;
    assert!(steady <= spec.init.uniform.unwrap() + 1e-9);
}

#[test]
fn single_value_sweep_matches_the_source_scenario() {
    let spec = reference("continuous_source_1d.json");
    let a = sweep(&spec, SweepParameter::SourcePower, &[80.0], false).unwrap();
    let b = continuous_source_1d(&spec, &[80.0]).unwrap();
    assert_eq!(a.rows.len(), 1);
    assert_eq!(a.rows, b.rows);
}

#[test]
fn best_q_does_not_depend_on_the_unit() {
    let spec = reference("continuous_source_1d.json");
    let qs = [70.0, 75.0, 80.0, 85.0, 90.0];
    let r = continuous_source_1d(&spec, &qs).unwrap();
    let target_c = 38.5;
    let target_f = convert_temperature(target_c, TemperatureUnit::Celsius, TemperatureUnit::Fahrenheit);
    let best = |target: f64, unit: TemperatureUnit| {
        r.steady_points()
            .into_iter()
            .map(|(q, t)| (q, (convert_temperature(t, TemperatureUnit::Celsius, unit) - target).abs()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap()
            .0
    };
    assert_eq!(best(target_c, TemperatureUnit::Celsius), best(target_f, TemperatureUnit::Fahrenheit));
}

#[test]
fn design_at_the_lower_bound_returns_it() {
    let spec = reference("continuous_source_1d.json");
    let plan = DesignPlan::new(0.0, 0.01);
    let lo = sweep(&spec, SweepParameter::Depth, &[plan.depth_lo], false).unwrap().rows[0].steady.unwrap();
    let outcome = design_depth(&spec, &DesignPlan::new(lo.temperature, 0.01)).unwrap();
    assert_eq!(outcome.water_depth, plan.depth_lo);
    assert_eq!(outcome.iterations, 0);
}

#[test]
fn design_bisects_within_twenty_iterations() {
    let spec = reference("continuous_source_1d.json");
    let plan = spec.design.clone().unwrap();
    let outcome = design_depth(&spec, &plan).unwrap();
    assert!(outcome.iterations <= 20);
    assert!((outcome.steady_temperature - plan.target).abs() <= plan.tolerance);
    assert!(outcome.faucet.is_some() && outcome.geometry.is_some());
}

#[test]
fn unreachable_targets_fail_the_bracket() {
    let spec = reference("continuous_source_1d.json");
    let err = design_depth(&spec, &DesignPlan::new(60.0, 0.1)).unwrap_err();
    assert!(matches!(err, Error::Bracket(_)), "{err:?}");
}

#[test]
fn depth_sweep_needs_cooling() {
    let mut spec = reference("continuous_source_1d.json");
    spec.surface = None;
    assert!(sweep(&spec, SweepParameter::Depth, &[0.3, 0.4], false).is_err());
}
