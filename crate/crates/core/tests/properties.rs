use proptest::prelude::*;

use tubheat::physics::{SourceTerm, SurfaceCoolingSpec};
use tubheat::scenarios::{column_spec, InitialCondition, ScenarioKind};
use tubheat::solver::{diffusion_number, stability_limit};
use tubheat::{
    parse_config, serialize_config, step, total_energy, BoundaryCondition, Boundaries, Error, Face, GridSpec,
    Material, SolverConfig, TemperatureField, WallSpec,
};

fn unit_material() -> Material {
    Material::new(1.0, 1.0, 1.0).unwrap()
}

fn advance(mut f: TemperatureField, m: &Material, sources: &[SourceTerm], bcs: &Boundaries, dt: f64, n: usize) -> Vec<TemperatureField> {
    let mut out = vec![f.clone()];
    for _ in 0..n {
        f = step(&f, m, sources, bcs, dt).unwrap();
        out.push(f.clone());
    }
    out
}

fn grid_and_values() -> impl Strategy<Value = (GridSpec, Vec<f64>)> {
    prop_oneof![
        (2usize..40).prop_map(|n| GridSpec::line(n as f64, n).unwrap()),
        (2usize..10, 2usize..10).prop_map(|(a, b)| GridSpec::new(&[a as f64, b as f64], &[a, b]).unwrap()),
        (2usize..5, 2usize..5, 2usize..5)
            .prop_map(|(a, b, c)| GridSpec::new(&[a as f64, b as f64, c as f64], &[a, b, c]).unwrap()),
    ]
    .prop_flat_map(|g| {
        let n = g.len();
        (Just(g), prop::collection::vec(20.0f64..45.0, n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn insulated_runs_obey_the_maximum_principle((g, values) in grid_and_values(), r in 0.01f64..0.45) {
        let m = unit_material();
        let dt = r / g.inverse_spacing_sq_sum();
        let f = TemperatureField::new(g, values).unwrap();
        let (lo, hi) = (f.min(), f.max());
        for s in advance(f, &m, &[], &Boundaries::insulated(), dt, 40) {
            prop_assert!(s.min() >= lo - 1e-12 && s.max() <= hi + 1e-12);
        }
    }

    #[test]
    fn fixed_boundaries_stay_in_the_hull(
        values in prop::collection::vec(20.0f64..45.0, 3..30),
        boundary in 0.0f64..60.0,
        r in 0.01f64..(1.0 / 3.0),
    ) {
        let n = values.len();
        let g = GridSpec::line(n as f64, n).unwrap();
        let bcs = Boundaries::uniform(BoundaryCondition::FixedTemperature(boundary));
        let f = TemperatureField::new(g, values).unwrap();
        let (lo, hi) = (f.min().min(boundary), f.max().max(boundary));
        for s in advance(f, &unit_material(), &[], &bcs, r, 60) {
            prop_assert!(s.min() >= lo - 1e-12 && s.max() <= hi + 1e-12);
        }
    }

    #[test]
    fn insulated_runs_conserve_energy((g, values) in grid_and_values(), r in 0.01f64..0.5) {
        let m = Material::water();
        let dt = r / (g.inverse_spacing_sq_sum() * tubheat::diffusivity(&m));
        let f = TemperatureField::new(g, values).unwrap();
        let e0 = total_energy(&f, &m);
        for s in advance(f, &m, &[], &Boundaries::insulated(), dt, 50) {
            prop_assert!((total_energy(&s, &m) - e0).abs() <= 1e-12 * e0.abs());
        }
    }

    #[test]
    fn ordered_starts_stay_ordered(
        base in prop::collection::vec(20.0f64..40.0, 2..25),
        bump in prop::collection::vec(0.0f64..5.0, 25),
        exterior in 0.0f64..30.0,
        r in 0.01f64..0.3,
    ) {
        let n = base.len();
        let g = GridSpec::line(n as f64, n).unwrap();
        let m = unit_material();
        let wall = WallSpec::new(0.05, 1.0, exterior).unwrap();
        let bcs = Boundaries::insulated().with(Face::XMax, BoundaryCondition::WallLoss(wall));
        let cool = [SourceTerm::SurfaceCooling(SurfaceCoolingSpec::new(0.1, 0.5, exterior).unwrap())];
        let lower = TemperatureField::new(g.clone(), base.clone()).unwrap();
        let upper = TemperatureField::new(g, base.iter().zip(&bump).map(|(a, b)| a + b).collect()).unwrap();
        let a = advance(lower, &m, &cool, &bcs, r, 40);
        let b = advance(upper, &m, &cool, &bcs, r, 40);
        for (x, y) in a.iter().zip(&b) {
            for (p, q) in x.values().iter().zip(y.values()) {
                prop_assert!(p <= q);
            }
        }
    }

    #[test]
    fn mirrored_starts_give_mirrored_fields(half in prop::collection::vec(20.0f64..45.0, 1..20), r in 0.01f64..0.5) {
        let mut values = half.clone();
        values.extend(half.iter().rev());
        let n = values.len().max(2);
        if values.len() < 2 {
            values.push(values[0]);
        }
        let g = GridSpec::line(n as f64, n).unwrap();
        let f = TemperatureField::new(g, values).unwrap();
        for s in advance(f, &unit_material(), &[], &Boundaries::insulated(), r, 30) {
            let v = s.values();
            for i in 0..n {
                prop_assert_eq!(v[i], v[n - 1 - i]);
            }
        }
    }

    #[test]
    fn offsets_pass_through_unchanged(values in prop::collection::vec(20.0f64..45.0, 2..30), shift in -20.0f64..20.0) {
        let n = values.len();
        let g = GridSpec::line(n as f64, n).unwrap();
        let m = unit_material();
        let a = TemperatureField::new(g.clone(), values.clone()).unwrap();
        let b = TemperatureField::new(g, values.iter().map(|v| v + shift).collect()).unwrap();
        let sa = advance(a, &m, &[], &Boundaries::insulated(), 0.4, 20);
        let sb = advance(b, &m, &[], &Boundaries::insulated(), 0.4, 20);
        for (x, y) in sa.iter().zip(&sb) {
            for (p, q) in x.values().iter().zip(y.values()) {
                prop_assert!((p + shift - q).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn a_uniform_bath_at_room_temperature_stays_put(temp in -10.0f64..90.0, h in 0.0f64..50.0, r in 0.01f64..0.5) {
        let g = GridSpec::new(&[1.5, 0.6], &[6, 4]).unwrap();
        let m = Material::water();
        let dt = r / (g.inverse_spacing_sq_sum() * tubheat::diffusivity(&m));
        let cool = [SourceTerm::SurfaceCooling(SurfaceCoolingSpec::new(h, 3.0, temp).unwrap())];
        let bcs = Boundaries::uniform(BoundaryCondition::WallLoss(WallSpec::new(0.19, 0.02, temp).unwrap()));
        let f = TemperatureField::uniform(g, temp).unwrap();
        let after = advance(f.clone(), &m, &cool, &bcs, dt, 10);
        prop_assert_eq!(after.last().unwrap(), &f);
    }

    #[test]
    fn steps_beyond_the_limit_blow_up(n in 10usize..40, r in 0.55f64..0.8) {
        let g = GridSpec::line(n as f64, n).unwrap();
        let f = TemperatureField::from_fn(g, |p| if (p[0] as usize) % 2 == 0 { 1.0 } else { -1.0 }).unwrap();
        let mut cfg = SolverConfig::new(r, 1000.0 * r, r).unwrap();
        cfg.allow_unstable = true;
        let err = tubheat::run(&f, &unit_material(), &[], &Boundaries::insulated(), &cfg).unwrap_err();
        let blew_up = matches!(err, Error::BlowUp { .. });
        prop_assert!(blew_up, "expected blow-up, got {:?}", err);
    }

    #[test]
    fn the_limit_is_the_half_diffusion_number(
        dims in 1usize..=3,
        lengths in prop::collection::vec(0.1f64..3.0, 3),
        cells in prop::collection::vec(2usize..60, 3),
        k in 0.01f64..5.0,
    ) {
        let g = GridSpec::new(&lengths[..dims], &cells[..dims]).unwrap();
        let m = Material::new(1000.0, 4186.0, k).unwrap();
        let limit = stability_limit(&m, &g);
        prop_assert!((diffusion_number(&m, &g, limit) - 0.5).abs() < 1e-12);
        let coarse = GridSpec::new(
            &lengths[..dims].iter().map(|l| 2.0 * l).collect::<Vec<_>>(),
            &cells[..dims],
        ).unwrap();
        prop_assert!((stability_limit(&m, &coarse) / limit - 4.0).abs() < 1e-9);
    }

    #[test]
    fn configs_round_trip(
        length in 0.5f64..3.0,
        cells in 2usize..50,
        temp in 0.0f64..60.0,
        k in 0.01f64..2.0,
        dt in 0.1f64..10.0,
    ) {
        let solver = SolverConfig::new(dt, 100.0 * dt, 10.0 * dt).unwrap();
        let mut spec = column_spec(ScenarioKind::LocalAdd1d, length, cells, InitialCondition::uniform(temp), solver).unwrap();
        spec.material = Material::new(1000.0, 4186.0, k).unwrap();
        let text = serialize_config(&spec);
        prop_assert_eq!(parse_config(&text).unwrap(), spec);
    }
}
