use serde::{Deserialize, Serialize};

use super::steady::{detect_steady, SteadyState};
use super::stepper::Stepper;
use super::stability_limit;
use crate::boundary::Boundaries;
use crate::error::{Error, Result};
use crate::field::{total_energy, TemperatureField};
use crate::material::Material;
use crate::physics::SourceTerm;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub dt: f64,
    pub end_time: f64,
    pub snapshot_interval: f64,
    /// ε in K/s.
    pub steady_tolerance: f64,
    pub steady_window: f64,
    pub allow_unstable: bool,
    /// Record the scalar series after every step instead of at snapshots.
    pub series_every_step: bool,
}

impl SolverConfig {
    pub fn new(dt: f64, end_time: f64, snapshot_interval: f64) -> Result<Self> {
        let cfg = SolverConfig {
            dt,
            end_time,
            snapshot_interval,
            steady_tolerance: 1e-6,
            steady_window: snapshot_interval * 10.0,
            allow_unstable: false,
            series_every_step: false,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_steady(mut self, tolerance: f64, window: f64) -> Result<Self> {
        self.steady_tolerance = tolerance;
        self.steady_window = window;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::invalid("time.dt_s", format!("must be > 0, got {}", self.dt)));
        }
        if !(self.end_time.is_finite() && self.end_time >= 0.0) {
            return Err(Error::invalid("time.end_s", format!("must be >= 0, got {}", self.end_time)));
        }
        if !(self.snapshot_interval.is_finite() && self.snapshot_interval >= self.dt) {
            return Err(Error::invalid(
                "time.snapshot_s",
                format!("must be >= dt_s ({}), got {}", self.dt, self.snapshot_interval),
            ));
        }
        if !(self.steady_tolerance.is_finite() && self.steady_tolerance > 0.0) {
            return Err(Error::invalid("steady.epsilon", "must be > 0"));
        }
        if !(self.steady_window.is_finite() && self.steady_window > 0.0) {
            return Err(Error::invalid("steady.window_s", "must be > 0"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub time: f64,
    pub field: TemperatureField,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub time: f64,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    /// J relative to 0 °C.
    pub energy: f64,
}

impl SeriesRow {
    fn of(time: f64, field: &TemperatureField, m: &Material) -> Self {
        SeriesRow {
            time,
            mean: field.mean(),
            min: field.min(),
            max: field.max(),
            energy: total_energy(field, m),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimulationResult {
    pub snapshots: Vec<Snapshot>,
    pub series: Vec<SeriesRow>,
    pub steady: Option<SteadyState>,
    pub steps: u64,
    pub dt: f64,
    pub dt_stable_max: f64,
}

impl SimulationResult {
    pub fn final_field(&self) -> &TemperatureField {
        &self.snapshots.last().expect("a result always holds the initial snapshot").field
    }

    pub fn final_mean(&self) -> f64 {
        self.series.last().map(|r| r.mean).unwrap_or(f64::NAN)
    }

    pub fn snapshot_at(&self, time: f64) -> Option<&Snapshot> {
        self.snapshots.iter().find(|s| (s.time - time).abs() <= 1e-9 * time.abs().max(1.0))
    }
}

/// Integrates from `initial` to `cfg.end_time`.
///
/// Steps have uniform length `cfg.dt` except a shorter final step that lands
/// exactly on the end time. Snapshots are taken at t = 0, whenever a multiple
/// of the snapshot interval is crossed, and at the end.
pub fn run(
    initial: &TemperatureField,
    m: &Material,
    sources: &[SourceTerm],
    bcs: &Boundaries,
    cfg: &SolverConfig,
) -> Result<SimulationResult> {
    cfg.validate()?;
    let grid = initial.grid().clone();
    let limit = stability_limit(m, &grid);
    if cfg.dt > limit && !cfg.allow_unstable {
        return Err(Error::Unstable { dt: cfg.dt, limit });
    }
    let stepper = Stepper::new(&grid, m, sources, bcs)?;

    let mut result = SimulationResult {
        snapshots: vec![Snapshot {
            time: 0.0,
            field: initial.clone(),
        }],
        series: vec![SeriesRow::of(0.0, initial, m)],
        steady: None,
        steps: 0,
        dt: cfg.dt,
        dt_stable_max: limit,
    };

    let full_steps = (cfg.end_time / cfg.dt + 1e-9).floor() as u64;
    let remainder = cfg.end_time - full_steps as f64 * cfg.dt;
    let total_steps = full_steps + u64::from(remainder > 1e-9 * cfg.dt);

    let mut current = initial.values().to_vec();
    let mut next = vec![0.0; current.len()];
    let mut last_snapshot_slot = 0u64;

    for n in 1..=total_steps {
        let (t, dt) = if n <= full_steps {
            (n as f64 * cfg.dt, cfg.dt)
        } else {
            (cfg.end_time, remainder)
        };
        if stepper.advance(&current, &mut next, dt).is_some() {
            let time = t;
            return Err(Error::BlowUp {
                step: n,
                time,
                partial: Some(Box::new(result)),
            });
        }
        std::mem::swap(&mut current, &mut next);
        result.steps = n;

        let slot = (t / cfg.snapshot_interval + 1e-9).floor() as u64;
        let at_snapshot = slot > last_snapshot_slot || n == total_steps;
        if at_snapshot {
            last_snapshot_slot = slot;
        }
        if at_snapshot || cfg.series_every_step {
            let field = TemperatureField::from_parts_unchecked(grid.clone(), current.clone());
            result.series.push(SeriesRow::of(t, &field, m));
            if at_snapshot {
                result.snapshots.push(Snapshot { time: t, field });
            }
        }
    }

    result.steady = detect_steady(&result.series, cfg.steady_tolerance, cfg.steady_window);
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;

    fn unit() -> (GridSpec, Material) {
        (GridSpec::line(10.0, 10).unwrap(), Material::new(1.0, 1.0, 1.0).unwrap())
    }

    #[test]
    fn zero_end_time_keeps_initial_only() {
        let (g, m) = unit();
        let f = TemperatureField::from_fn(g, |p| p[0]).unwrap();
        let cfg = SolverConfig::new(0.1, 0.0, 1.0).unwrap();
        let r = run(&f, &m, &[], &Boundaries::insulated(), &cfg).unwrap();
        assert_eq!(r.snapshots.len(), 1);
        assert_eq!(r.series.len(), 1);
        assert_eq!(r.steps, 0);
        assert_eq!(r.snapshots[0].field, f);
    }

    #[test]
    fn snapshot_schedule() {
        let (g, m) = unit();
        let f = TemperatureField::from_fn(g, |p| p[0]).unwrap();
        let cfg = SolverConfig::new(0.1, 1.05, 0.5).unwrap();
        let r = run(&f, &m, &[], &Boundaries::insulated(), &cfg).unwrap();
        let times: Vec<f64> = r.snapshots.iter().map(|s| s.time).collect();
        assert_eq!(r.steps, 11);
        assert_eq!(times.len(), 4);
        assert!((times[1] - 0.5).abs() < 1e-12 && (times[2] - 1.0).abs() < 1e-12);
        assert_eq!(times[3], 1.05);
        for w in r.series.windows(2) {
            assert!(w[1].time > w[0].time);
            assert!(w[1].min <= w[1].mean && w[1].mean <= w[1].max);
        }
    }

    #[test]
    fn every_step_series() {
        let (g, m) = unit();
        let f = TemperatureField::uniform(g, 3.0).unwrap();
        let mut cfg = SolverConfig::new(0.1, 1.0, 0.5).unwrap();
        cfg.series_every_step = true;
        let r = run(&f, &m, &[], &Boundaries::insulated(), &cfg).unwrap();
        assert_eq!(r.series.len(), 11);
        assert_eq!(r.snapshots.len(), 3);
    }

    #[test]
    fn refuses_unstable_dt() {
        let (g, m) = unit();
        let f = TemperatureField::uniform(g, 3.0).unwrap();
        let cfg = SolverConfig::new(0.6, 1.0, 0.6).unwrap();
        let err = run(&f, &m, &[], &Boundaries::insulated(), &cfg).unwrap_err();
        assert!(matches!(err, Error::Unstable { .. }));
    }

    #[test]
    fn blowup_keeps_partial_result() {
        let (g, m) = unit();
        let f = TemperatureField::from_fn(g, |p| if (p[0] as usize) % 2 == 0 { 1.0 } else { -1.0 }).unwrap();
        let mut cfg = SolverConfig::new(0.6, 1000.0, 10.0).unwrap();
        cfg.allow_unstable = true;
        match run(&f, &m, &[], &Boundaries::insulated(), &cfg) {
            Err(Error::BlowUp { step, partial: Some(p), .. }) => {
                assert!(step < 1000);
                assert!(!p.snapshots.is_empty());
            }
            other => panic!("expected blow-up, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_config() {
        assert!(SolverConfig::new(0.0, 1.0, 1.0).is_err());
        assert!(SolverConfig::new(1.0, 1.0, 0.5).is_err());
        assert!(SolverConfig::new(1.0, -1.0, 1.0).is_err());
        assert!(SolverConfig::new(1.0, 1.0, 1.0).unwrap().with_steady(0.0, 1.0).is_err());
    }
}
