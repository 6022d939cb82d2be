use serde::{Deserialize, Serialize};

use super::SeriesRow;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SteadyState {
    /// Mean temperature (°C) at the detection time.
    pub temperature: f64,
    /// Detection time t* in seconds.
    pub time: f64,
}

/// Least-squares slope of `y` against `t`.
pub fn least_squares_slope(points: impl Iterator<Item = (f64, f64)> + Clone) -> Option<f64> {
    let (mut n, mut st, mut sy) = (0usize, 0.0, 0.0);
    for (t, y) in points.clone() {
        n += 1;
        st += t;
        sy += y;
    }
    if n < 2 {
        return None;
    }
    let (tm, ym) = (st / n as f64, sy / n as f64);
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (t, y) in points {
        let dt = t - tm;
        sxx += dt * dt;
        sxy += dt * (y - ym);
    }
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Finds the first time t* at which the mean temperature has been flat,
/// |d(mean)/dt| < `epsilon` (K/s), over the whole trailing window
/// `[t* − window, t*]`. The slope is the least-squares fit over the window's
/// samples.
pub fn detect_steady(series: &[SeriesRow], epsilon: f64, window: f64) -> Option<SteadyState> {
    let first = series.first()?;
    // Guards against t* landing one sample late through rounding of t.
    let slack = 1e-9 * window.max(1.0);
    let mut lo = 0;
    for (j, row) in series.iter().enumerate() {
        if row.time - first.time < window - slack {
            continue;
        }
        while series[lo].time < row.time - window - slack {
            lo += 1;
        }
        let slope = least_squares_slope(series[lo..=j].iter().map(|r| (r.time, r.mean)));
        if let Some(s) = slope {
            if s.abs() < epsilon {
                return Some(SteadyState {
                    temperature: row.mean,
                    time: row.time,
                });
            }
        }
    }
    None
}
