use serde::Serialize;

use crate::convex::Potential;
use crate::numerics::fit_line;
use crate::solver::{GridField, Trajectory};
use crate::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct FrontSpeedEstimate {
    pub direction: Vec<f64>,
    pub threshold: f64,
    pub window: (f64, f64),
    /// (t, distance from the support centroid) for every snapshot in the window.
    pub positions: Vec<(f64, f64)>,
    pub fitted_speed: f64,
    pub fit_residual: f64,
    pub predicted_speed: f64,
    pub valid: bool,
    pub reason: Option<String>,
}

impl FrontSpeedEstimate {
    pub fn relative_error(&self) -> f64 {
        (self.fitted_speed - self.predicted_speed).abs() / self.predicted_speed.abs().max(f64::MIN_POSITIVE)
    }
}

/// Default window: drop the first 20% of the run.
pub fn default_window(traj: &Trajectory) -> (f64, f64) {
    let t0 = traj.initial().time();
    let t1 = traj.last().time();
    (t0 + 0.2 * (t1 - t0), t1)
}

fn centroid(u: &GridField, threshold: f64) -> Option<[f64; 2]> {
    let [nx, ny] = u.n();
    let (mut c, mut n) = ([0.0, 0.0], 0usize);
    for j in 0..ny {
        for i in 0..nx {
            if u.get(i, j) > threshold {
                let x = u.center(i, j);
                c[0] += x[0];
                c[1] += x[1];
                n += 1;
            }
        }
    }
    (n > 0).then(|| [c[0] / n as f64, c[1] / n as f64])
}

/// Distance along the ray from `origin` in direction `dir` to the outermost
/// crossing of u = threshold, interpolating linearly between samples.
pub fn front_position(u: &GridField, origin: [f64; 2], dir: &[f64], threshold: f64) -> Option<f64> {
    let d = u.dim();
    let h = 0.25 * u.min_dx();
    let (lo, hi) = (u.lo(), u.hi());
    let mut s_max = 0.0f64;
    for k in 0..d {
        if dir[k] > 0.0 {
            s_max = s_max.max((hi[k] - origin[k]) / dir[k]);
        } else if dir[k] < 0.0 {
            s_max = s_max.max((lo[k] - origin[k]) / dir[k]);
        }
    }
    let at = |s: f64| {
        let x: Vec<f64> = (0..d).map(|k| origin[k] + s * dir[k]).collect();
        u.interpolate(&x)
    };
    let n = (s_max / h).ceil() as usize;
    let mut prev = at(0.0);
    let mut found = None;
    for m in 1..=n {
        let s = (m as f64 * h).min(s_max);
        let v = at(s);
        if prev > threshold && v <= threshold {
            let s0 = s - h;
            found = Some(s0 + (prev - threshold) / (prev - v) * (s - s0));
        }
        prev = v;
    }
    found
}

/// Fits the speed of the u = threshold level set along `direction` and
/// compares it with Φ_∞(direction).
pub fn front_speed(traj: &Trajectory, p: &Potential, direction: &[f64], threshold: f64, window: (f64, f64)) -> Result<FrontSpeedEstimate> {
    let dim = traj.initial().dim();
    if direction.len() != dim || p.dim() != dim {
        return Err(Error::InvalidParameter(format!("direction has length {}, grid dimension {dim}", direction.len())));
    }
    let norm = direction.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !(norm > 0.0) {
        return Err(Error::InvalidParameter("direction must be nonzero".into()));
    }
    let dir: Vec<f64> = direction.iter().map(|v| v / norm).collect();
    let umax = traj.snapshots.iter().map(|s| s.max_value()).fold(0.0, f64::max);
    if !(threshold > 0.0 && threshold < umax) {
        return Err(Error::InvalidParameter(format!("threshold {threshold} outside (0, max u = {umax})")));
    }
    let (t0, t1) = (traj.initial().time(), traj.last().time());
    if !(window.0 >= t0 - 1e-12 && window.1 <= t1 + 1e-12 && window.0 < window.1) {
        return Err(Error::InvalidParameter(format!("window {window:?} outside the run [{t0}, {t1}]")));
    }
    let predicted_speed = p.recession(&dir, 1e-7).unwrap_or_else(|_| p.recession_exact(&dir));
    let mut positions = Vec::new();
    let mut reason = None;
    for u in traj.snapshots.iter().filter(|s| s.time() >= window.0 - 1e-12 && s.time() <= window.1 + 1e-12) {
        let pos = centroid(u, threshold).and_then(|c| front_position(u, c, &dir, threshold));
        match pos {
            Some(x) => positions.push((u.time(), x)),
            None => {
                reason.get_or_insert_with(|| format!("no crossing of u = {threshold} at t = {}", u.time()));
            }
        }
    }
    let ts: Vec<f64> = positions.iter().map(|p| p.0).collect();
    let xs: Vec<f64> = positions.iter().map(|p| p.1).collect();
    let (fitted_speed, fit_residual) = match fit_line(&ts, &xs) {
        Some((slope, _, rms)) => (slope, rms),
        None => {
            reason.get_or_insert_with(|| format!("fewer than two front positions in window {window:?}"));
            (f64::NAN, f64::NAN)
        }
    };
    Ok(FrontSpeedEstimate {
        direction: dir,
        threshold,
        window,
        positions,
        fitted_speed,
        fit_residual,
        predicted_speed,
        valid: reason.is_none(),
        reason,
    })
}
