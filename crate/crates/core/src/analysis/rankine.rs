use serde::Serialize;

use crate::convex::Potential;
use crate::numerics::fit_line;
use crate::solver::{GridField, Trajectory};
use crate::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct JumpSample {
    pub t: f64,
    /// Sub-cell jump location: right face of the last full cell plus the
    /// fill fraction of the partial cell.
    pub x: f64,
    pub u_plus: f64,
    pub u_minus: f64,
    /// (u⁺ − u⁻) over the variation of u across the two cells behind the front.
    pub ratio: f64,
    /// Face flux between the last full and the partial cell divided by u⁺.
    pub trace_ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RankineHugoniotReport {
    pub jump_detected: bool,
    /// "jump" or "smooth".
    pub regime: String,
    pub samples: Vec<JumpSample>,
    pub velocity: f64,
    pub predicted: f64,
    pub relative_error: f64,
    pub trace_ratio_mean: f64,
    pub trace_relative_error: f64,
}

fn right_jump(u: &GridField, p: &Potential, jump_threshold: f64) -> Option<JumpSample> {
    let n = u.n()[0];
    let dx = u.dx()[0];
    let v = u.values();
    let peak = u.max_value();
    if peak <= 0.0 {
        return None;
    }
    let last = (0..n).rev().find(|&i| v[i] > 1e-12 * peak)?;
    if last < 4 || last + 3 >= n {
        return None;
    }
    // the outermost cell is partially filled unless it is level with the one
    // behind it, which then carries the trace
    let (i, partial) = if v[last] < 0.9 * v[last - 1] { (last - 1, v[last]) } else { (last, 0.0) };
    let u_plus = (v[i] + v[i - 1] + v[i - 2]) / 3.0;
    let u_minus = (v[last + 1] + v[last + 2] + v[last + 3]) / 3.0;
    let var = (v[i] - v[i - 2]).abs().max(f64::MIN_POSITIVE);
    let ratio = (v[i] - u_minus) / var;
    if ratio < jump_threshold {
        return None;
    }
    let um = 0.5 * (v[i] + partial);
    let w = p.lengthscale() * (partial - v[i]) / (dx * um);
    let trace_ratio = p.flux2(&[w])[0].abs() * v[i] / u_plus;
    let x = u.lo()[0] + (i + 1) as f64 * dx + partial / v[i] * dx;
    Some(JumpSample { t: u.time(), x, u_plus, u_minus, ratio, trace_ratio })
}

/// Tracks the right edge of a 1D solution. When a jump is present at every
/// snapshot of the window its velocity is fitted and compared with Φ_∞(+1).
pub fn rankine_hugoniot_check(traj: &Trajectory, p: &Potential, jump_threshold: f64, window: (f64, f64)) -> Result<RankineHugoniotReport> {
    if traj.initial().dim() != 1 || p.dim() != 1 {
        return Err(Error::InvalidParameter("jump tracking needs a 1D trajectory".into()));
    }
    if !(jump_threshold > 1.0) {
        return Err(Error::InvalidParameter(format!("jump threshold must exceed 1, got {jump_threshold}")));
    }
    let predicted = p.recession_exact(&[1.0]);
    let mut samples = Vec::new();
    let mut all = true;
    for u in traj.snapshots.iter().filter(|s| s.time() >= window.0 - 1e-12 && s.time() <= window.1 + 1e-12) {
        match right_jump(u, p, jump_threshold) {
            Some(s) => samples.push(s),
            None => all = false,
        }
    }
    let ts: Vec<f64> = samples.iter().map(|s| s.t).collect();
    let xs: Vec<f64> = samples.iter().map(|s| s.x).collect();
    let fit = fit_line(&ts, &xs);
    let jump_detected = all && fit.is_some();
    let velocity = fit.map(|f| f.0).unwrap_or(f64::NAN);
    let trace_ratio_mean = if samples.is_empty() { f64::NAN } else { samples.iter().map(|s| s.trace_ratio).sum::<f64>() / samples.len() as f64 };
    Ok(RankineHugoniotReport {
        jump_detected,
        regime: if jump_detected { "jump" } else { "smooth" }.to_string(),
        velocity,
        predicted,
        relative_error: (velocity - predicted).abs() / predicted,
        trace_ratio_mean,
        trace_relative_error: (trace_ratio_mean - predicted).abs() / predicted,
        samples,
    })
}
