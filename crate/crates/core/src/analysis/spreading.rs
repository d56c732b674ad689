use serde::Serialize;

use crate::convex::{wulff_shape, Potential};
use crate::geometry::{contained_within, excess_distance, extract_support, hausdorff_distance, minkowski_dilate, SupportSet, ARC_SAMPLES};
use crate::solver::Trajectory;
use crate::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct SpreadingRow {
    pub t: f64,
    pub measured: SupportSet,
    pub predicted: SupportSet,
    /// None when the measured support is empty.
    pub hausdorff: Option<f64>,
    /// Largest distance of the measured boundary outside the prediction.
    pub excess: f64,
    pub contained: bool,
    pub empty: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpreadingReport {
    pub eps: f64,
    pub slack: f64,
    pub rows: Vec<SpreadingRow>,
    pub max_hausdorff: f64,
    pub max_excess: f64,
    pub all_contained: bool,
    pub any_empty: bool,
}

/// Compares {u(t) > eps} with K₀ ⊕ tE at every snapshot, E the Wulff shape.
pub fn support_spreading_report(traj: &Trajectory, p: &Potential, k0: &SupportSet, eps: f64, slack: f64) -> Result<SpreadingReport> {
    if !p.decay_report().passes_basic || !p.ell().is_finite() {
        return Err(Error::Analysis("the potential fails the decay conditions; dom k is unbounded and no spreading bound exists".into()));
    }
    if !(slack >= 0.0) {
        return Err(Error::InvalidParameter(format!("slack must be >= 0, got {slack}")));
    }
    let dim = traj.initial().dim();
    if k0.dim() != dim || k0.is_empty() {
        return Err(Error::Geometry("K0 must be a nonempty set of the grid dimension".into()));
    }
    let e = wulff_shape(p, if dim == 1 { 2 } else { ARC_SAMPLES })?;
    let t0 = traj.initial().time();
    let mut rows = Vec::with_capacity(traj.snapshots.len());
    for u in &traj.snapshots {
        let m = extract_support(u, eps)?;
        let predicted = minkowski_dilate(k0, &e, u.time() - t0)?;
        let (hausdorff, excess, contained) = if m.empty {
            (None, 0.0, true)
        } else {
            let mut contained = contained_within(&m.support, &predicted, slack);
            let mut excess = excess_distance(&m.support, &predicted)?;
            for o in &m.others {
                contained &= contained_within(o, &predicted, slack);
                excess = excess.max(excess_distance(o, &predicted)?);
            }
            (Some(hausdorff_distance(&m.support, &predicted)?), excess, contained)
        };
        rows.push(SpreadingRow { t: u.time(), measured: m.support, predicted, hausdorff, excess, contained, empty: m.empty });
    }
    Ok(SpreadingReport {
        eps,
        slack,
        max_hausdorff: rows.iter().filter_map(|r| r.hausdorff).fold(0.0, f64::max),
        max_excess: rows.iter().map(|r| r.excess).fold(0.0, f64::max),
        all_contained: rows.iter().all(|r| r.contained),
        any_empty: rows.iter().any(|r| r.empty),
        rows,
    })
}
