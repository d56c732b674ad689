use serde::Serialize;

use crate::convex::{wulff_shape, Potential};
use crate::geometry::{contained_within, extract_support, minkowski_dilate, SupportSet, ARC_SAMPLES};
use crate::solver::{evolve_with, positive_part_l1, GridField, SchemeOptions};
use crate::{Error, Result};

const CONTRACTION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Serialize)]
pub struct PairOutcome {
    /// ‖(u(T) − v(T))⁺‖₁
    pub lhs: f64,
    /// ‖(u₀ − v₀)⁺‖₁
    pub rhs: f64,
    pub contraction_holds: bool,
    /// Set when u₀ ≤ v₀: whether u(T) ≤ v(T) + tol everywhere.
    pub ordered: bool,
    pub comparison_holds: Option<bool>,
    pub max_violation: f64,
    pub mass_drift: f64,
    pub min_value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonReport {
    pub t_final: f64,
    pub pairs: Vec<PairOutcome>,
    pub max_mass_drift: f64,
    pub all_nonnegative: bool,
    pub all_hold: bool,
}

/// Evolves each pair to time T on its common grid and checks L¹ contraction
/// of the positive part and, for ordered pairs, pointwise comparison.
pub fn comparison_suite(p: &Potential, pairs: &[(GridField, GridField)], t_final: f64, cfl: f64, opts: SchemeOptions) -> Result<ComparisonReport> {
    let mut out = Vec::with_capacity(pairs.len());
    for (u0, v0) in pairs {
        if !u0.same_grid(v0) {
            return Err(Error::GridMismatch("comparison pair lives on different grids".into()));
        }
        let rhs = positive_part_l1(u0, v0)?;
        let ordered = u0.values().iter().zip(v0.values()).all(|(a, b)| a <= b);
        let tu = evolve_with(u0, p, t_final, usize::MAX, cfl, opts)?;
        let tv = evolve_with(v0, p, t_final, usize::MAX, cfl, opts)?;
        let (u, v) = (tu.last(), tv.last());
        let lhs = positive_part_l1(u, v)?;
        let max_violation = u.values().iter().zip(v.values()).map(|(a, b)| a - b).fold(0.0, f64::max);
        let min_value = u.values().iter().chain(v.values()).cloned().fold(f64::INFINITY, f64::min);
        out.push(PairOutcome {
            lhs,
            rhs,
            contraction_holds: lhs <= rhs + CONTRACTION_TOL,
            ordered,
            comparison_holds: ordered.then_some(max_violation <= CONTRACTION_TOL),
            max_violation,
            mass_drift: tu.mass_drift().max(tv.mass_drift()),
            min_value,
        });
    }
    Ok(ComparisonReport {
        t_final,
        max_mass_drift: out.iter().map(|o| o.mass_drift).fold(0.0, f64::max),
        all_nonnegative: out.iter().all(|o| o.min_value >= 0.0),
        all_hold: out.iter().all(|o| o.contraction_holds && o.comparison_holds != Some(false)),
        pairs: out,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SupersolutionReport {
    pub beta: f64,
    pub slack: f64,
    /// (t, max u, support contained in K ⊕ tE)
    pub rows: Vec<(f64, f64, bool)>,
    pub max_value: f64,
    pub bounded: bool,
    pub contained: bool,
}

/// For 0 ≤ u₀ ≤ β 1_K, β 1_{K ⊕ tE} is a supersolution: checks u(t) ≤ β + 1e-10
/// and supp u(t) ⊆ K ⊕ tE up to `slack` at every snapshot.
pub fn supersolution_check(
    p: &Potential,
    u0: &GridField,
    k: &SupportSet,
    beta: f64,
    t_final: f64,
    stride: usize,
    cfl: f64,
    slack: f64,
    opts: SchemeOptions,
) -> Result<SupersolutionReport> {
    if u0.max_value() > beta {
        return Err(Error::InvalidParameter(format!("datum exceeds beta = {beta}: max {}", u0.max_value())));
    }
    let eps = 1e-8 * beta;
    let s0 = extract_support(u0, eps)?;
    if !contained_within(&s0.support, k, u0.min_dx()) {
        return Err(Error::InvalidParameter("datum support is not inside K".into()));
    }
    let e = wulff_shape(p, if u0.dim() == 1 { 2 } else { ARC_SAMPLES })?;
    let traj = evolve_with(u0, p, t_final, stride, cfl, opts)?;
    let mut rows = Vec::new();
    for u in &traj.snapshots {
        let pred = minkowski_dilate(k, &e, u.time() - u0.time())?;
        let m = extract_support(u, eps)?;
        let inside = m.empty || (contained_within(&m.support, &pred, slack) && m.others.iter().all(|o| contained_within(o, &pred, slack)));
        rows.push((u.time(), u.max_value(), inside));
    }
    let max_value = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    Ok(SupersolutionReport {
        beta,
        slack,
        max_value,
        bounded: max_value <= beta + 1e-10,
        contained: rows.iter().all(|r| r.2),
        rows,
    })
}
