use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;

use super::config::{DatumConfig, ExperimentConfig};
use super::plot::{emit_plot_data, PlotData};
use crate::analysis::{
    comparison_suite, default_lambda_samples, default_window, front_speed, rankine_hugoniot_check, subsolution_field, support_spreading_report,
    verify_subsolution, ComparisonReport, FrontSpeedEstimate, RankineHugoniotReport, SpreadingReport, SubsolutionCertificate,
};
use crate::geometry::{extract_support, SupportSet};
use crate::solver::{evolve_with, init_grid, write_snapshot, Datum, GridField};
use crate::{Error, Result};

/// Tolerance for the conservation check.
const MASS_TOL: f64 = 1e-12;

/// Outcome of one assertion-class check.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        Self { name: name.to_string(), passed, detail }
    }
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub out_dir: PathBuf,
    pub checks: Vec<Check>,
    pub boundary_warning: bool,
    pub steps: usize,
}

impl RunSummary {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// 0 when every enabled check passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Overrides the configured output directory.
    pub out_dir: Option<PathBuf>,
    pub threads: usize,
}

/// Explicit directory, else the configured one, else tempered-out/<name>.
pub fn resolve_out_dir(cfg: &ExperimentConfig, explicit: Option<&Path>) -> PathBuf {
    explicit
        .map(Path::to_path_buf)
        .or_else(|| cfg.output.clone())
        .unwrap_or_else(|| PathBuf::from("tempered-out").join(&cfg.name))
}

#[derive(Serialize)]
struct SpreadingSummary<'a> {
    eps: f64,
    slack: f64,
    k0: &'a SupportSet,
    max_hausdorff: f64,
    max_excess: f64,
    all_contained: bool,
    any_empty: bool,
    max_value: f64,
    /// (t, hausdorff, excess, contained)
    rows: Vec<(f64, Option<f64>, f64, bool)>,
}

#[derive(Serialize)]
struct SubsolutionSummary {
    certificate: SubsolutionCertificate,
    /// Decay rate of the evolved bump, when the datum is one.
    a: Option<f64>,
    slack: f64,
    /// (t, max over cells of W_slack − u); ≤ 0 means W stays below u.
    below: Vec<(f64, f64)>,
    /// (t, max over cells of u − W), for reference.
    above: Vec<(f64, f64)>,
}

#[derive(Serialize, Default)]
struct Report {
    name: String,
    passed: bool,
    checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    front: Vec<FrontSpeedEstimate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    spreading: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rankine: Option<RankineHugoniotReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    comparison: Option<ComparisonReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    subsolution: Option<SubsolutionSummary>,
}

fn write_json<T: Serialize>(path: &Path, v: &T) -> Result<()> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    fs::write(path, s)?;
    Ok(())
}

/// Bounding box of the initial support, the default K₀ for non-box data.
fn support_box(u0: &GridField, eps: f64) -> Result<SupportSet> {
    let s = extract_support(u0, eps)?;
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for set in std::iter::once(&s.support).chain(&s.others) {
        if let Some((a, b)) = set.bounds() {
            for k in 0..2 {
                lo[k] = lo[k].min(a[k]);
                hi[k] = hi[k].max(b[k]);
            }
        }
    }
    if s.empty {
        return Err(Error::Analysis("the datum has empty support".into()));
    }
    if u0.dim() == 1 {
        SupportSet::interval(lo[0], hi[0])
    } else {
        SupportSet::rectangle(lo, hi)
    }
}

fn box_set(lo: &[f64], hi: &[f64]) -> Result<SupportSet> {
    if lo.len() == 1 {
        SupportSet::interval(lo[0], hi[0])
    } else {
        SupportSet::rectangle([lo[0], lo[1]], [hi[0], hi[1]])
    }
}

/// Runs the configured evolution and analyses and writes manifest.json,
/// mass.csv, report.json, fields/ and, when requested, front.csv and
/// support.json into the output directory.
pub fn run_experiment(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<RunSummary> {
    let out = resolve_out_dir(cfg, opts.out_dir.as_deref());
    fs::create_dir_all(&out)?;
    let p = cfg.potential()?;
    let scheme = cfg.scheme_options(opts.threads);
    let t_final = cfg.time.t_final;

    let mut bump_a = None;
    if let DatumConfig::Bump { r0, a, t } = &cfg.datum {
        let a = match a {
            Some(a) => *a,
            None => {
                let cert = verify_subsolution(p.profile(), p.matrix(), *r0, &default_lambda_samples(), (r0 + t, r0 + t + t_final))?;
                if !cert.valid {
                    return Err(Error::Analysis(format!("no certified decay rate for the bump datum: {}", cert.reason.unwrap_or_default())));
                }
                cert.minimal_a
            }
        };
        bump_a = Some(a);
    }
    let u0 = init_grid(&cfg.domain()?, &cfg.grid.cells, &cfg.datum(bump_a.unwrap_or(0.0))?)?;
    let peak = u0.max_value();
    if !(peak > 0.0) {
        return Err(Error::InvalidParameter("the datum vanishes on the grid".into()));
    }
    let dx = u0.min_dx();
    let traj = evolve_with(&u0, &p, t_final, cfg.time.stride, cfg.time.cfl, scheme)?;
    let mut warnings = Vec::new();
    if traj.boundary_warning {
        let msg = "positive values came within 4 cells of the boundary; enlarge the domain".to_string();
        log::warn!("{}: {msg}", cfg.name);
        warnings.push(msg);
    }

    let mut report = Report { name: cfg.name.clone(), ..Default::default() };
    let mut checks = Vec::new();
    let drift = traj.mass_drift();
    checks.push(Check::new("mass", drift <= MASS_TOL, format!("relative drift {drift:.3e} (limit {MASS_TOL:e})")));
    let min_value = traj.snapshots.iter().flat_map(|s| s.values()).cloned().fold(f64::INFINITY, f64::min);
    checks.push(Check::new("positivity", min_value >= 0.0, format!("smallest value {min_value:e}")));
    let mut outputs = vec!["manifest.json", "mass.csv", "report.json"];

    let a = &cfg.analysis;
    if let Some(f) = &a.front {
        let window = f.window.map(|w| (w[0] + u0.time(), w[1] + u0.time())).unwrap_or_else(|| default_window(&traj));
        let full = (u0.time(), traj.last().time());
        for (k, d) in f.directions.iter().enumerate() {
            let est = front_speed(&traj, &p, d, f.threshold * peak, window)?;
            let series = front_speed(&traj, &p, d, f.threshold * peak, full)?;
            let name = if k == 0 { "front.csv".to_string() } else { format!("front_{k}.csv") };
            emit_plot_data(&PlotData::Front(&series), &out.join(&name))?;
            if k == 0 {
                outputs.push("front.csv");
            }
            if let Some(tol) = f.tolerance {
                let ok = est.valid && est.relative_error() <= tol;
                checks.push(Check::new(
                    &format!("front.speed[{k}]"),
                    ok,
                    format!("fitted {:.6} vs predicted {:.6}, relative error {:.3e} (limit {tol})", est.fitted_speed, est.predicted_speed, est.relative_error()),
                ));
            }
            report.front.push(est);
        }
        if let Some(tol) = f.ratio_tolerance {
            let (e0, e1) = (&report.front[0], &report.front[1]);
            let ratio = e0.fitted_speed / e1.fitted_speed;
            let predicted = e0.predicted_speed / e1.predicted_speed;
            let err = (ratio - predicted).abs() / predicted;
            checks.push(Check::new(
                "front.ratio",
                e0.valid && e1.valid && err <= tol,
                format!("fitted ratio {ratio:.4} vs predicted {predicted:.4}, relative error {err:.3e} (limit {tol})"),
            ));
        }
    }

    if let Some(s) = &a.spreading {
        let eps = s.eps * peak;
        let k0 = match (&s.k0_lo, &s.k0_hi, &cfg.datum) {
            (Some(lo), Some(hi), _) => box_set(lo, hi)?,
            (_, _, DatumConfig::Box { lo, hi, .. }) => box_set(lo, hi)?,
            _ => support_box(&u0, eps)?,
        };
        let rep: SpreadingReport = support_spreading_report(&traj, &p, &k0, eps, s.slack_cells * dx)?;
        emit_plot_data(&PlotData::Support(&rep), &out.join("support.json"))?;
        outputs.push("support.json");
        checks.push(Check::new(
            "spreading.containment",
            rep.all_contained,
            format!("largest excess over K0 + tE is {:.3e} (slack {:.3e})", rep.max_excess, rep.slack),
        ));
        let max_value = traj.snapshots.iter().map(|u| u.max_value()).fold(0.0, f64::max);
        if s.check_max {
            checks.push(Check::new("spreading.max_principle", max_value <= peak + 1e-10, format!("max u(t) = {max_value:.17e}, max u0 = {peak:.17e}")));
        }
        report.spreading = Some(serde_json::to_value(SpreadingSummary {
            eps,
            slack: rep.slack,
            k0: &k0,
            max_hausdorff: rep.max_hausdorff,
            max_excess: rep.max_excess,
            all_contained: rep.all_contained,
            any_empty: rep.any_empty,
            max_value,
            rows: rep.rows.iter().map(|r| (r.t, r.hausdorff, r.excess, r.contained)).collect(),
        })?);
    }

    if let Some(r) = &a.rankine {
        let rep = rankine_hugoniot_check(&traj, &p, r.jump_threshold, default_window(&traj))?;
        if let Some(tol) = r.tolerance {
            checks.push(Check::new(
                "rankine.velocity",
                rep.jump_detected && rep.relative_error <= tol,
                format!("regime {}, jump velocity {:.6} vs {:.6}, relative error {:.3e} (limit {tol})", rep.regime, rep.velocity, rep.predicted, rep.relative_error),
            ));
        }
        report.rankine = Some(rep);
    }

    if let Some(c) = &a.comparison {
        let pairs = comparison_pairs(cfg, c.pairs, &c.lo, &c.hi, c.max, c.ordered)?;
        let rep = comparison_suite(&p, &pairs, c.t_final.unwrap_or(t_final), cfg.time.cfl, scheme)?;
        let contraction = rep.pairs.iter().all(|o| o.contraction_holds);
        let worst = rep.pairs.iter().map(|o| o.lhs - o.rhs).fold(f64::NEG_INFINITY, f64::max);
        checks.push(Check::new("comparison.contraction", contraction, format!("max of lhs - rhs over pairs {worst:.3e}")));
        if c.ordered {
            let ok = rep.pairs.iter().all(|o| o.comparison_holds != Some(false));
            let v = rep.pairs.iter().map(|o| o.max_violation).fold(0.0, f64::max);
            checks.push(Check::new("comparison.pointwise", ok, format!("largest u(T) - v(T) = {v:.3e}")));
        }
        checks.push(Check::new("comparison.mass", rep.max_mass_drift <= MASS_TOL, format!("relative drift {:.3e}", rep.max_mass_drift)));
        checks.push(Check::new("comparison.positivity", rep.all_nonnegative, String::new()));
        report.comparison = Some(rep);
    }

    if let Some(s) = &a.subsolution {
        let cert = verify_subsolution(p.profile(), p.matrix(), s.r0, &default_lambda_samples(), (s.r0, s.r0 + t_final))?;
        checks.push(Check::new(
            "subsolution.certificate",
            cert.valid,
            format!("minimal a = {:.6}, {}", cert.minimal_a, cert.reason.clone().unwrap_or_else(|| "finite".into())),
        ));
        let slack = s.slack_cells * dx;
        let mut summary = SubsolutionSummary { certificate: cert, a: None, slack, below: Vec::new(), above: Vec::new() };
        if let (DatumConfig::Bump { r0, t, .. }, Some(a)) = (&cfg.datum, bump_a) {
            let m = p.matrix();
            for u in &traj.snapshots {
                let tt = t + u.time() - u0.time();
                let (mut below, mut above) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
                let [nx, ny] = u.n();
                for j in 0..ny {
                    for i in 0..nx {
                        let c = u.center(i, j);
                        let x = &c[..u.dim()];
                        let v = u.get(i, j);
                        below = below.max(subsolution_field(m, r0 - slack, a, tt, x) - v);
                        above = above.max(v - subsolution_field(m, *r0, a, tt, x));
                    }
                }
                summary.below.push((u.time(), below));
                summary.above.push((u.time(), above));
            }
            let worst = summary.below.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max);
            checks.push(Check::new(
                "subsolution.below_solution",
                worst <= 1e-12,
                format!("a = {a:.6}, max of W(R - {:.1} dx) - u over the run {worst:.3e}", s.slack_cells),
            ));
            summary.a = Some(a);
        }
        report.subsolution = Some(summary);
    }

    emit_plot_data(&PlotData::Mass(&traj), &out.join("mass.csv"))?;
    if cfg.write_fields {
        let dir = out.join("fields");
        if dir.exists() {
            fs::remove_dir_all(&dir)?;
        }
        for (k, u) in traj.snapshots.iter().enumerate() {
            write_snapshot(u, &dir, &format!("snap_{k:04}"))?;
        }
        outputs.push("fields/");
    }

    report.passed = checks.iter().all(|c| c.passed);
    report.checks = checks.clone();
    write_json(&out.join("report.json"), &report)?;
    write_json(
        &out.join("manifest.json"),
        &json!({
            "name": cfg.name,
            "tempered_version": env!("CARGO_PKG_VERSION"),
            "config": cfg.echo(),
            "dimension": u0.dim(),
            "cells": &u0.n()[..u0.dim()],
            "dx": &u0.dx()[..u0.dim()],
            "steps": traj.steps(),
            "dt": traj.dt_series.first(),
            "t_final": traj.last().time(),
            "snapshots": traj.times(),
            "bump_a": bump_a,
            "boundary_warning": traj.boundary_warning,
            "warnings": warnings,
            "outputs": outputs,
        }),
    )?;
    Ok(RunSummary { out_dir: out, checks, boundary_warning: traj.boundary_warning, steps: traj.steps() })
}

/// Random pairs from the experiment seed; with `ordered`, v₀ = u₀ + r ≥ u₀.
pub(crate) fn comparison_pairs(cfg: &ExperimentConfig, n: usize, lo: &[f64], hi: &[f64], max: f64, ordered: bool) -> Result<Vec<(GridField, GridField)>> {
    let domain = cfg.domain()?;
    let mut pairs = Vec::with_capacity(n);
    for k in 0..n as u64 {
        let seed = cfg.seed.wrapping_mul(1_000_003).wrapping_add(2 * k);
        let r = |s: u64| Datum::Random { lo: lo.to_vec(), hi: hi.to_vec(), max, seed: s };
        let u0 = init_grid(&domain, &cfg.grid.cells, &r(seed))?;
        let w = init_grid(&domain, &cfg.grid.cells, &r(seed + 1))?;
        let v0 = if ordered { w.with_values(u0.values().iter().zip(w.values()).map(|(a, b)| a + b).collect())? } else { w };
        pairs.push((u0, v0));
    }
    Ok(pairs)
}

