use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::convex::{make_pmodel_profile, make_potential, AnisotropyMatrix, Potential, SaturationProfile};
use crate::solver::{Datum, Domain, SchemeOptions};
use crate::{Error, Result};

/// One experiment: model, grid, datum, time stepping and the analyses to run.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    /// Seed for randomized data.
    #[serde(default)]
    pub seed: u64,
    /// Output directory; the command line and TEMPERED_OUT_DIR take precedence.
    pub output: Option<PathBuf>,
    pub model: ModelConfig,
    pub grid: GridConfig,
    pub time: TimeConfig,
    pub datum: DatumConfig,
    #[serde(default)]
    pub scheme: SchemeConfig,
    #[serde(default)]
    pub analysis: AnalysisConfig,
    /// Write every snapshot under fields/.
    #[serde(default = "yes")]
    pub write_fields: bool,
    #[serde(skip)]
    pub(crate) source: String,
}

fn yes() -> bool {
    true
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    /// p-model exponent; exclusive with `profile`.
    pub p: Option<f64>,
    /// "wilson" (p = 1) or "relativistic" (p = 2).
    pub profile: Option<String>,
    /// Rows of A; the identity when omitted.
    pub matrix: Option<Vec<Vec<f64>>>,
    #[serde(default = "one")]
    pub lengthscale: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub cells: Vec<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    pub t_final: f64,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    /// Steps between snapshots.
    pub stride: usize,
}

fn default_cfl() -> f64 {
    0.5
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DatumConfig {
    Box { lo: Vec<f64>, hi: Vec<f64>, beta: f64 },
    /// The subsolution profile at time `t`; `a` defaults to the certified minimum.
    Bump { r0: f64, a: Option<f64>, #[serde(default)] t: f64 },
    Gaussian { center: Vec<f64>, sigma: f64, amplitude: f64 },
    Random { lo: Vec<f64>, hi: Vec<f64>, max: f64 },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeConfig {
    #[serde(default = "yes")]
    pub front_limiter: bool,
    #[serde(default = "default_eps_reg")]
    pub eps_reg: f64,
}

fn default_eps_reg() -> f64 {
    1e-30
}

impl Default for SchemeConfig {
    fn default() -> Self {
        Self { front_limiter: true, eps_reg: default_eps_reg() }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisConfig {
    pub front: Option<FrontConfig>,
    pub spreading: Option<SpreadingConfig>,
    pub rankine: Option<RankineConfig>,
    pub comparison: Option<ComparisonConfig>,
    pub subsolution: Option<SubsolutionConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrontConfig {
    pub directions: Vec<Vec<f64>>,
    /// Level set tracked, relative to the datum maximum.
    #[serde(default = "default_front_threshold")]
    pub threshold: f64,
    /// Fit window; drops the first 20% of the run when omitted.
    pub window: Option<[f64; 2]>,
    /// Assert |fitted − predicted| ≤ tolerance · predicted for every direction.
    pub tolerance: Option<f64>,
    /// Assert the ratio of the first two fitted speeds matches the predicted
    /// ratio within this relative tolerance.
    pub ratio_tolerance: Option<f64>,
}

fn default_front_threshold() -> f64 {
    1e-3
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpreadingConfig {
    /// Support threshold, relative to the datum maximum.
    #[serde(default = "default_eps")]
    pub eps: f64,
    #[serde(default = "two")]
    pub slack_cells: f64,
    /// Initial set K₀ as a box; defaults to the datum box or the bounding box
    /// of the initial support.
    pub k0_lo: Option<Vec<f64>>,
    pub k0_hi: Option<Vec<f64>>,
    /// Also assert max u(t) ≤ max u₀ + 1e-10.
    #[serde(default = "yes")]
    pub check_max: bool,
}

fn default_eps() -> f64 {
    1e-8
}

fn two() -> f64 {
    2.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RankineConfig {
    #[serde(default = "default_jump")]
    pub jump_threshold: f64,
    pub tolerance: Option<f64>,
}

fn default_jump() -> f64 {
    5.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComparisonConfig {
    #[serde(default = "default_pairs")]
    pub pairs: usize,
    /// Box carrying the random data.
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    #[serde(default = "one")]
    pub max: f64,
    /// Build v₀ = u₀ + r so that pointwise comparison is tested too.
    #[serde(default = "yes")]
    pub ordered: bool,
    /// Defaults to time.t_final.
    pub t_final: Option<f64>,
}

fn default_pairs() -> usize {
    5
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubsolutionConfig {
    pub r0: f64,
    /// Radial slack, in cells, for the check W ≤ u along a bump run.
    #[serde(default = "two")]
    pub slack_cells: f64,
}

/// Reads and validates a TOML experiment file.
pub fn parse_config(path: &Path) -> Result<ExperimentConfig> {
    let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    parse_config_str(&text).map_err(|e| match e {
        Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
        other => other,
    })
}

/// As [`parse_config`], from the file contents.
pub fn parse_config_str(text: &str) -> Result<ExperimentConfig> {
    let mut cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string().trim_end().to_string()))?;
    cfg.source = text.to_string();
    cfg.validate()?;
    Ok(cfg)
}

/// Line of `key` inside table `table` ("" for the root), for diagnostics.
fn locate(text: &str, table: &str, key: &str) -> Option<usize> {
    let mut current = String::new();
    for (k, line) in text.lines().enumerate() {
        let t = line.trim();
        if let Some(h) = t.strip_prefix('[') {
            current = h.trim_start_matches('[').split(']').next().unwrap_or("").trim().to_string();
            continue;
        }
        if current == table {
            if let Some((lhs, _)) = t.split_once('=') {
                if lhs.trim() == key {
                    return Some(k + 1);
                }
            }
        }
    }
    None
}

impl ExperimentConfig {
    fn fail(&self, table: &str, key: &str, msg: impl std::fmt::Display) -> Error {
        let path = if table.is_empty() { key.to_string() } else { format!("{table}.{key}") };
        match locate(&self.source, table, key) {
            Some(line) => Error::Config(format!("line {line}, key `{path}`: {msg}")),
            None => Error::Config(format!("key `{path}`: {msg}")),
        }
    }

    pub fn dim(&self) -> usize {
        self.grid.lo.len()
    }

    fn validate(&self) -> Result<()> {
        if self.name.trim().is_empty() {
            return Err(self.fail("", "name", "must not be empty"));
        }
        if self.name.contains(['/', '\\']) {
            return Err(self.fail("", "name", "must not contain path separators"));
        }
        self.profile()?;
        self.matrix()?;
        if !(self.model.lengthscale > 0.0 && self.model.lengthscale.is_finite()) {
            return Err(self.fail("model", "lengthscale", format!("must be positive, got {}", self.model.lengthscale)));
        }
        self.potential()?;
        let dim = self.dim();
        Domain::new(&self.grid.lo, &self.grid.hi).map_err(|e| self.fail("grid", "lo", e))?;
        if self.grid.cells.len() != dim || self.grid.cells.iter().any(|n| *n < 8) {
            return Err(self.fail("grid", "cells", format!("need {dim} entries of at least 8, got {:?}", self.grid.cells)));
        }
        if !(self.time.t_final > 0.0 && self.time.t_final.is_finite()) {
            return Err(self.fail("time", "t_final", format!("must be positive, got {}", self.time.t_final)));
        }
        if !(self.time.cfl > 0.0 && self.time.cfl <= 1.0) {
            return Err(self.fail("time", "cfl", format!("must lie in (0, 1], got {}", self.time.cfl)));
        }
        if self.time.stride == 0 {
            return Err(self.fail("time", "stride", "must be at least 1"));
        }
        if !(self.scheme.eps_reg > 0.0) {
            return Err(self.fail("scheme", "eps_reg", "must be positive"));
        }
        self.validate_datum()?;
        self.validate_analyses()
    }

    fn validate_datum(&self) -> Result<()> {
        let dim = self.dim();
        let check_box = |lo: &[f64], hi: &[f64], table: &str| -> Result<()> {
            if lo.len() != dim || hi.len() != dim {
                return Err(self.fail(table, "lo", format!("box needs {dim} entries per corner")));
            }
            if lo.iter().zip(hi).any(|(a, b)| !(a <= b)) {
                return Err(self.fail(table, "hi", "box corners are not ordered"));
            }
            Ok(())
        };
        match &self.datum {
            DatumConfig::Box { lo, hi, beta } => {
                check_box(lo, hi, "datum")?;
                if !(*beta > 0.0 && beta.is_finite()) {
                    return Err(self.fail("datum", "beta", format!("must be positive, got {beta}")));
                }
            }
            DatumConfig::Bump { r0, a, t } => {
                if !(*r0 > 0.0) {
                    return Err(self.fail("datum", "r0", format!("must be positive, got {r0}")));
                }
                if a.is_some_and(|a| !(a >= 0.0)) {
                    return Err(self.fail("datum", "a", "must be nonnegative"));
                }
                if !(*t >= 0.0) {
                    return Err(self.fail("datum", "t", "must be nonnegative"));
                }
            }
            DatumConfig::Gaussian { center, sigma, amplitude } => {
                if center.len() != dim {
                    return Err(self.fail("datum", "center", format!("needs {dim} entries")));
                }
                if !(*sigma > 0.0) || !(*amplitude > 0.0) {
                    return Err(self.fail("datum", "sigma", "sigma and amplitude must be positive"));
                }
            }
            DatumConfig::Random { lo, hi, max } => {
                check_box(lo, hi, "datum")?;
                if !(*max > 0.0) {
                    return Err(self.fail("datum", "max", "must be positive"));
                }
            }
        }
        Ok(())
    }

    fn validate_analyses(&self) -> Result<()> {
        let dim = self.dim();
        let a = &self.analysis;
        if let Some(f) = &a.front {
            if f.directions.is_empty() || f.directions.iter().any(|d| d.len() != dim || d.iter().all(|v| *v == 0.0)) {
                return Err(self.fail("analysis.front", "directions", format!("need nonzero vectors with {dim} entries")));
            }
            if !(f.threshold > 0.0 && f.threshold < 1.0) {
                return Err(self.fail("analysis.front", "threshold", "relative threshold must lie in (0, 1)"));
            }
            if let Some(w) = f.window {
                if !(w[0] >= 0.0 && w[0] < w[1] && w[1] <= self.time.t_final) {
                    return Err(self.fail("analysis.front", "window", format!("must satisfy 0 <= lo < hi <= t_final, got {w:?}")));
                }
            }
            if f.ratio_tolerance.is_some() && f.directions.len() < 2 {
                return Err(self.fail("analysis.front", "ratio_tolerance", "needs two directions"));
            }
        }
        if let Some(s) = &a.spreading {
            if !(s.eps > 0.0 && s.eps < 1.0) {
                return Err(self.fail("analysis.spreading", "eps", "relative threshold must lie in (0, 1)"));
            }
            if !(s.slack_cells >= 0.0) {
                return Err(self.fail("analysis.spreading", "slack_cells", "must be nonnegative"));
            }
            match (&s.k0_lo, &s.k0_hi) {
                (Some(lo), Some(hi)) => {
                    if lo.len() != dim || hi.len() != dim || lo.iter().zip(hi).any(|(a, b)| !(a < b)) {
                        return Err(self.fail("analysis.spreading", "k0_lo", "K0 box needs ordered corners of the grid dimension"));
                    }
                }
                (None, None) => {}
                _ => return Err(self.fail("analysis.spreading", "k0_lo", "k0_lo and k0_hi go together")),
            }
        }
        if let Some(r) = &a.rankine {
            if dim != 1 {
                return Err(self.fail("analysis.rankine", "jump_threshold", "jump tracking needs a 1D grid"));
            }
            if !(r.jump_threshold > 1.0) {
                return Err(self.fail("analysis.rankine", "jump_threshold", "must exceed 1"));
            }
        }
        if let Some(c) = &a.comparison {
            if c.pairs == 0 {
                return Err(self.fail("analysis.comparison", "pairs", "must be at least 1"));
            }
            if c.lo.len() != dim || c.hi.len() != dim || c.lo.iter().zip(&c.hi).any(|(a, b)| !(a < b)) {
                return Err(self.fail("analysis.comparison", "lo", "box needs ordered corners of the grid dimension"));
            }
            if !(c.max > 0.0) {
                return Err(self.fail("analysis.comparison", "max", "must be positive"));
            }
            if c.t_final.is_some_and(|t| !(t > 0.0)) {
                return Err(self.fail("analysis.comparison", "t_final", "must be positive"));
            }
        }
        if let Some(s) = &a.subsolution {
            if !(s.r0 > 0.0) {
                return Err(self.fail("analysis.subsolution", "r0", "must be positive"));
            }
            if !(s.slack_cells >= 0.0) {
                return Err(self.fail("analysis.subsolution", "slack_cells", "must be nonnegative"));
            }
        }
        Ok(())
    }

    pub fn profile(&self) -> Result<SaturationProfile> {
        match (&self.model.p, &self.model.profile) {
            (Some(p), None) => make_pmodel_profile(*p).map_err(|e| self.fail("model", "p", e)),
            (None, Some(name)) => match name.as_str() {
                "wilson" => Ok(SaturationProfile::wilson()),
                "relativistic" => Ok(SaturationProfile::relativistic()),
                other => Err(self.fail("model", "profile", format!("unknown profile `{other}` (expected wilson or relativistic)"))),
            },
            (Some(_), Some(_)) => Err(self.fail("model", "profile", "give either p or profile, not both")),
            (None, None) => Err(Error::Config("table `model`: one of `p` or `profile` is required".into())),
        }
    }

    pub fn matrix(&self) -> Result<AnisotropyMatrix> {
        let dim = self.dim();
        match &self.model.matrix {
            None => Ok(AnisotropyMatrix::identity(dim.clamp(1, 2))),
            Some(rows) => {
                let m = AnisotropyMatrix::new(rows).map_err(|e| self.fail("model", "matrix", e))?;
                if m.dim() != dim {
                    return Err(self.fail("model", "matrix", format!("is {}x{} but the grid is {dim}D", m.dim(), m.dim())));
                }
                Ok(m)
            }
        }
    }

    pub fn potential(&self) -> Result<Potential> {
        make_potential(self.profile()?, self.matrix()?, self.model.lengthscale).map_err(|e| self.fail("model", "p", e))
    }

    pub fn domain(&self) -> Result<Domain> {
        Domain::new(&self.grid.lo, &self.grid.hi)
    }

    pub fn scheme_options(&self, threads: usize) -> SchemeOptions {
        SchemeOptions { eps_reg: self.scheme.eps_reg, front_limiter: self.scheme.front_limiter, threads: threads.max(1) }
    }

    /// The datum; `a` is the resolved decay rate for bump data.
    pub(crate) fn datum(&self, bump_a: f64) -> Result<Datum> {
        Ok(match &self.datum {
            DatumConfig::Box { lo, hi, beta } => Datum::Box { lo: lo.clone(), hi: hi.clone(), beta: *beta },
            DatumConfig::Bump { r0, t, .. } => Datum::Bump { matrix: self.matrix()?, r0: *r0, a: bump_a, t: *t },
            DatumConfig::Gaussian { center, sigma, amplitude } => Datum::Gaussian { center: center.clone(), sigma: *sigma, amplitude: *amplitude },
            DatumConfig::Random { lo, hi, max } => Datum::Random { lo: lo.clone(), hi: hi.clone(), max: *max, seed: self.seed },
        })
    }

    /// The raw TOML as a JSON value, for the manifest.
    pub fn echo(&self) -> serde_json::Value {
        toml::from_str::<toml::Value>(&self.source).ok().and_then(|v| serde_json::to_value(v).ok()).unwrap_or(serde_json::Value::Null)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
name = "box"

[model]
p = 2.0

[grid]
lo = [-2.0]
hi = [2.0]
cells = [100]

[time]
t_final = 0.5
stride = 50

[datum]
kind = "box"
lo = [-0.5]
hi = [0.5]
beta = 1.0
"#;

    #[test]
    fn minimal_config_parses() {
        let c = parse_config_str(MINIMAL).unwrap();
        assert_eq!(c.dim(), 1);
        assert_eq!(c.time.cfl, 0.5);
        assert!(c.analysis.front.is_none());
    }

    #[test]
    fn small_p_rejected_with_line() {
        let e = parse_config_str(&MINIMAL.replace("p = 2.0", "p = 0.5")).unwrap_err().to_string();
        assert!(e.contains("line 5") && e.contains("model.p"), "{e}");
    }

    #[test]
    fn unknown_key_rejected() {
        let e = parse_config_str(&MINIMAL.replace("stride = 50", "stride = 50\nstrid = 3")).unwrap_err().to_string();
        assert!(e.contains("strid") && e.contains("line"), "{e}");
    }

    #[test]
    fn unknown_datum_field_rejected() {
        let e = parse_config_str(&MINIMAL.replace("beta = 1.0", "beta = 1.0\nheight = 2.0")).unwrap_err().to_string();
        assert!(e.contains("height"), "{e}");
    }

    #[test]
    fn asymmetric_matrix_rejected() {
        let text = MINIMAL
            .replace("lo = [-2.0]\nhi = [2.0]\ncells = [100]", "lo = [-2.0, -2.0]\nhi = [2.0, 2.0]\ncells = [40, 40]")
            .replace("lo = [-0.5]\nhi = [0.5]", "lo = [-0.5, -0.5]\nhi = [0.5, 0.5]")
            .replace("p = 2.0", "p = 2.0\nmatrix = [[1.0, 0.5], [0.2, 1.0]]");
        let e = parse_config_str(&text).unwrap_err().to_string();
        assert!(e.contains("model.matrix") && e.contains("line 6"), "{e}");
    }
}
