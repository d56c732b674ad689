use serde::{Deserialize, Serialize};

use super::datum::Datum;
use crate::numerics::pairwise_sum;
use crate::{Error, Result};

/// Axis-aligned box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Domain {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl Domain {
    pub fn new(lo: &[f64], hi: &[f64]) -> Result<Self> {
        if lo.len() != hi.len() || !(1..=2).contains(&lo.len()) {
            return Err(Error::InvalidParameter(format!(
                "domain bounds must both have 1 or 2 entries (got {} and {})",
                lo.len(),
                hi.len()
            )));
        }
        for k in 0..lo.len() {
            if !(lo[k] < hi[k]) || !lo[k].is_finite() || !hi[k].is_finite() {
                return Err(Error::InvalidParameter(format!("empty domain on axis {k}: [{}, {}]", lo[k], hi[k])));
            }
        }
        Ok(Self { lo: lo.to_vec(), hi: hi.to_vec() })
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }
}

/// Cell averages of a nonnegative density on a uniform grid. Index i runs
/// along x and is fastest; in 1D there is a single row.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    dim: usize,
    lo: [f64; 2],
    hi: [f64; 2],
    n: [usize; 2],
    dx: [f64; 2],
    values: Vec<f64>,
    time: f64,
}

/// Samples `datum` at the cell centres of a uniform grid.
pub fn init_grid(domain: &Domain, n_cells: &[usize], datum: &Datum) -> Result<GridField> {
    let mut u = GridField::zeros(domain, n_cells)?;
    for j in 0..u.n[1] {
        for i in 0..u.n[0] {
            let c = u.center(i, j);
            let v = datum.eval(&c[..u.dim], i + u.n[0] * j)?;
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "datum value {v} at x = {:?} is not a finite nonnegative number",
                    &c[..u.dim]
                )));
            }
            u.values[i + u.n[0] * j] = v;
        }
    }
    Ok(u)
}

impl GridField {
    pub fn zeros(domain: &Domain, n_cells: &[usize]) -> Result<Self> {
        let dim = domain.dim();
        if n_cells.len() != dim {
            return Err(Error::InvalidParameter(format!("{} cell counts for a {dim}D domain", n_cells.len())));
        }
        if n_cells.iter().any(|&n| n < 16) {
            return Err(Error::InvalidParameter(format!("need at least 16 cells per axis, got {n_cells:?}")));
        }
        let mut lo = [0.0; 2];
        let mut hi = [1.0; 2];
        let mut n = [1usize; 2];
        let mut dx = [1.0; 2];
        for k in 0..dim {
            lo[k] = domain.lo[k];
            hi[k] = domain.hi[k];
            n[k] = n_cells[k];
            dx[k] = (hi[k] - lo[k]) / n[k] as f64;
        }
        Ok(Self { dim, lo, hi, n, dx, values: vec![0.0; n[0] * n[1]], time: 0.0 })
    }

    /// Same grid, new values.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        if values.len() != self.values.len() {
            return Err(Error::GridMismatch(format!("{} values for {} cells", values.len(), self.values.len())));
        }
        if let Some((k, v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidParameter(format!("cell {k} has value {v}")));
        }
        Ok(Self { values, ..self.clone() })
    }

    pub(crate) fn from_parts(template: &GridField, values: Vec<f64>, time: f64) -> Self {
        Self { values, time, ..template.clone() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> [usize; 2] {
        self.n
    }

    pub fn n_cells(&self) -> usize {
        self.values.len()
    }

    pub fn dx(&self) -> [f64; 2] {
        self.dx
    }

    /// Smallest spacing over the active axes.
    pub fn min_dx(&self) -> f64 {
        self.dx[..self.dim].iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn lo(&self) -> [f64; 2] {
        self.lo
    }

    pub fn hi(&self) -> [f64; 2] {
        self.hi
    }

    pub fn domain(&self) -> Domain {
        Domain { lo: self.lo[..self.dim].to_vec(), hi: self.hi[..self.dim].to_vec() }
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn set_time(&mut self, t: f64) {
        self.time = t;
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        i + self.n[0] * j
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i + self.n[0] * j]
    }

    pub fn center(&self, i: usize, j: usize) -> [f64; 2] {
        let mut c = [self.lo[0] + (i as f64 + 0.5) * self.dx[0], 0.0];
        if self.dim == 2 {
            c[1] = self.lo[1] + (j as f64 + 0.5) * self.dx[1];
        }
        c
    }

    pub fn cell_volume(&self) -> f64 {
        self.dx[..self.dim].iter().product()
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().cloned().fold(0.0, f64::max)
    }

    pub fn same_grid(&self, other: &GridField) -> bool {
        self.dim == other.dim && self.n == other.n && self.lo == other.lo && self.hi == other.hi
    }

    /// Bilinear (or linear) interpolation of cell-centre values; zero outside.
    pub fn interpolate(&self, x: &[f64]) -> f64 {
        let mut w = [[0usize; 2]; 2];
        let mut f = [[1.0, 0.0]; 2];
        for k in 0..self.dim {
            let s = (x[k] - self.lo[k]) / self.dx[k] - 0.5;
            if s < -0.5 || s > self.n[k] as f64 - 0.5 {
                return 0.0;
            }
            let i0 = s.floor().max(0.0).min((self.n[k] - 1) as f64);
            let frac = (s - i0).clamp(0.0, 1.0);
            let i1 = (i0 as usize + 1).min(self.n[k] - 1);
            w[k] = [i0 as usize, i1];
            f[k] = [1.0 - frac, frac];
        }
        if self.dim == 1 {
            return f[0][0] * self.get(w[0][0], 0) + f[0][1] * self.get(w[0][1], 0);
        }
        let mut v = 0.0;
        for a in 0..2 {
            for b in 0..2 {
                v += f[0][a] * f[1][b] * self.get(w[0][a], w[1][b]);
            }
        }
        v
    }

    /// Largest number of cells between any positive cell and the boundary
    /// that is still free; `None` for a zero field.
    pub fn boundary_clearance(&self, eps: f64) -> Option<usize> {
        let mut best: Option<usize> = None;
        for j in 0..self.n[1] {
            for i in 0..self.n[0] {
                if self.get(i, j) > eps {
                    let mut c = i.min(self.n[0] - 1 - i);
                    if self.dim == 2 {
                        c = c.min(j.min(self.n[1] - 1 - j));
                    }
                    best = Some(best.map_or(c, |b: usize| b.min(c)));
                }
            }
        }
        best
    }
}

/// Σ u_i |cell| with pairwise summation.
pub fn total_mass(u: &GridField) -> f64 {
    pairwise_sum(u.values()) * u.cell_volume()
}

/// ∫ (u − v)⁺ for fields on the same grid.
pub fn positive_part_l1(u: &GridField, v: &GridField) -> Result<f64> {
    if !u.same_grid(v) {
        return Err(Error::GridMismatch("fields live on different grids".to_string()));
    }
    let d: Vec<f64> = u.values().iter().zip(v.values()).map(|(a, b)| (a - b).max(0.0)).collect();
    Ok(pairwise_sum(&d) * u.cell_volume())
}

/// ∫ |u − v| for fields on the same grid.
pub fn l1_distance(u: &GridField, v: &GridField) -> Result<f64> {
    if !u.same_grid(v) {
        return Err(Error::GridMismatch("fields live on different grids".to_string()));
    }
    let d: Vec<f64> = u.values().iter().zip(v.values()).map(|(a, b)| (a - b).abs()).collect();
    Ok(pairwise_sum(&d) * u.cell_volume())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_datum_counts_cells() {
        let d = Domain::new(&[-4.0], &[4.0]).unwrap();
        let u = init_grid(&d, &[400], &Datum::box_1d(-1.0, 1.0, 1.0)).unwrap();
        assert_eq!(u.values().iter().filter(|v| **v == 1.0).count(), 100);
        assert!((total_mass(&u) - 2.0).abs() <= u.dx()[0]);
    }

    #[test]
    fn zero_field_has_zero_mass() {
        let d = Domain::new(&[0.0, 0.0], &[1.0, 1.0]).unwrap();
        let u = GridField::zeros(&d, &[16, 16]).unwrap();
        assert_eq!(total_mass(&u), 0.0);
        assert!(GridField::zeros(&d, &[8, 16]).is_err());
    }

    #[test]
    fn interpolation_is_exact_on_linear_data() {
        let d = Domain::new(&[0.0, 0.0], &[1.0, 2.0]).unwrap();
        let g = GridField::zeros(&d, &[16, 32]).unwrap();
        let vals: Vec<f64> = (0..g.n_cells())
            .map(|k| {
                let c = g.center(k % 16, k / 16);
                1.0 + 2.0 * c[0] + 3.0 * c[1]
            })
            .collect();
        let g = g.with_values(vals).unwrap();
        let v = g.interpolate(&[0.41, 1.13]);
        assert!((v - (1.0 + 0.82 + 3.39)).abs() < 1e-12);
    }
}
