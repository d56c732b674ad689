use std::f64::consts::PI;

use super::matrix::AnisotropyMatrix;
use super::potential::Potential;
use crate::numerics::golden_max;
use crate::{Error, Result};

/// Sampled boundary of ℓ B̄_{A⁻¹}, the closure of dom k.
#[derive(Debug, Clone)]
pub struct WulffShape {
    dim: usize,
    boundary_points: Vec<[f64; 2]>,
    ell: f64,
    matrix: AnisotropyMatrix,
    max_support_violation: f64,
}

pub fn wulff_shape(p: &Potential, n_dirs: usize) -> Result<WulffShape> {
    let dim = p.dim();
    if dim == 1 && n_dirs != 2 {
        return Err(Error::InvalidParameter(format!("1D Wulff shape has 2 boundary points, asked for {n_dirs}")));
    }
    if dim == 2 && n_dirs < 8 {
        return Err(Error::InvalidParameter(format!("need at least 8 directions, got {n_dirs}")));
    }
    let mut shape = WulffShape {
        dim,
        boundary_points: Vec::new(),
        ell: p.ell(),
        matrix: *p.matrix(),
        max_support_violation: 0.0,
    };
    shape.boundary_points = shape.sample(n_dirs);
    // y·x ≤ Φ_∞(x) on sampled unit x
    let mut worst: f64 = 0.0;
    for x in shape.sample(4 * n_dirs.max(8)) {
        let nx = (x[0] * x[0] + x[1] * x[1]).sqrt();
        let ux = [x[0] / nx, x[1] / nx];
        let phi_inf = p.recession_exact(&ux[..dim]);
        for y in &shape.boundary_points {
            worst = worst.max(y[0] * ux[0] + y[1] * ux[1] - phi_inf);
        }
    }
    shape.max_support_violation = worst;
    if worst > 1e-10 * p.ell().max(1.0) {
        return Err(Error::Geometry(format!("Wulff shape violates the support bound by {worst:e}")));
    }
    Ok(shape)
}

impl WulffShape {
    fn sample(&self, n: usize) -> Vec<[f64; 2]> {
        if self.dim == 1 {
            let e = self.axis_half_width(0);
            return vec![[-e, 0.0], [e, 0.0]];
        }
        (0..n).map(|k| self.point_at(2.0 * PI * k as f64 / n as f64)).collect()
    }

    /// Boundary point on the ray with polar angle φ.
    pub fn point_at(&self, phi: f64) -> [f64; 2] {
        let th = [phi.cos(), phi.sin()];
        let s = self.ell / self.matrix.dual_norm(&th);
        [s * th[0], s * th[1]]
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ell(&self) -> f64 {
        self.ell
    }

    pub fn matrix(&self) -> &AnisotropyMatrix {
        &self.matrix
    }

    /// Boundary points, counterclockwise from angle 0 in 2D; [−e, e] in 1D.
    pub fn boundary_points(&self) -> &[[f64; 2]] {
        &self.boundary_points
    }

    /// The same shape sampled at `n` directions.
    pub fn resampled(&self, n: usize) -> Vec<[f64; 2]> {
        self.sample(n)
    }

    /// Extent along a coordinate axis: ℓ √a_ii.
    pub fn axis_half_width(&self, axis: usize) -> f64 {
        self.ell * self.matrix.matrix().get(axis, axis).sqrt()
    }

    pub fn max_support_violation(&self) -> f64 {
        self.max_support_violation
    }

    /// max_{y ∈ E} y·x, refined between samples on the exact boundary.
    pub fn support_function(&self, x: &[f64]) -> f64 {
        let dot = |y: &[f64; 2]| (0..self.dim).map(|i| y[i] * x[i]).sum::<f64>();
        let (best_k, best) = self
            .boundary_points
            .iter()
            .enumerate()
            .map(|(k, y)| (k, dot(y)))
            .fold((0, f64::NEG_INFINITY), |acc, v| if v.1 > acc.1 { v } else { acc });
        if self.dim == 1 {
            return best;
        }
        let n = self.boundary_points.len();
        let step = 2.0 * PI / n as f64;
        let phi0 = step * best_k as f64;
        let (_, refined) = golden_max(|phi| dot(&self.point_at(phi)), phi0 - step, phi0 + step, 80);
        refined.max(best)
    }

    /// Largest |‖y‖_{A⁻¹} − ℓ| over the boundary samples.
    pub fn dual_norm_residual(&self) -> f64 {
        self.boundary_points
            .iter()
            .map(|y| (self.matrix.dual_norm(&y[..self.dim]) - self.ell).abs())
            .fold(0.0, f64::max)
    }

    /// Largest distance from −y to the nearest sample, over samples y.
    pub fn symmetry_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for y in &self.boundary_points {
            let d = self
                .boundary_points
                .iter()
                .map(|q| ((q[0] + y[0]).powi(2) + (q[1] + y[1]).powi(2)).sqrt())
                .fold(f64::INFINITY, f64::min);
            worst = worst.max(d);
        }
        worst
    }

    /// All samples are vertices of a counterclockwise convex polygon.
    pub fn is_convex(&self) -> bool {
        if self.dim == 1 {
            return true;
        }
        let n = self.boundary_points.len();
        (0..n).all(|i| {
            let a = self.boundary_points[i];
            let b = self.boundary_points[(i + 1) % n];
            let c = self.boundary_points[(i + 2) % n];
            (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]) > 0.0
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::{make_potential, make_pmodel_profile};

    #[test]
    fn ellipse_semi_axes() {
        let p = make_potential(make_pmodel_profile(2.0).unwrap(), AnisotropyMatrix::diag(&[4.0, 1.0]).unwrap(), 1.0).unwrap();
        let w = wulff_shape(&p, 64).unwrap();
        let b = w.boundary_points();
        assert!((b[0][0] - 2.0).abs() < 1e-10 && b[0][1].abs() < 1e-12);
        assert!((b[16][1] - 1.0).abs() < 1e-10);
        assert!(w.dual_norm_residual() < 1e-10);
        assert!(w.symmetry_defect() < 1e-10);
        assert!(w.is_convex());
    }

    #[test]
    fn support_matches_recession() {
        let a = AnisotropyMatrix::new(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let p = make_potential(make_pmodel_profile(2.0).unwrap(), a, 1.0).unwrap();
        let w = wulff_shape(&p, 64).unwrap();
        for k in 0..64 {
            let phi = 2.0 * PI * (k as f64 + 0.37) / 64.0;
            let th = [phi.cos(), phi.sin()];
            assert!((w.support_function(&th) - p.recession_exact(&th)).abs() < 1e-9);
        }
    }

    #[test]
    fn one_dimensional_interval() {
        let p = make_potential(make_pmodel_profile(2.0).unwrap(), AnisotropyMatrix::diag(&[4.0]).unwrap(), 1.0).unwrap();
        let w = wulff_shape(&p, 2).unwrap();
        assert!((w.boundary_points()[1][0] - 2.0).abs() < 1e-10);
        assert!(wulff_shape(&p, 8).is_err());
    }
}
