use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Square matrix of size 1 or 2. Unused entries are zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmallMatrix {
    pub dim: usize,
    pub m: [[f64; 2]; 2],
}

impl SmallMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, m: [[0.0; 2]; 2] }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[i][j]
    }

    pub fn det(&self) -> f64 {
        match self.dim {
            1 => self.m[0][0],
            _ => self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0],
        }
    }

    /// Leading principal minors, k = 1..dim.
    pub fn leading_minors(&self) -> Vec<f64> {
        (1..=self.dim)
            .map(|k| if k == 1 { self.m[0][0] } else { self.det() })
            .collect()
    }

    /// All principal minors (for dim 2: a11, a22, det).
    pub fn principal_minors(&self) -> Vec<f64> {
        match self.dim {
            1 => vec![self.m[0][0]],
            _ => vec![self.m[0][0], self.m[1][1], self.det()],
        }
    }

    pub fn mul_vec(&self, r: &[f64]) -> [f64; 2] {
        match self.dim {
            1 => [self.m[0][0] * r[0], 0.0],
            _ => [
                self.m[0][0] * r[0] + self.m[0][1] * r[1],
                self.m[1][0] * r[0] + self.m[1][1] * r[1],
            ],
        }
    }

    pub fn quad_form(&self, r: &[f64]) -> f64 {
        let ar = self.mul_vec(r);
        (0..self.dim).map(|i| r[i] * ar[i]).sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.dim == 1 || self.m[0][1] == self.m[1][0]
    }

    /// Eigenvalues of a symmetric matrix, ascending.
    pub fn sym_eigenvalues(&self) -> Vec<f64> {
        match self.dim {
            1 => vec![self.m[0][0]],
            _ => {
                let (a, b, c) = (self.m[0][0], 0.5 * (self.m[0][1] + self.m[1][0]), self.m[1][1]);
                let mean = 0.5 * (a + c);
                let rad = (0.25 * (a - c) * (a - c) + b * b).sqrt();
                vec![mean - rad, mean + rad]
            }
        }
    }
}

/// Symmetric positive-definite matrix A with its inverse; defines the norms
/// ‖x‖_A = √(xᵀAx) and ‖x‖_{A⁻¹}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct AnisotropyMatrix {
    a: SmallMatrix,
    inv: SmallMatrix,
}

impl AnisotropyMatrix {
    pub fn new(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        if !(1..=2).contains(&dim) {
            return Err(Error::InvalidMatrix(format!("dimension must be 1 or 2, got {dim}")));
        }
        let mut a = SmallMatrix::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::InvalidMatrix(format!("row {i} has {} entries, expected {dim}", row.len())));
            }
            for (j, v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::InvalidMatrix(format!("entry ({i},{j}) is not finite")));
                }
                a.m[i][j] = *v;
            }
        }
        Self::from_small(a)
    }

    pub fn identity(dim: usize) -> Self {
        let rows: Vec<Vec<f64>> = (0..dim).map(|i| (0..dim).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        Self::new(&rows).expect("identity is valid")
    }

    pub fn diag(entries: &[f64]) -> Result<Self> {
        let dim = entries.len();
        let rows: Vec<Vec<f64>> = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { entries[i] } else { 0.0 }).collect())
            .collect();
        Self::new(&rows)
    }

    fn from_small(a: SmallMatrix) -> Result<Self> {
        if !a.is_symmetric() {
            return Err(Error::InvalidMatrix(format!(
                "not symmetric: a12 = {} but a21 = {}",
                a.m[0][1], a.m[1][0]
            )));
        }
        for (k, minor) in a.leading_minors().iter().enumerate() {
            if *minor <= 0.0 {
                return Err(Error::InvalidMatrix(format!(
                    "not positive definite: leading minor {} is {minor}",
                    k + 1
                )));
            }
        }
        let det = a.det();
        let mut inv = SmallMatrix::zeros(a.dim);
        match a.dim {
            1 => inv.m[0][0] = 1.0 / a.m[0][0],
            _ => {
                inv.m[0][0] = a.m[1][1] / det;
                inv.m[1][1] = a.m[0][0] / det;
                inv.m[0][1] = -a.m[0][1] / det;
                inv.m[1][0] = -a.m[1][0] / det;
            }
        }
        for i in 0..a.dim {
            for j in 0..a.dim {
                let p: f64 = (0..a.dim).map(|k| inv.m[i][k] * a.m[k][j]).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                if (p - target).abs() > 1e-12 {
                    return Err(Error::InvalidMatrix(format!(
                        "inverse residual {:.3e} at ({i},{j}) exceeds 1e-12",
                        (p - target).abs()
                    )));
                }
            }
        }
        Ok(Self { a, inv })
    }

    pub fn dim(&self) -> usize {
        self.a.dim
    }

    pub fn matrix(&self) -> &SmallMatrix {
        &self.a
    }

    pub fn inverse(&self) -> &SmallMatrix {
        &self.inv
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim()).map(|i| (0..self.dim()).map(|j| self.a.m[i][j]).collect()).collect()
    }

    /// ‖x‖²_A
    pub fn norm_sq(&self, x: &[f64]) -> f64 {
        self.a.quad_form(x)
    }

    pub fn norm(&self, x: &[f64]) -> f64 {
        self.norm_sq(x).max(0.0).sqrt()
    }

    /// ‖y‖²_{A⁻¹}
    pub fn dual_norm_sq(&self, y: &[f64]) -> f64 {
        self.inv.quad_form(y)
    }

    pub fn dual_norm(&self, y: &[f64]) -> f64 {
        self.dual_norm_sq(y).max(0.0).sqrt()
    }

    pub fn apply(&self, x: &[f64]) -> [f64; 2] {
        self.a.mul_vec(x)
    }

    pub fn apply_inverse(&self, y: &[f64]) -> [f64; 2] {
        self.inv.mul_vec(y)
    }

    pub fn lambda_max(&self) -> f64 {
        *self.a.sym_eigenvalues().last().unwrap()
    }

    pub fn lambda_min(&self) -> f64 {
        self.a.sym_eigenvalues()[0]
    }
}

impl TryFrom<Vec<Vec<f64>>> for AnisotropyMatrix {
    type Error = Error;
    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(&rows)
    }
}

impl From<AnisotropyMatrix> for Vec<Vec<f64>> {
    fn from(a: AnisotropyMatrix) -> Self {
        a.rows()
    }
}
