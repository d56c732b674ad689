use super::potential::Potential;
use super::{BoundaryCost, CostValue};
use crate::{Error, Result};

/// k(y) = Φ*(y).
///
/// With y = A w, k(y) = sup_R { R m − G(R²/2) } where m = ‖w‖_A = ‖y‖_{A⁻¹}.
/// The derivative m − R g(R²/2) is decreasing, so the maximiser is found by
/// bisection. For m > ℓ the supremum is +∞; for m = ℓ it is the integral of
/// ℓ − ρ g(ρ²/2), whose finiteness was settled when P was built.
pub fn legendre_transform(p: &Potential, y: &[f64]) -> CostValue {
    let m = p.matrix().dual_norm(y);
    if m == 0.0 {
        return CostValue::Finite { value: 0.0 };
    }
    let ell = p.ell();
    let edge = 1e-12 * ell.max(1.0);
    if m > ell + edge {
        return CostValue::Infinite;
    }
    if (m - ell).abs() <= edge {
        return at_boundary(p);
    }
    let h = |r: f64| r * p.profile().eval(0.5 * r * r);
    let mut hi = 1.0;
    while h(hi) < m {
        hi *= 2.0;
        if hi > 1e150 {
            return at_boundary(p);
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if h(mid) < m {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let r = 0.5 * (lo + hi);
    let value = (r * m - p.big_g(0.5 * r * r)).max(0.0);
    CostValue::Finite { value }
}

fn at_boundary(p: &Potential) -> CostValue {
    match p.boundary_cost() {
        BoundaryCost::Finite(v) => CostValue::Finite { value: v },
        BoundaryCost::Infinite => CostValue::Infinite,
        BoundaryCost::Inconclusive { partial } => CostValue::Inconclusive { lower_bound: partial },
    }
}

/// Brute-force conjugate: Φ evaluated once on a fixed sample set, then
/// max_x (y·x − Φ(x)) for any number of y.
#[derive(Debug, Clone)]
pub struct LegendreGrid {
    dim: usize,
    points: Vec<[f64; 2]>,
    values: Vec<f64>,
}

impl LegendreGrid {
    pub fn new(p: &Potential, samples: &[Vec<f64>]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySet("legendre oracle needs at least one sample point".to_string()));
        }
        let d = p.dim();
        let mut points = Vec::with_capacity(samples.len());
        let mut values = Vec::with_capacity(samples.len());
        for s in samples {
            if s.len() != d {
                return Err(Error::InvalidParameter(format!("sample of length {} in dimension {d}", s.len())));
            }
            let mut q = [0.0; 2];
            q[..d].copy_from_slice(s);
            points.push(q);
            values.push(p.eval(s));
        }
        Ok(Self { dim: d, points, values })
    }

    /// From precomputed pairs (x, f(x)); f need not be a potential.
    pub fn from_values(dim: usize, points: &[Vec<f64>], values: &[f64]) -> Result<Self> {
        if points.is_empty() || points.len() != values.len() {
            return Err(Error::EmptySet("need matching, non-empty points and values".to_string()));
        }
        let pts = points
            .iter()
            .map(|s| {
                let mut q = [0.0; 2];
                q[..dim].copy_from_slice(&s[..dim]);
                q
            })
            .collect();
        Ok(Self { dim, points: pts, values: values.to_vec() })
    }

    pub fn transform(&self, y: &[f64]) -> f64 {
        let mut best = f64::NEG_INFINITY;
        for (x, f) in self.points.iter().zip(&self.values) {
            let dot: f64 = (0..self.dim).map(|i| x[i] * y[i]).sum();
            let v = dot - f;
            if v > best {
                best = v;
            }
        }
        best
    }
}

/// max over samples of y·x − Φ(x); always a lower bound for k(y).
pub fn grid_legendre_oracle(p: &Potential, y: &[f64], samples: &[Vec<f64>]) -> Result<f64> {
    Ok(LegendreGrid::new(p, samples)?.transform(y))
}

/// Samples on rays through the origin: `n_radial` uniformly spaced radii in
/// (0, r_max] along `n_dirs` directions (2D) or ±1 (1D), plus the origin.
pub fn radial_samples(dim: usize, r_max: f64, n_radial: usize, n_dirs: usize) -> Vec<Vec<f64>> {
    let mut out = vec![vec![0.0; dim]];
    let dirs: Vec<Vec<f64>> = if dim == 1 {
        vec![vec![1.0], vec![-1.0]]
    } else {
        (0..n_dirs)
            .map(|k| {
                let a = 2.0 * std::f64::consts::PI * k as f64 / n_dirs as f64;
                vec![a.cos(), a.sin()]
            })
            .collect()
    };
    for i in 1..=n_radial {
        let r = r_max * i as f64 / n_radial as f64;
        for d in &dirs {
            out.push(d.iter().map(|v| v * r).collect());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::{make_potential, make_pmodel_profile, AnisotropyMatrix};

    fn wilson() -> Potential {
        make_potential(make_pmodel_profile(1.0).unwrap(), AnisotropyMatrix::identity(1), 1.0).unwrap()
    }

    #[test]
    fn wilson_values() {
        let p = wilson();
        assert_eq!(legendre_transform(&p, &[0.0]), CostValue::Finite { value: 0.0 });
        let k = legendre_transform(&p, &[0.5]).finite().unwrap();
        assert!((k - (-0.5 + 2f64.ln())).abs() < 1e-12, "{k}");
        assert!(legendre_transform(&p, &[1.2]).is_infinite());
        assert!(legendre_transform(&p, &[-1.0]).is_infinite());
    }

    #[test]
    fn relativistic_values() {
        let p = make_potential(make_pmodel_profile(2.0).unwrap(), AnisotropyMatrix::identity(2), 1.0).unwrap();
        let k = legendre_transform(&p, &[0.6, 0.0]).finite().unwrap();
        assert!((k - 0.2).abs() < 1e-12);
        let kb = legendre_transform(&p, &[0.0, 1.0]).finite().unwrap();
        assert!((kb - 1.0).abs() < 1e-6);
    }

    #[test]
    fn oracle_lower_bound_and_divergence() {
        let p = wilson();
        let samples = radial_samples(1, 50.0, 50_000, 0);
        let k = grid_legendre_oracle(&p, &[0.5], &samples).unwrap();
        assert!((k - 0.193_147_180_559_945_3).abs() < 2e-3);
        assert!(k <= 0.193_147_180_559_945_3 + 1e-12);
        let small = grid_legendre_oracle(&p, &[1.2], &radial_samples(1, 10.0, 1000, 0)).unwrap();
        let big = grid_legendre_oracle(&p, &[1.2], &radial_samples(1, 100.0, 10_000, 0)).unwrap();
        assert!(big > small + 1.0);
        assert!(grid_legendre_oracle(&p, &[0.1], &[]).is_err());
    }
}
