use std::sync::Arc;

use super::checks::{check_decay_conditions, DecayReport};
use super::matrix::{AnisotropyMatrix, SmallMatrix};
use super::profile::SaturationProfile;
use super::{BoundaryCost, ExtReal};
use crate::numerics::{integrate, ladder_limit, LadderLimit};
use crate::{Error, Result};

/// z-range used when validating decay at construction.
pub const DECAY_Z_MAX: f64 = 1e16;
pub const DECAY_TOL: f64 = 1e-6;

const NODE_LO_EXP: i32 = -40;
const NODE_HI_EXP: i32 = 60;
const SEG_ABS_TOL: f64 = 1e-13;
const SEG_REL_TOL: f64 = 1e-14;

/// Primitive G(z) = ∫₀^z g, tabulated at 0 and 2^k, k = -40..=60.
#[derive(Debug)]
struct Primitive {
    nodes: Vec<f64>,
    cumul: Vec<f64>,
}

impl Primitive {
    fn build(profile: &SaturationProfile) -> Result<Self> {
        let mut nodes = vec![0.0];
        nodes.extend((NODE_LO_EXP..=NODE_HI_EXP).map(|k| 2f64.powi(k)));
        let mut cumul = Vec::with_capacity(nodes.len());
        cumul.push(0.0);
        for w in nodes.windows(2) {
            let q = integrate(|z| profile.eval(z), w[0], w[1], SEG_ABS_TOL, SEG_REL_TOL);
            if !q.converged || !q.value.is_finite() {
                return Err(Error::Quadrature { a: w[0], b: w[1], estimate: q.error });
            }
            let prev = *cumul.last().unwrap();
            cumul.push(prev + q.value);
        }
        Ok(Self { nodes, cumul })
    }

    fn eval(&self, profile: &SaturationProfile, z: f64) -> f64 {
        if z <= 0.0 {
            return 0.0;
        }
        let idx = self.nodes.partition_point(|&n| n <= z) - 1;
        let mut acc = self.cumul[idx];
        let mut lo = self.nodes[idx];
        if idx + 1 == self.nodes.len() {
            // beyond the table: march in doublings
            while 2.0 * lo < z {
                acc += integrate(|s| profile.eval(s), lo, 2.0 * lo, SEG_ABS_TOL, SEG_REL_TOL).value;
                lo *= 2.0;
            }
        }
        acc + integrate(|s| profile.eval(s), lo, z, SEG_ABS_TOL, SEG_REL_TOL).value
    }
}

/// Values of the structure functions at (z, ξ).
#[derive(Debug, Clone, PartialEq)]
pub struct StructureValues {
    /// a(z, ξ) = z ψ(ξ / z)
    pub a: Vec<f64>,
    /// F(z, ξ) = z² Φ(ξ / |z|)
    pub f: f64,
    /// h(z, ξ) = a(z, ξ) · ξ
    pub h: f64,
    /// |z| |ξ| Φ_∞(ξ / |ξ|)
    pub f_inf: f64,
    pub h_inf: f64,
    /// ‖ψ‖_∞ |z| |ξ|
    pub h_bound: f64,
}

impl StructureValues {
    pub fn within_bound(&self) -> bool {
        self.h.abs() <= self.h_bound * (1.0 + 1e-12) + 1e-300
    }
}

/// Φ(r) = G(‖r‖²_A / 2) together with everything derived from it.
#[derive(Debug, Clone)]
pub struct Potential {
    profile: SaturationProfile,
    matrix: AnisotropyMatrix,
    lengthscale: f64,
    primitive: Arc<Primitive>,
    ell: f64,
    decay: DecayReport,
    boundary_cost: BoundaryCost,
}

/// Builds Φ from a profile passing the basic decay conditions.
pub fn make_potential(profile: SaturationProfile, matrix: AnisotropyMatrix, lengthscale: f64) -> Result<Potential> {
    let decay = check_decay_conditions(&profile, DECAY_Z_MAX, DECAY_TOL)?;
    if !decay.passes_basic {
        return Err(Error::DecayViolation(decay.failures.join("; ")));
    }
    Potential::assemble(profile, matrix, lengthscale, decay)
}

impl Potential {
    /// Builds Φ without requiring the decay conditions, for inspecting
    /// profiles that fail them. The limit of √z g(z) must still be finite.
    pub fn without_decay_check(profile: SaturationProfile, matrix: AnisotropyMatrix, lengthscale: f64) -> Result<Self> {
        let decay = check_decay_conditions(&profile, DECAY_Z_MAX, DECAY_TOL)?;
        Self::assemble(profile, matrix, lengthscale, decay)
    }

    fn assemble(profile: SaturationProfile, matrix: AnisotropyMatrix, lengthscale: f64, decay: DecayReport) -> Result<Self> {
        if !(lengthscale > 0.0 && lengthscale.is_finite()) {
            return Err(Error::InvalidParameter(format!("lengthscale must be positive, got {lengthscale}")));
        }
        let ell = match decay.limit_estimate {
            ExtReal::Finite(v) => std::f64::consts::SQRT_2 * v,
            ExtReal::PosInfinity => {
                return Err(Error::DecayViolation(
                    "sqrt(z) g(z) is unbounded, the flux never saturates".to_string(),
                ))
            }
        };
        let primitive = Arc::new(Primitive::build(&profile)?);
        let boundary_cost = boundary_cost(&profile, ell);
        Ok(Self { profile, matrix, lengthscale, primitive, ell, decay, boundary_cost })
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn profile(&self) -> &SaturationProfile {
        &self.profile
    }

    pub fn matrix(&self) -> &AnisotropyMatrix {
        &self.matrix
    }

    pub fn lengthscale(&self) -> f64 {
        self.lengthscale
    }

    /// Saturation level ℓ = √2 lim √z g(z).
    pub fn ell(&self) -> f64 {
        self.ell
    }

    pub fn decay_report(&self) -> &DecayReport {
        &self.decay
    }

    /// Finiteness of k on the boundary of its domain.
    pub fn boundary_cost(&self) -> BoundaryCost {
        self.boundary_cost
    }

    /// G(z) = ∫₀^z g
    pub fn big_g(&self, z: f64) -> f64 {
        self.primitive.eval(&self.profile, z)
    }

    /// Φ(r)
    pub fn eval(&self, r: &[f64]) -> f64 {
        self.big_g(0.5 * self.matrix.norm_sq(r))
    }

    /// ψ(r) = g(‖r‖²_A/2) A r, padded to two components.
    #[inline]
    pub fn flux2(&self, r: &[f64]) -> [f64; 2] {
        let ar = self.matrix.apply(r);
        let z = 0.5 * (0..self.dim()).map(|i| r[i] * ar[i]).sum::<f64>();
        let g = self.profile.eval(z);
        [g * ar[0], g * ar[1]]
    }

    pub fn flux(&self, r: &[f64]) -> Vec<f64> {
        self.flux2(r)[..self.dim()].to_vec()
    }

    /// Dψ = g' (Ar)(Ar)ᵀ + g A
    pub fn jacobian(&self, r: &[f64]) -> SmallMatrix {
        let d = self.dim();
        let ar = self.matrix.apply(r);
        let z = 0.5 * self.matrix.norm_sq(r);
        let g = self.profile.eval(z);
        let dg = if z == 0.0 { 0.0 } else { self.profile.deriv(z) };
        let mut out = SmallMatrix::zeros(d);
        let a = self.matrix.matrix();
        for i in 0..d {
            for j in 0..d {
                out.m[i][j] = dg * ar[i] * ar[j] + g * a.m[i][j];
            }
        }
        out
    }

    /// Closed-form recession function ℓ‖θ‖_A.
    pub fn recession_exact(&self, theta: &[f64]) -> f64 {
        self.ell * self.matrix.norm(theta)
    }

    /// lim_{t→0⁺} t Φ(θ/t), extrapolated from t ∈ {t_min 2^k}.
    pub fn recession(&self, theta: &[f64], t_min: f64) -> Result<f64> {
        let norm: f64 = theta.iter().map(|v| v * v).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("direction must be a unit vector, |theta| = {norm}")));
        }
        if !(t_min > 0.0) {
            return Err(Error::InvalidParameter(format!("t_min must be positive, got {t_min}")));
        }
        let levels = 12;
        let mut seq = Vec::with_capacity(levels);
        for k in (0..levels).rev() {
            let t = t_min * 2f64.powi(k as i32);
            let x: Vec<f64> = theta.iter().map(|v| v / t).collect();
            let v = t * self.eval(&x);
            if !v.is_finite() {
                return Err(Error::Extrapolation(format!("t Phi(theta/t) is not finite at t = {t}")));
            }
            seq.push(v);
        }
        // Richardson on the leading O(t) term, then a settle check
        let rich: Vec<f64> = seq.windows(2).map(|w| 2.0 * w[1] - w[0]).collect();
        match ladder_limit(&rich, 1e-8) {
            LadderLimit::Converged(v) => Ok(v),
            LadderLimit::Diverging => Err(Error::Extrapolation("recession sequence diverges".to_string())),
            LadderLimit::Unsettled(v) => Err(Error::Extrapolation(format!(
                "recession estimates did not settle (last {v}, raw {})",
                seq[seq.len() - 1]
            ))),
        }
    }

    /// ‖ψ‖_∞ = ℓ √λ_max(A)
    pub fn psi_sup(&self) -> f64 {
        self.ell * self.matrix.lambda_max().sqrt()
    }

    /// Structure functions a, F, h and their recession counterparts.
    pub fn structure_functions(&self, z: f64, xi: &[f64]) -> StructureValues {
        let d = self.dim();
        let xi_norm = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
        let f_inf = if xi_norm == 0.0 { 0.0 } else { z.abs() * self.recession_exact(xi) };
        let h_bound = self.psi_sup() * z.abs() * xi_norm;
        if z == 0.0 || xi_norm == 0.0 {
            return StructureValues { a: vec![0.0; d], f: 0.0, h: 0.0, f_inf, h_inf: f_inf, h_bound };
        }
        let r: Vec<f64> = xi.iter().map(|v| v / z).collect();
        let psi = self.flux2(&r);
        let a: Vec<f64> = (0..d).map(|i| z * psi[i]).collect();
        let r_abs: Vec<f64> = xi.iter().map(|v| v / z.abs()).collect();
        let f = z * z * self.eval(&r_abs);
        let h = (0..d).map(|i| a[i] * xi[i]).sum();
        StructureValues { a, f, h, f_inf, h_inf: f_inf, h_bound }
    }
}

/// Decides whether z ↦ ℓ − z g(z²/2) is integrable on (0, ∞) by fitting its
/// power-law decay over decades up to 1e8.
fn boundary_cost(profile: &SaturationProfile, ell: f64) -> BoundaryCost {
    if ell <= 0.0 {
        return BoundaryCost::Inconclusive { partial: 0.0 };
    }
    let f = |z: f64| (ell - z * profile.eval(0.5 * z * z)).abs();
    let floor = 1e-9 * ell;
    let mut last_valid = 0.0;
    let mut prev: Option<(f64, f64)> = None;
    let mut slope: Option<f64> = None;
    for k in 0..=8 {
        let z = 10f64.powi(k);
        let v = f(z);
        if v <= floor {
            break;
        }
        if let Some((_, pv)) = prev {
            slope = Some((pv / v).log10());
        }
        prev = Some((z, v));
        last_valid = z;
    }
    if last_valid == 0.0 {
        let partial = integrate(f, 0.0, 1.0, 1e-13, 1e-12).value;
        return BoundaryCost::Finite(partial);
    }
    let mut partial = integrate(f, 0.0, 1.0, 1e-13, 1e-12).value;
    let mut lo = 1.0;
    while lo < last_valid {
        partial += integrate(f, lo, 10.0 * lo, 1e-13, 1e-12).value;
        lo *= 10.0;
    }
    let fz = f(last_valid);
    match slope {
        Some(q) if q >= 1.2 => BoundaryCost::Finite(partial + fz * last_valid / (q - 1.0)),
        Some(q) if q <= 1.05 => BoundaryCost::Infinite,
        _ => BoundaryCost::Inconclusive { partial },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::profile::make_pmodel_profile;

    fn rhe(a: AnisotropyMatrix) -> Potential {
        make_potential(make_pmodel_profile(2.0).unwrap(), a, 1.0).unwrap()
    }

    #[test]
    fn relativistic_closed_forms() {
        let p = rhe(AnisotropyMatrix::identity(2));
        assert_eq!(p.eval(&[0.0, 0.0]), 0.0);
        let v = p.eval(&[1.0, 0.0]);
        assert!((v - (2f64.sqrt() - 1.0)).abs() < 1e-13, "{v}");
        for r in [0.1f64, 2.5, 40.0, 3e4] {
            let exact = (1.0 + r * r).sqrt() - 1.0;
            assert!((p.eval(&[r, 0.0]) - exact).abs() <= 1e-12 * (1.0 + exact));
        }
        assert!((p.ell() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn wilson_closed_form() {
        let p = make_potential(make_pmodel_profile(1.0).unwrap(), AnisotropyMatrix::identity(1), 1.0).unwrap();
        for r in [0.01f64, 1.0, 7.0, 1e3] {
            let exact = r - (1.0 + r).ln();
            assert!((p.eval(&[r]) - exact).abs() <= 1e-12 * (1.0 + exact), "r={r}");
        }
        assert!((p.eval(&[1.0]) - 0.306_852_819_440_054_7).abs() < 1e-12);
    }

    #[test]
    fn anisotropic_value() {
        let p = rhe(AnisotropyMatrix::diag(&[4.0, 1.0]).unwrap());
        assert!((p.eval(&[1.0, 0.0]) - (5f64.sqrt() - 1.0)).abs() < 1e-13);
    }

    #[test]
    fn flux_examples() {
        let p = rhe(AnisotropyMatrix::identity(2));
        assert_eq!(p.flux(&[0.0, 0.0]), vec![0.0, 0.0]);
        let f = p.flux(&[3.0, 4.0]);
        let s = 26f64.sqrt();
        assert!((f[0] - 3.0 / s).abs() < 1e-15 && (f[1] - 4.0 / s).abs() < 1e-15);
    }

    #[test]
    fn jacobian_at_origin_and_axis() {
        let a = AnisotropyMatrix::diag(&[4.0, 1.0]).unwrap();
        let p = rhe(a);
        let j0 = p.jacobian(&[0.0, 0.0]);
        assert_eq!(j0.m, [[4.0, 0.0], [0.0, 1.0]]);
        let q = rhe(AnisotropyMatrix::identity(2));
        let j = q.jacobian(&[1.0, 0.0]);
        // g(1/2) = 2^{-1/2}, g'(1/2) = -2^{-3/2}
        let g = 0.5f64.sqrt();
        let dg = -(2f64).powf(-1.5);
        assert!((j.m[0][0] - (dg + g)).abs() < 1e-15);
        assert!((j.m[1][1] - g).abs() < 1e-15);
        assert_eq!(j.m[0][1], 0.0);
    }

    #[test]
    fn recession_axes() {
        let p = rhe(AnisotropyMatrix::diag(&[4.0, 1.0]).unwrap());
        assert!((p.recession(&[1.0, 0.0], 1e-7).unwrap() - 2.0).abs() < 1e-6);
        assert!((p.recession(&[0.0, 1.0], 1e-7).unwrap() - 1.0).abs() < 1e-6);
        assert!(p.recession(&[1.0, 1.0], 1e-7).is_err());
    }

    #[test]
    fn wilson_recession_with_log_correction() {
        let p = make_potential(make_pmodel_profile(1.0).unwrap(), AnisotropyMatrix::identity(1), 1.0).unwrap();
        assert!((p.recession(&[1.0], 1e-8).unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn structure_function_example() {
        let p = rhe(AnisotropyMatrix::identity(2));
        let s = p.structure_functions(2.0, &[2.0, 0.0]);
        assert!((s.a[0] - 2f64.sqrt()).abs() < 1e-14 && s.a[1] == 0.0);
        assert!(s.within_bound());
        let z = p.structure_functions(0.0, &[1.0, 2.0]);
        assert_eq!(z.h, 0.0);
        let x = p.structure_functions(1.5, &[0.0, 0.0]);
        assert_eq!((x.a.clone(), x.f, x.h), (vec![0.0, 0.0], 0.0, 0.0));
    }

    #[test]
    fn boundary_costs() {
        let p2 = rhe(AnisotropyMatrix::identity(1));
        match p2.boundary_cost() {
            BoundaryCost::Finite(v) => assert!((v - 1.0).abs() < 1e-6, "{v}"),
            other => panic!("{other:?}"),
        }
        let p1 = make_potential(make_pmodel_profile(1.0).unwrap(), AnisotropyMatrix::identity(1), 1.0).unwrap();
        assert_eq!(p1.boundary_cost(), BoundaryCost::Infinite);
    }

    #[test]
    fn heat_profile_is_rejected() {
        let e = make_potential(SaturationProfile::constant(1.0), AnisotropyMatrix::identity(1), 1.0).unwrap_err();
        assert!(matches!(e, Error::DecayViolation(_)));
        assert!(Potential::without_decay_check(SaturationProfile::constant(1.0), AnisotropyMatrix::identity(1), 1.0).is_err());
    }
}
