use serde::Serialize;

use super::potential::Potential;
use super::profile::SaturationProfile;
use super::ExtReal;
use crate::numerics::{ladder_limit, LadderLimit};
use crate::{Error, Result};

/// Outcome of testing lim √z g(z) = 1/√2, |z g'/g| ≤ 1/2 and the enhanced
/// condition lim z^{3/2} g'(z) = −α.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayReport {
    pub limit_estimate: ExtReal,
    pub ratio_bound: f64,
    /// Sample where `ratio_bound` is attained.
    pub ratio_argmax: f64,
    /// Smallest sampled z with |z g'/g| > 1/2 + tol.
    pub first_ratio_violation: Option<f64>,
    /// Smallest sampled z with g(z) ≤ 0.
    pub nonpositive_at: Option<f64>,
    pub enhanced_alpha: Option<f64>,
    pub passes_basic: bool,
    pub passes_enhanced: bool,
    pub failures: Vec<String>,
}

fn dense_samples(z_max: f64) -> Vec<f64> {
    let mut zs: Vec<f64> = (0..=2000).map(|i| 10.0 * i as f64 / 2000.0).filter(|z| *z <= z_max).collect();
    let decades = (z_max / 1e-8).log10();
    let n = (decades * 40.0).ceil() as usize;
    for i in 0..=n {
        let z = 1e-8 * 10f64.powf(decades * i as f64 / n as f64);
        if z > 10.0 {
            zs.push(z.min(z_max));
        } else {
            zs.push(z);
        }
    }
    zs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    zs.dedup();
    zs
}

/// Ladder z_k = z_max 4^{-k}, increasing in z.
fn ladder(z_max: f64) -> Vec<f64> {
    (0..14).rev().map(|k| z_max * 0.25f64.powi(k)).collect()
}

pub fn check_decay_conditions(profile: &SaturationProfile, z_max: f64, tol: f64) -> Result<DecayReport> {
    if !(z_max > 10.0) || !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("need z_max > 10 and tol > 0 (got {z_max}, {tol})")));
    }
    let mut failures = Vec::new();

    let mut ratio_bound: f64 = 0.0;
    let mut ratio_argmax = 0.0;
    let mut first_ratio_violation = None;
    let mut nonpositive_at = None;
    for z in dense_samples(z_max) {
        let g = profile.eval(z);
        if !g.is_finite() {
            return Err(Error::NonFiniteProfile { z, value: g });
        }
        if g <= 0.0 {
            nonpositive_at.get_or_insert(z);
            continue;
        }
        let r = profile.log_ratio(z);
        if !r.is_finite() {
            return Err(Error::NonFiniteProfile { z, value: profile.deriv(z) });
        }
        if r > ratio_bound {
            ratio_bound = r;
            ratio_argmax = z;
        }
        if r > 0.5 + tol && first_ratio_violation.is_none() {
            first_ratio_violation = Some(z);
        }
    }
    if let Some(z) = nonpositive_at {
        failures.push(format!("g is not positive at z = {z:e}"));
    }
    if let Some(z) = first_ratio_violation {
        failures.push(format!(
            "|z g'(z)/g(z)| exceeds 1/2 from z = {z:.4} on (sup {ratio_bound:.4} at z = {ratio_argmax:.4})"
        ));
    }

    let zs = ladder(z_max);
    let scaled: Vec<f64> = zs.iter().map(|z| z.sqrt() * profile.eval(*z)).collect();
    if let Some(v) = scaled.iter().find(|v| !v.is_finite()) {
        return Err(Error::NonFiniteProfile { z: zs[scaled.iter().position(|x| x == v).unwrap()], value: *v });
    }
    let limit_estimate = match ladder_limit(&scaled, tol * 1e-3) {
        LadderLimit::Diverging => ExtReal::PosInfinity,
        LadderLimit::Converged(v) | LadderLimit::Unsettled(v) => ExtReal::Finite(v),
    };
    let target = std::f64::consts::FRAC_1_SQRT_2;
    let limit_ok = match limit_estimate {
        ExtReal::Finite(v) => {
            if (v - target).abs() > tol {
                failures.push(format!("lim sqrt(z) g(z) = {v:.6}, expected 1/sqrt(2)"));
            }
            (v - target).abs() <= tol
        }
        ExtReal::PosInfinity => {
            failures.push("sqrt(z) g(z) grows without bound (no saturation)".to_string());
            false
        }
    };
    let passes_basic = limit_ok && ratio_bound <= 0.5 + tol && nonpositive_at.is_none();

    let dscaled: Vec<f64> = zs.iter().map(|z| z.powf(1.5) * profile.deriv(*z)).collect();
    let enhanced_alpha = match ladder_limit(&dscaled, tol * 1e-3) {
        LadderLimit::Converged(v) | LadderLimit::Unsettled(v) if v.is_finite() => Some(-v),
        _ => None,
    };
    let alpha_ok = matches!(enhanced_alpha, Some(a) if a > tol && a <= 0.5 + tol);
    if !alpha_ok {
        match enhanced_alpha {
            Some(a) => failures.push(format!("alpha = {a:.6} is outside (0, 1/2]")),
            None => failures.push("z^(3/2) g'(z) has no finite limit".to_string()),
        }
    }
    let passes_enhanced = passes_basic && alpha_ok;

    Ok(DecayReport {
        limit_estimate,
        ratio_bound,
        ratio_argmax,
        first_ratio_violation,
        nonpositive_at,
        enhanced_alpha,
        passes_basic,
        passes_enhanced,
        failures,
    })
}

/// Principal minors of Dψ and the analytic criterion |g'|/g ‖r‖²_A/2 ≤ 1/2
/// over sampled r.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexityReport {
    pub worst_minor_margin: f64,
    pub worst_minor_at: Vec<f64>,
    pub analytic_ratio_margin: f64,
    pub worst_ratio_z: f64,
    pub passes: bool,
}

pub fn check_convexity(p: &Potential, sample_radii: &[f64], sample_dirs: usize) -> ConvexityReport {
    let d = p.dim();
    let dirs: Vec<[f64; 2]> = if d == 1 {
        vec![[1.0, 0.0], [-1.0, 0.0]]
    } else {
        let n = sample_dirs.max(1);
        (0..n)
            .map(|k| {
                let a = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                [a.cos(), a.sin()]
            })
            .collect()
    };
    let mut radii: Vec<f64> = sample_radii.to_vec();
    radii.extend([0.0, 1e-8]);

    let mut worst_minor = f64::INFINITY;
    let mut worst_minor_at = vec![0.0; d];
    let mut worst_ratio: f64 = 0.0;
    let mut worst_ratio_z = 0.0;
    for &rad in &radii {
        for th in &dirs {
            let r = [rad * th[0], rad * th[1]];
            let j = p.jacobian(&r[..d]);
            for m in j.principal_minors() {
                if m < worst_minor {
                    worst_minor = m;
                    worst_minor_at = r[..d].to_vec();
                }
            }
            let z = 0.5 * p.matrix().norm_sq(&r[..d]);
            let ratio = p.profile().log_ratio(z);
            if ratio > worst_ratio {
                worst_ratio = ratio;
                worst_ratio_z = z;
            }
        }
    }
    let analytic_ratio_margin = 0.5 - worst_ratio;
    ConvexityReport {
        worst_minor_margin: worst_minor,
        worst_minor_at,
        analytic_ratio_margin,
        worst_ratio_z,
        passes: worst_minor >= -1e-10 && analytic_ratio_margin >= -1e-10,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::matrix::AnisotropyMatrix;
    use crate::convex::potential::make_potential;
    use crate::convex::profile::make_pmodel_profile;

    #[test]
    fn relativistic_decay() {
        let r = check_decay_conditions(&make_pmodel_profile(2.0).unwrap(), 1e12, 1e-6).unwrap();
        assert!(r.passes_basic && r.passes_enhanced, "{r:?}");
        match r.limit_estimate {
            ExtReal::Finite(v) => assert!((v - 0.707_106_781_186_547_5).abs() < 1e-9),
            _ => panic!(),
        }
        assert!((r.enhanced_alpha.unwrap() - 0.353_553_390_593_273_8).abs() < 1e-9);
    }

    #[test]
    fn heat_profile_fails() {
        let r = check_decay_conditions(&SaturationProfile::constant(1.0), 1e12, 1e-6).unwrap();
        assert!(!r.passes_basic);
        assert_eq!(r.limit_estimate, ExtReal::PosInfinity);
    }

    #[test]
    fn exponential_fails_ratio() {
        let g = SaturationProfile::exponential();
        let r = check_decay_conditions(&g, 1e12, 1e-6).unwrap();
        assert!(!r.passes_basic);
        let z0 = r.first_ratio_violation.unwrap();
        assert!(z0 > 0.5 && z0 < 0.51, "{z0}");
        assert!((g.log_ratio(1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn nonfinite_is_reported() {
        let g = SaturationProfile::custom("bad", |z| if z > 2.0 { f64::NAN } else { 1.0 }, |_| 0.0, true);
        match check_decay_conditions(&g, 1e8, 1e-6) {
            Err(Error::NonFiniteProfile { z, .. }) => assert!(z > 2.0 && z < 2.01),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn convexity_of_pmodels() {
        for p in [1.0, 2.0, 3.0] {
            let pot = make_potential(
                make_pmodel_profile(p).unwrap(),
                AnisotropyMatrix::new(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap(),
                1.0,
            )
            .unwrap();
            let rep = check_convexity(&pot, &[0.01, 0.3, 1.0, 10.0, 1e3], 32);
            assert!(rep.passes, "p={p}: {rep:?}");
        }
    }

    #[test]
    fn convexity_of_exponential_fails() {
        let pot = Potential::without_decay_check(SaturationProfile::exponential(), AnisotropyMatrix::identity(2), 1.0).unwrap();
        let rep = check_convexity(&pot, &[0.5, 1.0, 1.5, 2.0], 16);
        assert!(!rep.passes);
        assert!(rep.worst_ratio_z > 0.5);
    }
}
