use serde::Serialize;

use crate::convex::{check_decay_conditions, AnisotropyMatrix, SaturationProfile, DECAY_TOL, DECAY_Z_MAX};
use crate::numerics::{ladder_limit, LadderLimit};
use crate::{Error, Result};

/// W(t, x) = e^{-at} √(R(t)² − ‖x‖²_{A⁻¹}) on the ball R(t) B̄_{A⁻¹}, zero
/// outside, with R(t) = R₀ + t.
pub fn subsolution_field(matrix: &AnisotropyMatrix, r0: f64, a: f64, t: f64, x: &[f64]) -> f64 {
    let r = r0 + t;
    let s2 = matrix.dual_norm_sq(x);
    if s2 >= r * r {
        0.0
    } else {
        (-a * t).exp() * (r * r - s2).sqrt()
    }
}

/// The two profile-dependent terms of the brace at ‖x‖²_{A⁻¹} = λR²:
/// ((d−1)λ − d)/((1−λ)R) g(z) and −λ(1+λ)/((1−λ)³R³) g'(z),
/// z = λ / (2(1−λ)²R²).
pub fn subsolution_terms(profile: &SaturationProfile, dim: usize, lambda: f64, r: f64) -> (f64, f64) {
    let d = dim as f64;
    let e = 1.0 - lambda;
    let z = lambda / (2.0 * e * e * r * r);
    let gt = ((d - 1.0) * lambda - d) / (e * r) * profile.eval(z);
    let dt = if lambda == 0.0 { 0.0 } else { -lambda * (1.0 + lambda) / (e * e * e * r * r * r) * profile.deriv(z) };
    (gt, dt)
}

/// Right side ρ(λ, R) of the pointwise condition −a ≤ ρ, equivalent to
/// W_t ≤ div(g(‖∇W/W‖²_A/2) A∇W) inside the support. Exactly,
/// W_t − div(g A∇W) = W·(−a − ρ).
pub fn subsolution_rhs(profile: &SaturationProfile, dim: usize, lambda: f64, r: f64) -> f64 {
    let (gt, dt) = subsolution_terms(profile, dim, lambda, r);
    (-1.0 + gt + dt) / ((1.0 - lambda) * r)
}

/// λ = 0 together with 1 − λ = 2^{-k}, k = 1..=20.
pub fn default_lambda_samples() -> Vec<f64> {
    let mut v = vec![0.0];
    v.extend((1..=20).map(|k| 1.0 - 0.5f64.powi(k)));
    v
}

#[derive(Debug, Clone, Serialize)]
pub struct SubsolutionCertificate {
    pub profile: String,
    pub matrix: Vec<Vec<f64>>,
    pub r0: f64,
    pub r_range: (f64, f64),
    pub lambda_grid: Vec<f64>,
    pub rhs_infimum: f64,
    /// (λ, R) where the infimum is attained.
    pub argmin: (f64, f64),
    pub minimal_a: f64,
    /// g-term and g'-term at the λ closest to 1, R = R₀.
    pub g_term_limit: f64,
    pub gprime_term_limit: f64,
    /// 2^{5/2} α from the enhanced decay limit.
    pub gprime_term_expected: Option<f64>,
    /// ρ(λ_k, R₀) along the λ grid.
    pub rhs_at_r0: Vec<f64>,
    pub valid: bool,
    pub reason: Option<String>,
}

/// Scans ρ over λ × R with R ∈ `r_range` (9 samples) and reports
/// a = max(0, −inf ρ). The certificate is invalid when the profile lacks
/// enhanced decay or ρ runs off to −∞ as λ → 1.
pub fn verify_subsolution(
    profile: &SaturationProfile,
    matrix: &AnisotropyMatrix,
    r0: f64,
    lambda_samples: &[f64],
    r_range: (f64, f64),
) -> Result<SubsolutionCertificate> {
    if !(r0 > 0.0) || !(r_range.0 > 0.0 && r_range.1 >= r_range.0) || !r_range.1.is_finite() {
        return Err(Error::InvalidParameter(format!("need R0 > 0 and 0 < R_lo <= R_hi, got {r0}, {r_range:?}")));
    }
    let mut lambdas: Vec<f64> = lambda_samples.to_vec();
    if lambdas.iter().any(|l| !(*l >= 0.0 && *l < 1.0)) {
        return Err(Error::InvalidParameter("lambda samples must lie in [0, 1)".into()));
    }
    lambdas.sort_by(|a, b| a.partial_cmp(b).unwrap());
    lambdas.dedup();
    if lambdas.len() < 4 {
        return Err(Error::InvalidParameter("need at least 4 lambda samples".into()));
    }
    let dim = matrix.dim();
    let decay = check_decay_conditions(profile, DECAY_Z_MAX, DECAY_TOL)?;

    let n_r = if r_range.1 > r_range.0 { 9 } else { 1 };
    let rs: Vec<f64> = (0..n_r)
        .map(|i| if n_r == 1 { r_range.0 } else { r_range.0 + (r_range.1 - r_range.0) * i as f64 / (n_r - 1) as f64 })
        .collect();

    let mut reason = None;
    if !decay.passes_basic {
        reason = Some(format!("profile fails the basic decay conditions: {}", decay.failures.join("; ")));
    } else if !decay.passes_enhanced {
        reason = Some("profile lacks the enhanced decay limit z^{3/2} g'(z) -> -alpha".to_string());
    }

    let mut inf = f64::INFINITY;
    let mut argmin = (f64::NAN, f64::NAN);
    for &r in &rs {
        let row: Vec<f64> = lambdas.iter().map(|&l| subsolution_rhs(profile, dim, l, r)).collect();
        for (&l, &v) in lambdas.iter().zip(&row) {
            if v.is_nan() && reason.is_none() {
                reason = Some(format!("right side is NaN at lambda = {l}, R = {r}"));
            }
            if v < inf {
                inf = v;
                argmin = (l, r);
            }
        }
        if reason.is_none() {
            let tail: Vec<f64> = row.iter().rev().take(6).rev().cloned().collect();
            if matches!(ladder_limit(&tail, 1e-3), LadderLimit::Diverging) || row.iter().any(|v| *v == f64::NEG_INFINITY) {
                reason = Some(format!("right side diverges to -infinity as lambda -> 1 at R = {r}"));
            }
        }
    }

    let rhs_at_r0: Vec<f64> = lambdas.iter().map(|&l| subsolution_rhs(profile, dim, l, r0)).collect();
    let (g_term_limit, gprime_term_limit) = subsolution_terms(profile, dim, *lambdas.last().unwrap(), r0);
    let valid = reason.is_none() && inf.is_finite();
    Ok(SubsolutionCertificate {
        profile: profile.id(),
        matrix: matrix.rows(),
        r0,
        r_range,
        lambda_grid: lambdas,
        rhs_infimum: inf,
        argmin,
        minimal_a: if valid { (-inf).max(0.0) } else { f64::INFINITY },
        g_term_limit,
        gprime_term_limit,
        gprime_term_expected: decay.enhanced_alpha.map(|a| 2f64.powf(2.5) * a),
        rhs_at_r0,
        valid,
        reason,
    })
}
