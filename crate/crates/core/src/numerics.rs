//! Small numerical kernels shared by the rest of the crate: adaptive
//! Gauss–Kronrod quadrature, Aitken extrapolation of geometric ladders,
//! pairwise summation and a couple of scalar searches.

use crate::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One G7–K15 panel. Returns (Kronrod value, |Kronrod − Gauss|).
pub fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
}

/// Globally adaptive G7–K15 quadrature: the panel with the largest error
/// estimate is bisected until the summed estimate falls below
/// `max(abs_tol, rel_tol * |value|)` or a budget of 4000 panels is spent.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Quadrature {
    if a == b {
        return Quadrature { value: 0.0, error: 0.0, converged: true };
    }
    let (v0, e0) = gk15(&f, a, b);
    let mut panels = vec![(a, b, v0, e0)];
    let mut value = v0;
    let mut error = e0;
    while error > abs_tol.max(rel_tol * value.abs()) {
        if panels.len() >= 4000 || !value.is_finite() {
            return Quadrature { value, error, converged: false };
        }
        let (idx, _) = panels
            .iter()
            .enumerate()
            .fold((0, -1.0), |acc, (i, p)| if p.3 > acc.1 { (i, p.3) } else { acc });
        let (lo, hi, v, e) = panels.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Quadrature { value, error, converged: false };
        }
        let (vl, el) = gk15(&f, lo, mid);
        let (vr, er) = gk15(&f, mid, hi);
        value += vl + vr - v;
        error += el + er - e;
        panels.push((lo, mid, vl, el));
        panels.push((mid, hi, vr, er));
    }
    // re-sum for accuracy
    let value = panels.iter().map(|p| p.2).sum();
    Quadrature { value, error, converged: true }
}

/// Like [`integrate`] but turns non-convergence into an error.
pub fn integrate_checked<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<f64> {
    let q = integrate(f, a, b, abs_tol, rel_tol);
    if !q.value.is_finite() || !q.converged {
        return Err(Error::Quadrature { a, b, estimate: q.error });
    }
    Ok(q.value)
}

/// Outcome of extrapolating a sequence sampled on a geometric ladder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LadderLimit {
    /// Successive extrapolated estimates agreed within the tolerance.
    Converged(f64),
    /// The raw sequence grows geometrically without bound.
    Diverging,
    /// Neither of the above; carries the last extrapolated estimate.
    Unsettled(f64),
}

/// Aitken Δ² on a sequence whose error behaves like a power of the ladder
/// parameter. Returns the extrapolated sequence (two shorter than `s`).
pub fn aitken(s: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(s.len().saturating_sub(2));
    for w in s.windows(3) {
        let d1 = w[1] - w[0];
        let d2 = w[2] - w[1];
        let den = d2 - d1;
        if den.abs() <= 1e-300 || !den.is_finite() || d2 == 0.0 {
            out.push(w[2]);
        } else {
            out.push(w[2] - d2 * d2 / den);
        }
    }
    out
}

/// Limit of a ladder sequence: divergence by growth ratio, otherwise Aitken
/// extrapolation with convergence when the last two estimates differ by less
/// than `tol`.
pub fn ladder_limit(s: &[f64], tol: f64) -> LadderLimit {
    let n = s.len();
    if n >= 4 {
        let tail = &s[n - 4..];
        let growing = tail.windows(2).all(|w| w[0].abs() > 0.0 && (w[1] / w[0]) > 1.5);
        if growing || tail.iter().any(|v| v.is_infinite()) {
            return LadderLimit::Diverging;
        }
    }
    if n < 3 {
        return LadderLimit::Unsettled(*s.last().unwrap_or(&f64::NAN));
    }
    let acc = aitken(s);
    let last = acc[acc.len() - 1];
    if acc.len() >= 2 {
        let prev = acc[acc.len() - 2];
        if (last - prev).abs() <= tol * last.abs().max(1.0) {
            return LadderLimit::Converged(last);
        }
    }
    if (s[n - 1] - s[n - 2]).abs() <= tol * s[n - 1].abs().max(1.0) {
        return LadderLimit::Converged(s[n - 1]);
    }
    LadderLimit::Unsettled(last)
}

/// Pairwise (tree) summation; deterministic and accurate to O(ε log n).
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 16 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Least-squares line through (x, y). Returns (slope, intercept, rms residual).
pub fn fit_line(xs: &[f64], ys: &[f64]) -> Option<(f64, f64, f64)> {
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return None;
    }
    let nf = n as f64;
    let mx = pairwise_sum(xs) / nf;
    let my = pairwise_sum(ys) / nf;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx <= 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = xs.iter().zip(ys).map(|(x, y)| (y - slope * x - intercept).powi(2)).sum();
    Some((slope, intercept, (ss / nf).sqrt()))
}

/// Maximise a unimodal function on [a, b] by golden-section search.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..iters {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gk_integrates_polynomials_exactly() {
        let q = integrate(|x| x.powi(5) - 3.0 * x * x, -1.0, 2.0, 1e-14, 1e-14);
        let exact = (64.0 - 1.0) / 6.0 - (8.0 + 1.0);
        assert!((q.value - exact).abs() < 1e-12);
        assert!(q.converged);
    }

    #[test]
    fn adaptive_handles_sqrt_cusp() {
        let q = integrate(|x: f64| x.sqrt(), 0.0, 1.0, 1e-13, 1e-14);
        assert!((q.value - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn aitken_is_exact_for_geometric_error() {
        let s: Vec<f64> = (0..6).map(|k| 3.0 + 0.7 * 0.5f64.powi(k)).collect();
        match ladder_limit(&s, 1e-12) {
            LadderLimit::Converged(v) => assert!((v - 3.0).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn growth_is_flagged() {
        let s: Vec<f64> = (0..8).map(|k| 2f64.powi(k)).collect();
        assert_eq!(ladder_limit(&s, 1e-10), LadderLimit::Diverging);
    }

    #[test]
    fn pairwise_matches_naive_on_integers() {
        let xs: Vec<f64> = (1..=1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&xs), 500500.0);
    }

    #[test]
    fn line_fit_recovers_slope() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys = [1.0, 3.0, 5.0, 7.0];
        let (m, c, r) = fit_line(&xs, &ys).unwrap();
        assert!((m - 2.0).abs() < 1e-14 && (c - 1.0).abs() < 1e-14 && r < 1e-14);
    }

    #[test]
    fn golden_finds_parabola_peak() {
        let (x, _) = golden_max(|x| -(x - 0.3) * (x - 0.3), -1.0, 2.0, 100);
        assert!((x - 0.3).abs() < 1e-8);
    }
}
