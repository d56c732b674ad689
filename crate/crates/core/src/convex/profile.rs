use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::{Error, Result};

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ProfileFamily {
    /// g(z) = (1 + (2z)^{p/2})^{-1/p}
    PModel { p: f64 },
    /// g ≡ c; the linear heat equation when c = 1.
    Constant { value: f64 },
    /// g(z) = e^{-z}
    Exponential,
    Custom { name: String },
}

#[derive(Clone)]
enum Kind {
    PModel { p: f64 },
    Constant(f64),
    Exponential,
    Custom { g: ScalarFn, dg: ScalarFn },
}

/// Scalar saturation profile g and its derivative.
#[derive(Clone)]
pub struct SaturationProfile {
    kind: Kind,
    family: ProfileFamily,
    smooth_at_origin: bool,
}

impl fmt::Debug for SaturationProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SaturationProfile")
            .field("family", &self.family)
            .field("smooth_at_origin", &self.smooth_at_origin)
            .finish()
    }
}

/// The p-model family; p = 1 is Wilson's model, p = 2 the relativistic heat equation.
pub fn make_pmodel_profile(p: f64) -> Result<SaturationProfile> {
    if !p.is_finite() || p < 1.0 {
        return Err(Error::InvalidParameter(format!("p-model requires p >= 1, got {p}")));
    }
    Ok(SaturationProfile {
        kind: Kind::PModel { p },
        family: ProfileFamily::PModel { p },
        smooth_at_origin: p >= 2.0,
    })
}

impl SaturationProfile {
    pub fn wilson() -> Self {
        make_pmodel_profile(1.0).unwrap()
    }

    pub fn relativistic() -> Self {
        make_pmodel_profile(2.0).unwrap()
    }

    pub fn constant(value: f64) -> Self {
        Self { kind: Kind::Constant(value), family: ProfileFamily::Constant { value }, smooth_at_origin: true }
    }

    pub fn exponential() -> Self {
        Self { kind: Kind::Exponential, family: ProfileFamily::Exponential, smooth_at_origin: true }
    }

    pub fn custom<G, D>(name: &str, g: G, dg: D, smooth_at_origin: bool) -> Self
    where
        G: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            kind: Kind::Custom { g: Arc::new(g), dg: Arc::new(dg) },
            family: ProfileFamily::Custom { name: name.to_string() },
            smooth_at_origin,
        }
    }

    pub fn family(&self) -> &ProfileFamily {
        &self.family
    }

    pub fn smooth_at_origin(&self) -> bool {
        self.smooth_at_origin
    }

    /// Short identifier used in reports.
    pub fn id(&self) -> String {
        match &self.family {
            ProfileFamily::PModel { p } => format!("p-model(p={p})"),
            ProfileFamily::Constant { value } => format!("constant({value})"),
            ProfileFamily::Exponential => "exponential".to_string(),
            ProfileFamily::Custom { name } => format!("custom({name})"),
        }
    }

    #[inline]
    pub fn eval(&self, z: f64) -> f64 {
        match &self.kind {
            Kind::PModel { p } => {
                let p = *p;
                if p == 2.0 {
                    1.0 / (1.0 + 2.0 * z).sqrt()
                } else if p == 1.0 {
                    1.0 / (1.0 + (2.0 * z).sqrt())
                } else {
                    (1.0 + (2.0 * z).powf(0.5 * p)).powf(-1.0 / p)
                }
            }
            Kind::Constant(c) => *c,
            Kind::Exponential => (-z).exp(),
            Kind::Custom { g, .. } => g(z),
        }
    }

    #[inline]
    pub fn deriv(&self, z: f64) -> f64 {
        match &self.kind {
            Kind::PModel { p } => {
                let p = *p;
                if p == 2.0 {
                    -(1.0 + 2.0 * z).powf(-1.5)
                } else if z == 0.0 {
                    if p < 2.0 {
                        f64::NEG_INFINITY
                    } else {
                        0.0
                    }
                } else if p == 1.0 {
                    let s = (2.0 * z).sqrt();
                    -1.0 / ((1.0 + s) * (1.0 + s) * s)
                } else {
                    let t = 2.0 * z;
                    let s = t.powf(0.5 * p);
                    -(1.0 + s).powf(-1.0 / p - 1.0) * t.powf(0.5 * p - 1.0)
                }
            }
            Kind::Constant(_) => 0.0,
            Kind::Exponential => -(-z).exp(),
            Kind::Custom { dg, .. } => dg(z),
        }
    }

    /// |z g'(z) / g(z)|, with the value 0 at z = 0.
    pub fn log_ratio(&self, z: f64) -> f64 {
        if z == 0.0 {
            return 0.0;
        }
        match &self.kind {
            Kind::PModel { p } => {
                // z|g'|/g = s / (2 (1 + s)) with s = (2z)^{p/2}
                let s = (2.0 * z).powf(0.5 * p);
                if s.is_infinite() {
                    0.5
                } else {
                    0.5 * s / (1.0 + s)
                }
            }
            _ => (z * self.deriv(z) / self.eval(z)).abs(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pmodel_values() {
        let g2 = make_pmodel_profile(2.0).unwrap();
        assert_eq!(g2.eval(0.0), 1.0);
        assert!((g2.eval(4.0) - 1.0 / 3.0).abs() < 1e-15);
        let g1 = make_pmodel_profile(1.0).unwrap();
        assert!((g1.eval(2.0) - 1.0 / 3.0).abs() < 1e-15);
        let g3 = make_pmodel_profile(3.0).unwrap();
        let z: f64 = 0.7;
        let direct = (1.0 + (2.0 * z).powf(1.5)).powf(-1.0 / 3.0);
        assert!((g3.eval(z) - direct).abs() < 1e-15);
    }

    #[test]
    fn rejects_small_p() {
        assert!(make_pmodel_profile(0.5).is_err());
        assert!(make_pmodel_profile(f64::NAN).is_err());
    }

    #[test]
    fn smoothness_flag() {
        assert!(!make_pmodel_profile(1.5).unwrap().smooth_at_origin());
        assert!(make_pmodel_profile(2.0).unwrap().smooth_at_origin());
        assert_eq!(make_pmodel_profile(1.0).unwrap().deriv(0.0), f64::NEG_INFINITY);
    }

    #[test]
    fn derivative_matches_differences() {
        for p in [1.0, 1.5, 2.0, 3.0, 7.0] {
            let g = make_pmodel_profile(p).unwrap();
            // for large p, g - 1 is below round-off near z = 1e-3
            let mut z = if p > 3.0 { 0.1 } else { 1e-3 };
            while z <= 1e3 {
                let h = 1e-4 * z;
                let fd = (g.eval(z + h) - g.eval(z - h)) / (2.0 * h);
                let an = g.deriv(z);
                assert!((fd - an).abs() <= 1e-6 * an.abs(), "p={p} z={z}: {fd} vs {an}");
                z *= 1.7;
            }
        }
    }

    #[test]
    fn log_ratio_closed_form_matches_generic() {
        let g = make_pmodel_profile(3.0).unwrap();
        for z in [0.01, 0.5, 3.0, 100.0] {
            let generic = (z * g.deriv(z) / g.eval(z)).abs();
            assert!((generic - g.log_ratio(z)).abs() < 1e-13);
        }
    }
}
