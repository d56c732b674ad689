use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::subsolution_field;
use crate::convex::AnisotropyMatrix;
use crate::{Error, Result};

type Sampler = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Initial data, sampled at cell centres.
#[derive(Clone)]
pub enum Datum {
    /// β on the closed box [lo, hi].
    Box { lo: Vec<f64>, hi: Vec<f64>, beta: f64 },
    /// e^{-at} √(R(t)² − ‖x‖²_{A⁻¹}) with R(t) = R₀ + t.
    Bump { matrix: AnisotropyMatrix, r0: f64, a: f64, t: f64 },
    Gaussian { center: Vec<f64>, sigma: f64, amplitude: f64 },
    /// Independent uniform values in [0, max) on the box, zero elsewhere.
    Random { lo: Vec<f64>, hi: Vec<f64>, max: f64, seed: u64 },
    Custom(Sampler),
}

impl fmt::Debug for Datum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Datum::Box { lo, hi, beta } => write!(f, "Box({lo:?}, {hi:?}, beta={beta})"),
            Datum::Bump { r0, a, t, .. } => write!(f, "Bump(r0={r0}, a={a}, t={t})"),
            Datum::Gaussian { center, sigma, amplitude } => write!(f, "Gaussian({center:?}, {sigma}, {amplitude})"),
            Datum::Random { lo, hi, max, seed } => write!(f, "Random({lo:?}, {hi:?}, {max}, seed={seed})"),
            Datum::Custom(_) => write!(f, "Custom"),
        }
    }
}

fn inside(x: &[f64], lo: &[f64], hi: &[f64]) -> bool {
    x.iter().zip(lo.iter().zip(hi)).all(|(v, (a, b))| *v >= *a && *v <= *b)
}

impl Datum {
    pub fn box_1d(lo: f64, hi: f64, beta: f64) -> Self {
        Datum::Box { lo: vec![lo], hi: vec![hi], beta }
    }

    pub fn box_2d(lo: [f64; 2], hi: [f64; 2], beta: f64) -> Self {
        Datum::Box { lo: lo.to_vec(), hi: hi.to_vec(), beta }
    }

    pub fn custom<F: Fn(&[f64]) -> f64 + Send + Sync + 'static>(f: F) -> Self {
        Datum::Custom(Arc::new(f))
    }

    /// Value at x; `cell` keys the random datum so values do not depend on
    /// evaluation order.
    pub fn eval(&self, x: &[f64], cell: usize) -> Result<f64> {
        let v = match self {
            Datum::Box { lo, hi, beta } => {
                if lo.len() != x.len() || hi.len() != x.len() {
                    return Err(Error::InvalidParameter(format!("box datum has dimension {}, grid {}", lo.len(), x.len())));
                }
                if inside(x, lo, hi) {
                    *beta
                } else {
                    0.0
                }
            }
            Datum::Bump { matrix, r0, a, t } => {
                if matrix.dim() != x.len() {
                    return Err(Error::InvalidParameter("bump matrix dimension differs from grid".to_string()));
                }
                subsolution_field(matrix, *r0, *a, *t, x)
            }
            Datum::Gaussian { center, sigma, amplitude } => {
                let r2: f64 = x.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum();
                amplitude * (-0.5 * r2 / (sigma * sigma)).exp()
            }
            Datum::Random { lo, hi, max, seed } => {
                if inside(x, lo, hi) {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ cell as u64);
                    rng.gen::<f64>() * max
                } else {
                    0.0
                }
            }
            Datum::Custom(f) => f(x),
        };
        Ok(v)
    }

    /// Supremum of the datum, where it is known in closed form.
    pub fn sup(&self) -> Option<f64> {
        match self {
            Datum::Box { beta, .. } => Some(*beta),
            Datum::Bump { r0, a, t, .. } => Some((-a * t).exp() * (r0 + t)),
            Datum::Gaussian { amplitude, .. } => Some(*amplitude),
            Datum::Random { max, .. } => Some(*max),
            Datum::Custom(_) => None,
        }
    }
}
