//! Convex-analysis core: profiles g, potentials Φ(r) = G(‖r‖²_A/2), fluxes
//! ψ = ∇Φ, recession functions, cost functions k = Φ* and Wulff shapes.

mod checks;
mod legendre;
mod matrix;
mod potential;
mod profile;
mod wulff;

use serde::Serialize;

pub use checks::{check_convexity, check_decay_conditions, ConvexityReport, DecayReport};
pub use legendre::{grid_legendre_oracle, legendre_transform, radial_samples, LegendreGrid};
pub use matrix::{AnisotropyMatrix, SmallMatrix};
pub use potential::{make_potential, Potential, StructureValues, DECAY_TOL, DECAY_Z_MAX};
pub use profile::{make_pmodel_profile, ProfileFamily, SaturationProfile};
pub use wulff::{wulff_shape, WulffShape};

/// Value in (−∞, +∞].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum ExtReal {
    Finite(f64),
    PosInfinity,
}

impl ExtReal {
    pub fn finite(&self) -> Option<f64> {
        match self {
            ExtReal::Finite(v) => Some(*v),
            ExtReal::PosInfinity => None,
        }
    }
}

/// Value of the cost function k. On the boundary of dom k finiteness is
/// decided numerically, which can leave the answer open.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CostValue {
    Finite { value: f64 },
    Infinite,
    Inconclusive { lower_bound: f64 },
}

impl CostValue {
    pub fn finite(&self) -> Option<f64> {
        match self {
            CostValue::Finite { value } => Some(*value),
            _ => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, CostValue::Infinite)
    }
}

/// Integrability of ℓ − z G'(z²/2) on (0, ∞), i.e. k on ∂(dom k).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum BoundaryCost {
    Finite(f64),
    Infinite,
    Inconclusive { partial: f64 },
}
