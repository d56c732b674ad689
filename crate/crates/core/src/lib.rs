//! Anisotropic flux-saturated ("tempered") diffusion
//!
//! ```text
//! u_t = div( u ψ(L ∇u / u) ),   ψ(r) = g(‖r‖²_A / 2) A r
//! ```
//!
//! The crate is organised bottom-up:
//!
//! - [`convex`]: saturation profiles, potentials Φ, fluxes ψ, recession
//!   functions, cost functions k = Φ* and Wulff shapes.
//! - [`geometry`]: supports in 1D/2D, Minkowski dilation, set distances.
//! - [`solver`]: conservative explicit finite volumes on uniform grids.
//! - [`analysis`]: front speeds, support spreading, sub/supersolution and
//!   comparison checks.
//! - [`experiment`]: TOML-configured runs that write reproducible artifacts.

pub mod analysis;
pub mod convex;
pub mod error;
pub mod experiment;
pub mod geometry;
pub mod numerics;
pub mod solver;

pub use error::{Error, Result};
