//! Conservative explicit solver on uniform 1D/2D grids.

mod datum;
mod evolve;
mod grid;
mod io;
mod scheme;

pub use datum::Datum;
pub use evolve::{evolve, evolve_with, Trajectory};
pub use grid::{init_grid, l1_distance, positive_part_l1, total_mass, Domain, GridField};
pub use io::{fmt17, snapshot_csv, snapshot_metadata, write_snapshot};
pub use scheme::{stable_timestep, step, step_with, SchemeOptions};
