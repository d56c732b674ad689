//! Support sets, Minkowski dilation by the Wulff shape, support extraction
//! from grid fields and set distances.

mod distance;
mod extract;
mod minkowski;
mod support;

pub use distance::{contained_within, excess_distance, hausdorff_distance};
pub use extract::{extract_support, SupportExtraction};
pub use minkowski::{minkowski_dilate, ARC_SAMPLES};
pub use support::{convex_hull, point_segment_distance, Interval, Point, Polygon, SupportSet};
