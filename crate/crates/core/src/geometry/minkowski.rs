use super::support::{convex_hull, signed_area, Interval, Point, Polygon, SupportSet};
use crate::convex::WulffShape;
use crate::{Error, Result};

/// Samples per full turn used for the Wulff boundary in 2D sums.
pub const ARC_SAMPLES: usize = 256;

/// K ⊕ tE.
///
/// In 2D, K is replaced by its convex hull (with a warning when that changes
/// it) and the sum is formed by merging edge sequences sorted by angle.
pub fn minkowski_dilate(k: &SupportSet, e: &WulffShape, t: f64) -> Result<SupportSet> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::InvalidParameter(format!("dilation time must be >= 0, got {t}")));
    }
    if k.dim() != e.dim() {
        return Err(Error::Geometry(format!("set is {}D but Wulff shape is {}D", k.dim(), e.dim())));
    }
    if t == 0.0 || k.is_empty() {
        return Ok(k.clone());
    }
    match k {
        SupportSet::Intervals { intervals } => {
            let w = t * e.axis_half_width(0);
            SupportSet::intervals(intervals.iter().map(|i| Interval { lo: i.lo - w, hi: i.hi + w }).collect())
        }
        SupportSet::Polygon { polygon } => {
            let hull = convex_hull(polygon.vertices());
            if (signed_area(&hull) - polygon.area()).abs() > 1e-12 * polygon.area().abs().max(1.0) {
                log::warn!("non-convex set replaced by its convex hull before dilation");
            }
            let n = ARC_SAMPLES.max(e.boundary_points().len());
            let shape: Vec<Point> = e.resampled(n).iter().map(|p| [t * p[0], t * p[1]]).collect();
            let shape = convex_hull(&shape);
            Ok(SupportSet::Polygon { polygon: Polygon::from_ccw(convex_sum(&hull, &shape)) })
        }
    }
}

fn bottom_index(p: &[Point]) -> usize {
    let mut best = 0;
    for (i, v) in p.iter().enumerate() {
        let b = p[best];
        if v[1] < b[1] || (v[1] == b[1] && v[0] < b[0]) {
            best = i;
        }
    }
    best
}

/// Minkowski sum of two counterclockwise convex polygons.
fn convex_sum(a: &[Point], b: &[Point]) -> Vec<Point> {
    let ia = bottom_index(a);
    let ib = bottom_index(b);
    let a: Vec<Point> = (0..a.len()).map(|k| a[(ia + k) % a.len()]).collect();
    let b: Vec<Point> = (0..b.len()).map(|k| b[(ib + k) % b.len()]).collect();
    let (na, nb) = (a.len(), b.len());
    let mut out = Vec::with_capacity(na + nb);
    let (mut i, mut j) = (0, 0);
    while i < na || j < nb {
        out.push([a[i % na][0] + b[j % nb][0], a[i % na][1] + b[j % nb][1]]);
        let ea = [a[(i + 1) % na][0] - a[i % na][0], a[(i + 1) % na][1] - a[i % na][1]];
        let eb = [b[(j + 1) % nb][0] - b[j % nb][0], b[(j + 1) % nb][1] - b[j % nb][1]];
        let c = ea[0] * eb[1] - ea[1] * eb[0];
        if j >= nb || (i < na && c > 0.0) {
            i += 1;
        } else if i >= na || c < 0.0 {
            j += 1;
        } else {
            i += 1;
            j += 1;
        }
    }
    // drop collinear vertices
    let mut cleaned: Vec<Point> = Vec::with_capacity(out.len());
    let n = out.len();
    for k in 0..n {
        let p = out[(k + n - 1) % n];
        let q = out[k];
        let r = out[(k + 1) % n];
        let c = (q[0] - p[0]) * (r[1] - q[1]) - (q[1] - p[1]) * (r[0] - q[0]);
        if c.abs() > 1e-15 * (1.0 + q[0].abs() + q[1].abs()) {
            cleaned.push(q);
        }
    }
    cleaned
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::{make_potential, make_pmodel_profile, wulff_shape, AnisotropyMatrix};

    fn shape(a: AnisotropyMatrix) -> WulffShape {
        let n = if a.dim() == 1 { 2 } else { 64 };
        wulff_shape(&make_potential(make_pmodel_profile(2.0).unwrap(), a, 1.0).unwrap(), n).unwrap()
    }

    #[test]
    fn rounded_square_area() {
        let e = shape(AnisotropyMatrix::identity(2));
        let k = SupportSet::rectangle([0.0, 0.0], [1.0, 1.0]).unwrap();
        let d = minkowski_dilate(&k, &e, 1.0).unwrap();
        assert!((d.measure() - (5.0 + std::f64::consts::PI)).abs() < 1e-3, "{}", d.measure());
    }

    #[test]
    fn one_dimensional_shift() {
        let e = shape(AnisotropyMatrix::diag(&[4.0]).unwrap());
        let k = SupportSet::interval(0.0, 1.0).unwrap();
        let t = 0.3;
        let d = minkowski_dilate(&k, &e, t).unwrap();
        let iv = d.as_intervals().unwrap()[0];
        assert!((iv.lo + 2.0 * t).abs() < 1e-10 && (iv.hi - 1.0 - 2.0 * t).abs() < 1e-10);
        assert!(minkowski_dilate(&k, &e, -1.0).is_err());
        assert_eq!(minkowski_dilate(&k, &e, 0.0).unwrap(), k);
    }

    #[test]
    fn overlapping_intervals_merge() {
        let e = shape(AnisotropyMatrix::identity(1));
        let k = SupportSet::intervals(vec![Interval { lo: 0.0, hi: 1.0 }, Interval { lo: 1.5, hi: 2.0 }]).unwrap();
        let d = minkowski_dilate(&k, &e, 0.5).unwrap();
        assert_eq!(d.as_intervals().unwrap().len(), 1);
    }
}
