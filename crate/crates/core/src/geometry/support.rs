use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub type Point = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

/// Simple counterclockwise polygon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polygon {
    vertices: Vec<Point>,
}

/// A compact set: a sorted union of disjoint closed intervals (1D) or a
/// simple polygon (2D).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SupportSet {
    Intervals { intervals: Vec<Interval> },
    Polygon { polygon: Polygon },
}

pub(crate) fn signed_area(v: &[Point]) -> f64 {
    let n = v.len();
    let mut s = 0.0;
    for i in 0..n {
        let a = v[i];
        let b = v[(i + 1) % n];
        s += a[0] * b[1] - a[1] * b[0];
    }
    0.5 * s
}

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn segments_cross(p1: Point, p2: Point, q1: Point, q2: Point) -> bool {
    let d1 = cross(q1, q2, p1);
    let d2 = cross(q1, q2, p2);
    let d3 = cross(p1, p2, q1);
    let d4 = cross(p1, p2, q2);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

/// Distance from p to the segment [a, b].
pub fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let ab = [b[0] - a[0], b[1] - a[1]];
    let ap = [p[0] - a[0], p[1] - a[1]];
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    let t = if len2 == 0.0 { 0.0 } else { ((ap[0] * ab[0] + ap[1] * ab[1]) / len2).clamp(0.0, 1.0) };
    let q = [a[0] + t * ab[0] - p[0], a[1] + t * ab[1] - p[1]];
    (q[0] * q[0] + q[1] * q[1]).sqrt()
}

/// Andrew's monotone chain; counterclockwise, no collinear points.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| a[0].partial_cmp(&b[0]).unwrap().then(a[1].partial_cmp(&b[1]).unwrap()));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Point> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], *p) <= 0.0 {
            lower.pop();
        }
        lower.push(*p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], *p) <= 0.0 {
            upper.pop();
        }
        upper.push(*p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

impl Polygon {
    /// Validates simplicity and positive area; clockwise input is reversed.
    pub fn new(mut vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::Geometry(format!("polygon needs 3 vertices, got {}", vertices.len())));
        }
        if vertices.iter().any(|v| !v[0].is_finite() || !v[1].is_finite()) {
            return Err(Error::Geometry("polygon has non-finite vertices".to_string()));
        }
        let area = signed_area(&vertices);
        if area == 0.0 {
            return Err(Error::Geometry("polygon has zero area".to_string()));
        }
        if area < 0.0 {
            vertices.reverse();
        }
        let n = vertices.len();
        for i in 0..n {
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                if segments_cross(vertices[i], vertices[(i + 1) % n], vertices[j], vertices[(j + 1) % n]) {
                    return Err(Error::Geometry(format!("edges {i} and {j} intersect")));
                }
            }
        }
        Ok(Self { vertices })
    }

    /// Trusted constructor for polygons built by this crate.
    pub(crate) fn from_ccw(vertices: Vec<Point>) -> Self {
        debug_assert!(signed_area(&vertices) > 0.0);
        Self { vertices }
    }

    pub fn rectangle(lo: Point, hi: Point) -> Result<Self> {
        Self::new(vec![lo, [hi[0], lo[1]], hi, [lo[0], hi[1]]])
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().map(|(a, b)| ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt()).sum()
    }

    pub fn shortest_edge(&self) -> f64 {
        self.edges()
            .map(|(a, b)| ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt())
            .fold(f64::INFINITY, f64::min)
    }

    /// Even-odd crossing test; boundary points count as inside.
    pub fn contains(&self, p: Point) -> bool {
        if self.boundary_distance(p) == 0.0 {
            return true;
        }
        let mut inside = false;
        for (a, b) in self.edges() {
            if (a[1] > p[1]) != (b[1] > p[1]) {
                let x = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
                if x > p[0] {
                    inside = !inside;
                }
            }
        }
        inside
    }

    pub fn boundary_distance(&self, p: Point) -> f64 {
        self.edges().map(|(a, b)| point_segment_distance(p, a, b)).fold(f64::INFINITY, f64::min)
    }

    pub fn is_convex(&self) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| cross(self.vertices[i], self.vertices[(i + 1) % n], self.vertices[(i + 2) % n]) >= 0.0)
    }

    /// Points along the boundary: every vertex plus at least `per_edge`
    /// points per edge, and at spacing no larger than `spacing`.
    pub fn boundary_samples(&self, per_edge: usize, spacing: f64) -> Vec<Point> {
        let mut out = Vec::new();
        for (a, b) in self.edges() {
            let len = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
            let n = per_edge.max((len / spacing).ceil() as usize).max(1);
            for k in 0..n {
                let t = k as f64 / n as f64;
                out.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
            }
        }
        out
    }

    pub fn reflected(&self) -> Self {
        Self { vertices: self.vertices.iter().map(|v| [-v[0], -v[1]]).collect() }
    }

    pub fn translated(&self, d: Point) -> Self {
        Self { vertices: self.vertices.iter().map(|v| [v[0] + d[0], v[1] + d[1]]).collect() }
    }
}

impl SupportSet {
    /// Sorts and validates; overlapping or touching intervals are merged.
    pub fn intervals(mut intervals: Vec<Interval>) -> Result<Self> {
        for iv in &intervals {
            if !(iv.lo <= iv.hi) || !iv.lo.is_finite() || !iv.hi.is_finite() {
                return Err(Error::Geometry(format!("bad interval [{}, {}]", iv.lo, iv.hi)));
            }
        }
        intervals.sort_by(|a, b| a.lo.partial_cmp(&b.lo).unwrap());
        let mut merged: Vec<Interval> = Vec::with_capacity(intervals.len());
        for iv in intervals {
            match merged.last_mut() {
                Some(last) if iv.lo <= last.hi => last.hi = last.hi.max(iv.hi),
                _ => merged.push(iv),
            }
        }
        Ok(SupportSet::Intervals { intervals: merged })
    }

    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        Self::intervals(vec![Interval { lo, hi }])
    }

    pub fn polygon(vertices: Vec<Point>) -> Result<Self> {
        Ok(SupportSet::Polygon { polygon: Polygon::new(vertices)? })
    }

    pub fn rectangle(lo: Point, hi: Point) -> Result<Self> {
        Ok(SupportSet::Polygon { polygon: Polygon::rectangle(lo, hi)? })
    }

    pub fn empty(dim: usize) -> Self {
        if dim == 1 {
            SupportSet::Intervals { intervals: Vec::new() }
        } else {
            SupportSet::Polygon { polygon: Polygon { vertices: Vec::new() } }
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            SupportSet::Intervals { .. } => 1,
            SupportSet::Polygon { .. } => 2,
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            SupportSet::Intervals { intervals } => intervals.is_empty(),
            SupportSet::Polygon { polygon } => polygon.vertices.is_empty(),
        }
    }

    /// Length (1D) or area (2D).
    pub fn measure(&self) -> f64 {
        match self {
            SupportSet::Intervals { intervals } => intervals.iter().map(|i| i.hi - i.lo).sum(),
            SupportSet::Polygon { polygon } => {
                if polygon.vertices.is_empty() {
                    0.0
                } else {
                    polygon.area()
                }
            }
        }
    }

    pub fn as_intervals(&self) -> Option<&[Interval]> {
        match self {
            SupportSet::Intervals { intervals } => Some(intervals),
            _ => None,
        }
    }

    pub fn as_polygon(&self) -> Option<&Polygon> {
        match self {
            SupportSet::Polygon { polygon } => Some(polygon),
            _ => None,
        }
    }

    /// Bounding box as (lo, hi); 1D sets use the first component.
    pub fn bounds(&self) -> Option<(Point, Point)> {
        if self.is_empty() {
            return None;
        }
        match self {
            SupportSet::Intervals { intervals } => {
                Some(([intervals[0].lo, 0.0], [intervals[intervals.len() - 1].hi, 0.0]))
            }
            SupportSet::Polygon { polygon } => {
                let mut lo = [f64::INFINITY; 2];
                let mut hi = [f64::NEG_INFINITY; 2];
                for v in &polygon.vertices {
                    for k in 0..2 {
                        lo[k] = lo[k].min(v[k]);
                        hi[k] = hi[k].max(v[k]);
                    }
                }
                Some((lo, hi))
            }
        }
    }

    /// Point reflection through the origin.
    pub fn reflected(&self) -> Self {
        match self {
            SupportSet::Intervals { intervals } => {
                let mut r: Vec<Interval> = intervals.iter().map(|i| Interval { lo: -i.hi, hi: -i.lo }).collect();
                r.reverse();
                SupportSet::Intervals { intervals: r }
            }
            SupportSet::Polygon { polygon } => SupportSet::Polygon { polygon: polygon.reflected() },
        }
    }

    /// Boundary as a list of points (interval endpoints or polygon vertices).
    pub fn outline(&self) -> Vec<Point> {
        match self {
            SupportSet::Intervals { intervals } => intervals.iter().flat_map(|i| [[i.lo, 0.0], [i.hi, 0.0]]).collect(),
            SupportSet::Polygon { polygon } => polygon.vertices.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clockwise_is_reoriented() {
        let p = Polygon::new(vec![[0.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, 0.0]]).unwrap();
        assert!(p.area() > 0.0);
        assert_eq!(p.area(), 1.0);
    }

    #[test]
    fn bowtie_rejected() {
        assert!(Polygon::new(vec![[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]]).is_err());
    }

    #[test]
    fn intervals_sorted_and_merged() {
        let s = SupportSet::intervals(vec![Interval { lo: 2.0, hi: 3.0 }, Interval { lo: -1.0, hi: 0.5 }, Interval { lo: 0.5, hi: 1.0 }]).unwrap();
        assert_eq!(s.as_intervals().unwrap(), &[Interval { lo: -1.0, hi: 1.0 }, Interval { lo: 2.0, hi: 3.0 }]);
        assert_eq!(s.measure(), 3.0);
    }

    #[test]
    fn hull_of_square_with_interior_point() {
        let h = convex_hull(&[[0.0, 0.0], [1.0, 0.0], [0.5, 0.5], [1.0, 1.0], [0.0, 1.0], [0.5, 0.0]]);
        assert_eq!(h.len(), 4);
        assert_eq!(signed_area(&h), 1.0);
    }

    #[test]
    fn containment_test() {
        let p = Polygon::rectangle([0.0, 0.0], [2.0, 1.0]).unwrap();
        assert!(p.contains([1.0, 0.5]));
        assert!(p.contains([2.0, 0.5]));
        assert!(!p.contains([2.1, 0.5]));
    }
}
