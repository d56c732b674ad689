use super::support::{Interval, Point, Polygon, SupportSet};
use crate::{Error, Result};

fn samples(p: &Polygon) -> Vec<Point> {
    let spacing = (p.shortest_edge() / 10.0).max(p.perimeter() / 50_000.0);
    p.boundary_samples(10, spacing)
}

fn directed(from: &[Point], to: &Polygon) -> f64 {
    from.iter().map(|&q| to.boundary_distance(q)).fold(0.0, f64::max)
}

fn endpoint_distance(x: f64, ivs: &[Interval]) -> f64 {
    ivs.iter()
        .flat_map(|i| [i.lo, i.hi])
        .map(|e| (x - e).abs())
        .fold(f64::INFINITY, f64::min)
}

/// Symmetric Hausdorff distance between the boundaries of two sets.
///
/// 2D boundaries are sampled at ≥ 10 points per shortest edge and measured
/// against the exact edges of the other set.
pub fn hausdorff_distance(s1: &SupportSet, s2: &SupportSet) -> Result<f64> {
    if s1.is_empty() || s2.is_empty() {
        return Err(Error::EmptySet("Hausdorff distance of an empty set".into()));
    }
    match (s1, s2) {
        (SupportSet::Intervals { intervals: a }, SupportSet::Intervals { intervals: b }) => {
            let d_ab = a.iter().flat_map(|i| [i.lo, i.hi]).map(|x| endpoint_distance(x, b)).fold(0.0, f64::max);
            let d_ba = b.iter().flat_map(|i| [i.lo, i.hi]).map(|x| endpoint_distance(x, a)).fold(0.0, f64::max);
            Ok(d_ab.max(d_ba))
        }
        (SupportSet::Polygon { polygon: a }, SupportSet::Polygon { polygon: b }) => {
            Ok(directed(&samples(a), b).max(directed(&samples(b), a)))
        }
        _ => Err(Error::Geometry("Hausdorff distance between sets of different dimension".into())),
    }
}

/// True when every boundary sample of `s1` lies in `s2` dilated by `slack`.
/// An empty `s1` is contained in anything.
pub fn contained_within(s1: &SupportSet, s2: &SupportSet, slack: f64) -> bool {
    if s1.is_empty() {
        return true;
    }
    if s2.is_empty() || s1.dim() != s2.dim() {
        return false;
    }
    let tol = slack.max(0.0) + 1e-12;
    match (s1, s2) {
        (SupportSet::Intervals { intervals: a }, SupportSet::Intervals { intervals: b }) => {
            let grown: Vec<Interval> = b.iter().map(|i| Interval { lo: i.lo - tol, hi: i.hi + tol }).collect();
            let grown = match SupportSet::intervals(grown) {
                Ok(SupportSet::Intervals { intervals }) => intervals,
                _ => return false,
            };
            a.iter().all(|i| grown.iter().any(|g| g.lo <= i.lo && i.hi <= g.hi))
        }
        (SupportSet::Polygon { polygon: a }, SupportSet::Polygon { polygon: b }) => {
            samples(a).into_iter().all(|q| b.contains(q) || b.boundary_distance(q) <= tol)
        }
        _ => false,
    }
}

/// Largest distance from a boundary sample of `s1` to `s2` (0 when inside).
pub fn excess_distance(s1: &SupportSet, s2: &SupportSet) -> Result<f64> {
    if s1.is_empty() {
        return Ok(0.0);
    }
    if s2.is_empty() {
        return Err(Error::EmptySet("excess over an empty set".into()));
    }
    match (s1, s2) {
        (SupportSet::Intervals { intervals: a }, SupportSet::Intervals { intervals: b }) => {
            let mut worst = 0.0f64;
            for i in a {
                // the farthest point of i from b is an endpoint of i or a gap midpoint of b inside i
                let mut probe = vec![i.lo, i.hi];
                for w in b.windows(2) {
                    let m = 0.5 * (w[0].hi + w[1].lo);
                    if m > i.lo && m < i.hi {
                        probe.push(m);
                    }
                }
                for x in probe {
                    let d = b.iter().map(|g| (g.lo - x).max(x - g.hi).max(0.0)).fold(f64::INFINITY, f64::min);
                    worst = worst.max(d);
                }
            }
            Ok(worst)
        }
        (SupportSet::Polygon { polygon: a }, SupportSet::Polygon { polygon: b }) => Ok(samples(a)
            .into_iter()
            .map(|q| if b.contains(q) { 0.0 } else { b.boundary_distance(q) })
            .fold(0.0, f64::max)),
        _ => Err(Error::Geometry("sets of different dimension".into())),
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    fn square(c: Point, h: f64) -> SupportSet {
        SupportSet::rectangle([c[0] - h, c[1] - h], [c[0] + h, c[1] + h]).unwrap()
    }

    #[test]
    fn identical_sets_have_zero_distance() {
        let s = square([0.0, 0.0], 1.0);
        assert_eq!(hausdorff_distance(&s, &s).unwrap(), 0.0);
        assert!(contained_within(&s, &s, 0.0));
    }

    #[test]
    fn translation_distance() {
        let a = square([0.0, 0.0], 1.0);
        let b = square([0.3, 0.0], 1.0);
        assert!((hausdorff_distance(&a, &b).unwrap() - 0.3).abs() < 1e-12);
    }

    #[test]
    fn interval_containment() {
        let a = SupportSet::interval(-1.0, 1.0).unwrap();
        let b = SupportSet::interval(-0.9, 0.9).unwrap();
        assert!(!contained_within(&a, &b, 0.0));
        assert!(contained_within(&a, &b, 0.1));
        assert!(contained_within(&b, &a, 0.0));
        let gap = SupportSet::intervals(vec![Interval { lo: -1.0, hi: -0.2 }, Interval { lo: 0.2, hi: 1.0 }]).unwrap();
        assert!(!contained_within(&a, &gap, 0.1));
        assert!((excess_distance(&a, &gap).unwrap() - 0.2).abs() < 1e-12);
    }

    #[test]
    fn empty_rejected() {
        assert!(hausdorff_distance(&SupportSet::empty(2), &square([0.0, 0.0], 1.0)).is_err());
    }
}
