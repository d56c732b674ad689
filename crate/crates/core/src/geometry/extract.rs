use std::collections::HashMap;

use super::support::{signed_area, Interval, Polygon, SupportSet};
use crate::solver::GridField;
use crate::{Error, Result};

/// Discrete support {u > eps}.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportExtraction {
    /// 1D: every run. 2D: the outline of the largest 4-connected component.
    pub support: SupportSet,
    /// 2D only: outlines of the remaining components.
    pub others: Vec<SupportSet>,
    pub empty: bool,
}

pub fn extract_support(u: &GridField, eps: f64) -> Result<SupportExtraction> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("support threshold must be positive, got {eps}")));
    }
    if u.dim() == 1 {
        extract_1d(u, eps)
    } else {
        extract_2d(u, eps)
    }
}

fn extract_1d(u: &GridField, eps: f64) -> Result<SupportExtraction> {
    let n = u.n()[0];
    let lo = u.lo()[0];
    let dx = u.dx()[0];
    let mut runs = Vec::new();
    let mut start: Option<usize> = None;
    for i in 0..=n {
        let on = i < n && u.get(i, 0) > eps;
        match (on, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                runs.push(Interval { lo: lo + s as f64 * dx, hi: lo + i as f64 * dx });
                start = None;
            }
            _ => {}
        }
    }
    let empty = runs.is_empty();
    Ok(SupportExtraction { support: SupportSet::intervals(runs)?, others: Vec::new(), empty })
}

fn components(mask: &[bool], nx: usize, ny: usize) -> Vec<Vec<usize>> {
    let mut label = vec![usize::MAX; mask.len()];
    let mut comps = Vec::new();
    for start in 0..mask.len() {
        if !mask[start] || label[start] != usize::MAX {
            continue;
        }
        let id = comps.len();
        let mut cells = vec![start];
        label[start] = id;
        let mut head = 0;
        while head < cells.len() {
            let k = cells[head];
            head += 1;
            let (i, j) = (k % nx, k / nx);
            let mut nb = Vec::with_capacity(4);
            if i > 0 {
                nb.push(k - 1);
            }
            if i + 1 < nx {
                nb.push(k + 1);
            }
            if j > 0 {
                nb.push(k - nx);
            }
            if j + 1 < ny {
                nb.push(k + nx);
            }
            for m in nb {
                if mask[m] && label[m] == usize::MAX {
                    label[m] = id;
                    cells.push(m);
                }
            }
        }
        comps.push(cells);
    }
    comps
}

/// Outer boundary of a 4-connected cell set as a lattice polygon.
///
/// Boundary edges are directed with the set on their left; at pinch vertices
/// the leftmost turn is taken so loops never touch themselves. The loop with
/// the largest area is the outer boundary; the others bound holes.
fn trace_outline(cells: &[usize], mask_of: &dyn Fn(isize, isize) -> bool, nx: usize) -> Vec<[i64; 2]> {
    let mut out: HashMap<[i64; 2], Vec<[i64; 2]>> = HashMap::new();
    for &k in cells {
        let (i, j) = ((k % nx) as i64, (k / nx) as i64);
        let (ii, jj) = (i as isize, j as isize);
        if !mask_of(ii, jj - 1) {
            out.entry([i, j]).or_default().push([i + 1, j]);
        }
        if !mask_of(ii + 1, jj) {
            out.entry([i + 1, j]).or_default().push([i + 1, j + 1]);
        }
        if !mask_of(ii, jj + 1) {
            out.entry([i + 1, j + 1]).or_default().push([i, j + 1]);
        }
        if !mask_of(ii - 1, jj) {
            out.entry([i, j + 1]).or_default().push([i, j]);
        }
    }
    let mut starts: Vec<[i64; 2]> = out.keys().cloned().collect();
    starts.sort();
    let mut best: Vec<[i64; 2]> = Vec::new();
    let mut best_area = 0.0;
    for s in starts {
        while out.get(&s).is_some_and(|v| !v.is_empty()) {
            let mut lp = vec![s];
            let mut cur = s;
            let mut dir = [0i64, 0];
            loop {
                let cands = out.get_mut(&cur).unwrap();
                let pick = if cands.len() == 1 || dir == [0, 0] {
                    0
                } else {
                    // leftmost turn relative to the incoming direction
                    let score = |c: &[i64; 2]| {
                        let d = [c[0] - cur[0], c[1] - cur[1]];
                        let crs = dir[0] * d[1] - dir[1] * d[0];
                        let dot = dir[0] * d[0] + dir[1] * d[1];
                        if crs > 0 {
                            0
                        } else if dot > 0 {
                            1
                        } else if crs < 0 {
                            2
                        } else {
                            3
                        }
                    };
                    (0..cands.len()).min_by_key(|&q| score(&cands[q])).unwrap()
                };
                let nxt = cands.swap_remove(pick);
                dir = [nxt[0] - cur[0], nxt[1] - cur[1]];
                cur = nxt;
                if cur == s {
                    break;
                }
                lp.push(cur);
            }
            let pts: Vec<[f64; 2]> = lp.iter().map(|p| [p[0] as f64, p[1] as f64]).collect();
            let a = signed_area(&pts);
            if a > best_area {
                best_area = a;
                best = lp;
            }
        }
    }
    // merge collinear runs
    let n = best.len();
    let mut verts = Vec::with_capacity(n);
    for k in 0..n {
        let p = best[(k + n - 1) % n];
        let q = best[k];
        let r = best[(k + 1) % n];
        let c = (q[0] - p[0]) * (r[1] - q[1]) - (q[1] - p[1]) * (r[0] - q[0]);
        if c != 0 {
            verts.push(q);
        }
    }
    verts
}

fn extract_2d(u: &GridField, eps: f64) -> Result<SupportExtraction> {
    let [nx, ny] = u.n();
    let mask: Vec<bool> = u.values().iter().map(|v| *v > eps).collect();
    let mut comps = components(&mask, nx, ny);
    if comps.is_empty() {
        return Ok(SupportExtraction { support: SupportSet::empty(2), others: Vec::new(), empty: true });
    }
    comps.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    let lo = u.lo();
    let dx = u.dx();
    let mut sets = Vec::with_capacity(comps.len());
    for cells in &comps {
        let mut member = vec![false; nx * ny];
        for &k in cells {
            member[k] = true;
        }
        let inside = |i: isize, j: isize| i >= 0 && j >= 0 && (i as usize) < nx && (j as usize) < ny && member[i as usize + nx * j as usize];
        let lattice = trace_outline(cells, &inside, nx);
        let verts: Vec<[f64; 2]> = lattice
            .iter()
            .map(|p| [lo[0] + p[0] as f64 * dx[0], lo[1] + p[1] as f64 * dx[1]])
            .collect();
        sets.push(SupportSet::Polygon { polygon: Polygon::from_ccw(verts) });
    }
    let support = sets.remove(0);
    Ok(SupportExtraction { support, others: sets, empty: false })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{init_grid, Datum, Domain};

    #[test]
    fn zero_field_is_empty() {
        let u = init_grid(&Domain::new(&[0.0], &[1.0]).unwrap(), &[16], &Datum::custom(|_| 0.0)).unwrap();
        let s = extract_support(&u, 1e-6).unwrap();
        assert!(s.empty && s.support.is_empty());
    }

    #[test]
    fn indicator_recovered_within_a_cell() {
        let u = init_grid(&Domain::new(&[-4.0], &[4.0]).unwrap(), &[400], &Datum::box_1d(-1.0, 1.0, 1.0)).unwrap();
        let s = extract_support(&u, 1e-6).unwrap();
        let iv = s.support.as_intervals().unwrap()[0];
        assert!((iv.lo + 1.0).abs() <= 0.02 + 1e-12 && (iv.hi - 1.0).abs() <= 0.02 + 1e-12);
    }

    #[test]
    fn rectangle_outline() {
        let d = Domain::new(&[0.0, 0.0], &[1.0, 1.0]).unwrap();
        let u = init_grid(&d, &[20, 20], &Datum::box_2d([0.2, 0.3], [0.6, 0.5], 1.0)).unwrap();
        let s = extract_support(&u, 1e-6).unwrap();
        let p = s.support.as_polygon().unwrap();
        assert_eq!(p.vertices().len(), 4);
        assert!((p.area() - 0.4 * 0.2).abs() < 1e-12);
    }

    #[test]
    fn pinched_cells_and_second_component() {
        let d = Domain::new(&[0.0, 0.0], &[16.0, 16.0]).unwrap();
        // (2,3) is enclosed except at one corner, so it counts as outside
        let cells = [(2, 2), (1, 2), (1, 3), (1, 4), (2, 4), (3, 4), (3, 3), (10, 10)];
        let on = move |x: &[f64]| {
            let c = (x[0] as i32, x[1] as i32);
            if cells.contains(&c) {
                1.0
            } else {
                0.0
            }
        };
        let u = init_grid(&d, &[16, 16], &Datum::custom(on)).unwrap();
        let s = extract_support(&u, 0.5).unwrap();
        assert_eq!(s.others.len(), 1);
        assert!((s.support.measure() - 7.0).abs() < 1e-12, "{}", s.support.measure());
        assert!(Polygon::new(s.support.as_polygon().unwrap().vertices().to_vec()).is_ok());
    }

    #[test]
    fn ring_outline_ignores_hole() {
        let d = Domain::new(&[0.0, 0.0], &[16.0, 16.0]).unwrap();
        let ring = |x: &[f64]| {
            let (i, j) = (x[0] as i32, x[1] as i32);
            if (3..=8).contains(&i) && (3..=8).contains(&j) && !((5..=6).contains(&i) && (5..=6).contains(&j)) {
                1.0
            } else {
                0.0
            }
        };
        let u = init_grid(&d, &[16, 16], &Datum::custom(ring)).unwrap();
        let s = extract_support(&u, 0.5).unwrap();
        assert!((s.support.measure() - 36.0).abs() < 1e-12);
    }
}
