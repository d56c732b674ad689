//! Explicit conservative finite volumes for
//! u_t = div(u g(‖w‖²_A/2) A w),  w = L ∇u / u.
//!
//! Faces carry donor-cell fluxes F = u_donor ψ(w_f)·n, the donor being the
//! cell the mass leaves. Two rules treat the front:
//!
//! * a face whose receiving cell is empty is limited so that the donor only
//!   spills once it is nearly as full as the plateau behind it (the cell one
//!   step inward along ∇u); otherwise a donor-cell scheme seeds a new cell
//!   every step and the support outruns the front;
//! * a receiving cell that is partly filled with nothing beyond it holds the
//!   jump, and is filled at the saturated rate ψ(∞), as if it were empty,
//!   until it is full. Using the resolved gradient there instead stalls the
//!   front while the cell equalises with its neighbour.
//!
//! Axis-aligned fronts move at the predicted speed. Oblique ones lag: the
//! limiter waits on a plateau estimate that a staircase front only reaches
//! late, about 14% slow on a diagonal at dx = 1/50, and the lag does not
//! shrink under refinement.

use std::thread;

use super::grid::GridField;
use crate::convex::Potential;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeOptions {
    /// Floor for the face density in w = L∇u/u.
    pub eps_reg: f64,
    /// Limit fluxes into empty cells.
    pub front_limiter: bool,
    /// Worker threads for the face loops (1 = serial).
    pub threads: usize,
}

impl Default for SchemeOptions {
    fn default() -> Self {
        Self { eps_reg: 1e-30, front_limiter: true, threads: 1 }
    }
}

/// cfl · min(hyperbolic, parabolic) bound.
///
/// hyperbolic: min_k dx_k / (2 d s_k), s_k = ℓ √a_kk (speed of ψ along axis k)
/// parabolic:  min_k dx_k² / (2 d L g(0) λ_max(A))
pub fn stable_timestep(p: &Potential, u: &GridField, cfl: f64) -> f64 {
    let d = u.dim();
    let dx = u.dx();
    let a = p.matrix().matrix();
    let g0 = p.profile().eval(0.0);
    let lam = p.matrix().lambda_max();
    let mut hyper = f64::INFINITY;
    let mut para = f64::INFINITY;
    for k in 0..d {
        let s = p.ell() * a.get(k, k).sqrt();
        if s > 0.0 {
            hyper = hyper.min(dx[k] / (2.0 * d as f64 * s));
        }
        let diff = 2.0 * d as f64 * p.lengthscale() * g0 * lam;
        if diff > 0.0 {
            para = para.min(dx[k] * dx[k] / diff);
        }
    }
    cfl * hyper.min(para)
}

/// One explicit step on a fresh buffer.
pub fn step(u: &GridField, p: &Potential, dt: f64) -> Result<GridField> {
    Stepper::new(u, SchemeOptions::default()).advance(u, p, dt, 0)
}

pub fn step_with(u: &GridField, p: &Potential, dt: f64, opts: SchemeOptions) -> Result<GridField> {
    Stepper::new(u, opts).advance(u, p, dt, 0)
}

struct Face<'a> {
    p: &'a Potential,
    a: [[f64; 2]; 2],
    lscale: f64,
    eps: f64,
    limiter: bool,
    dt: f64,
}

impl Face<'_> {
    /// Flux through a face normal to axis `ax` between cells with values
    /// `ul` (lower index) and `ur`; `wt` is the tangential gradient of u,
    /// `pl`, `pr` the plateau estimates behind each cell and `bl`, `br` the
    /// values one cell further out along the axis.
    #[inline]
    fn flux(&self, ax: usize, h: f64, ul: f64, ur: f64, wt: f64, pl: f64, pr: f64, bl: f64, br: f64) -> f64 {
        if ul == 0.0 && ur == 0.0 {
            return 0.0;
        }
        let q = self.speed(ax, h, ul, ur, wt);
        // q > 0: mass moves toward lower index, donor is the upper cell
        let (donor, receiver, behind, beyond) = if q > 0.0 { (ur, ul, pr, bl) } else { (ul, ur, pl, br) };
        let mut f = donor * q;
        if self.limiter && receiver == 0.0 && f != 0.0 {
            let c = q.abs() * self.dt / h;
            let room = (donor - (1.0 - c) * behind).max(0.0) * h / self.dt;
            if f.abs() > room {
                f = room.copysign(f);
            }
        } else if self.limiter && receiver > 0.0 && beyond == 0.0 && f != 0.0 {
            // the receiver holds the jump: fill it at the saturated rate
            let qs = if q > 0.0 { self.speed(ax, h, 0.0, ur, wt) } else { self.speed(ax, h, ul, 0.0, wt) };
            if qs * q <= 0.0 {
                return f;
            }
            let c = qs.abs() * self.dt / h;
            if receiver < (1.0 - c) * donor {
                f = donor * qs;
            }
        }
        f
    }

    #[inline]
    fn speed(&self, ax: usize, h: f64, ul: f64, ur: f64, wt: f64) -> f64 {
        let um = (0.5 * (ul + ur)).max(self.eps);
        let scale = self.lscale / um;
        let mut w = [0.0; 2];
        w[ax] = scale * (ur - ul) / h;
        w[1 - ax] = scale * wt;
        let aw = [self.a[0][0] * w[0] + self.a[0][1] * w[1], self.a[1][0] * w[0] + self.a[1][1] * w[1]];
        let z = 0.5 * (w[0] * aw[0] + w[1] * aw[1]);
        self.p.profile().eval(z) * aw[ax]
    }
}

/// Scratch buffers reused across steps.
pub(crate) struct Stepper {
    opts: SchemeOptions,
    fx: Vec<f64>,
    fy: Vec<f64>,
    refv: Vec<f64>,
}

fn par_rows<F>(threads: usize, buf: &mut [f64], row_len: usize, f: F)
where
    F: Fn(usize, &mut [f64]) + Sync,
{
    let rows = buf.len() / row_len;
    if threads <= 1 || rows < 2 * threads {
        for (r, chunk) in buf.chunks_mut(row_len).enumerate() {
            f(r, chunk);
        }
        return;
    }
    let per = rows.div_ceil(threads);
    thread::scope(|s| {
        for (c, block) in buf.chunks_mut(per * row_len).enumerate() {
            let f = &f;
            s.spawn(move || {
                for (r, chunk) in block.chunks_mut(row_len).enumerate() {
                    f(c * per + r, chunk);
                }
            });
        }
    });
}

impl Stepper {
    pub(crate) fn new(u: &GridField, opts: SchemeOptions) -> Self {
        let [nx, ny] = u.n();
        let (fx, fy) = if u.dim() == 1 { (vec![0.0; nx + 1], Vec::new()) } else { (vec![0.0; (nx + 1) * ny], vec![0.0; nx * (ny + 1)]) };
        Self { opts, fx, fy, refv: vec![0.0; u.n_cells()] }
    }

    pub(crate) fn advance(&mut self, u: &GridField, p: &Potential, dt: f64, step_no: usize) -> Result<GridField> {
        if u.dim() != p.dim() {
            return Err(Error::GridMismatch(format!("{}D field with a {}D potential", u.dim(), p.dim())));
        }
        let face = Face {
            p,
            a: p.matrix().matrix().m,
            lscale: p.lengthscale(),
            eps: self.opts.eps_reg,
            limiter: self.opts.front_limiter,
            dt,
        };
        let [nx, ny] = u.n();
        let dx = u.dx();
        let v = u.values();
        let mut next = v.to_vec();
        if u.dim() == 1 {
            let fx = &mut self.fx;
            fx[0] = 0.0;
            fx[nx] = 0.0;
            for i in 1..nx {
                let pl = if i >= 2 { v[i - 2] } else { v[i - 1] };
                let pr = if i + 1 < nx { v[i + 1] } else { v[i] };
                fx[i] = face.flux(0, dx[0], v[i - 1], v[i], 0.0, pl, pr, pl, pr);
            }
            let r = dt / dx[0];
            for i in 0..nx {
                next[i] = v[i] + r * (fx[i + 1] - fx[i]);
            }
        } else {
            let at = |i: usize, j: isize| -> f64 {
                let jj = j.clamp(0, ny as isize - 1) as usize;
                v[i + nx * jj]
            };
            let at_x = |i: isize, j: usize| -> f64 {
                let ii = i.clamp(0, nx as isize - 1) as usize;
                v[ii + nx * j]
            };
            let sample = |fi: f64, fj: f64| -> f64 {
                let fi = fi.clamp(0.0, (nx - 1) as f64);
                let fj = fj.clamp(0.0, (ny - 1) as f64);
                let (i0, j0) = ((fi.floor() as usize).min(nx.saturating_sub(2)), (fj.floor() as usize).min(ny.saturating_sub(2)));
                let (a, b) = (fi - i0 as f64, fj - j0 as f64);
                let (i1, j1) = ((i0 + 1).min(nx - 1), (j0 + 1).min(ny - 1));
                (1.0 - a) * (1.0 - b) * v[i0 + nx * j0] + a * (1.0 - b) * v[i1 + nx * j0] + (1.0 - a) * b * v[i0 + nx * j1] + a * b * v[i1 + nx * j1]
            };
            // value one cell inward along the local gradient: the plateau
            // estimate the front limiter compares a donor with
            par_rows(self.opts.threads, &mut self.refv, nx, |j, row| {
                let jj = j as isize;
                for i in 0..nx {
                    let c = v[i + nx * j];
                    if c == 0.0 {
                        row[i] = 0.0;
                        continue;
                    }
                    let ii = i as isize;
                    let gx = (at_x(ii + 1, j) - at_x(ii - 1, j)) / dx[0];
                    let gy = (at(i, jj + 1) - at(i, jj - 1)) / dx[1];
                    let gn = (gx * gx + gy * gy).sqrt();
                    if !(gn > 0.0) {
                        row[i] = c;
                        continue;
                    }
                    let (ox, oy) = (gx / gn, gy / gn);
                    row[i] = sample(i as f64 + ox, j as f64 + oy);
                }
            });
            let refv = &self.refv;
            // x-faces: row j holds faces i = 0..=nx between cells i-1 and i
            par_rows(self.opts.threads, &mut self.fx, nx + 1, |j, row| {
                row[0] = 0.0;
                row[nx] = 0.0;
                let jj = j as isize;
                for i in 1..nx {
                    let ul = v[i - 1 + nx * j];
                    let ur = v[i + nx * j];
                    if ul == 0.0 && ur == 0.0 {
                        row[i] = 0.0;
                        continue;
                    }
                    let tl = at(i - 1, jj + 1) - at(i - 1, jj - 1);
                    let tr = at(i, jj + 1) - at(i, jj - 1);
                    let wt = 0.25 * (tl + tr) / dx[1];
                    let ii = i as isize;
                    let (pl, pr) = (refv[i - 1 + nx * j], refv[i + nx * j]);
                    let (bl, br) = (at_x(ii - 2, j), at_x(ii + 1, j));
                    row[i] = face.flux(0, dx[0], ul, ur, wt, pl, pr, bl, br);
                }
            });
            // y-faces: row j holds faces between cells (i, j-1) and (i, j)
            par_rows(self.opts.threads, &mut self.fy, nx, |j, row| {
                if j == 0 || j == ny {
                    row.iter_mut().for_each(|f| *f = 0.0);
                    return;
                }
                for i in 0..nx {
                    let ul = v[i + nx * (j - 1)];
                    let ur = v[i + nx * j];
                    if ul == 0.0 && ur == 0.0 {
                        row[i] = 0.0;
                        continue;
                    }
                    let ii = i as isize;
                    let tl = at_x(ii + 1, j - 1) - at_x(ii - 1, j - 1);
                    let tr = at_x(ii + 1, j) - at_x(ii - 1, j);
                    let wt = 0.25 * (tl + tr) / dx[0];
                    let (pl, pr) = (refv[i + nx * (j - 1)], refv[i + nx * j]);
                    let (bl, br) = (at(i, j as isize - 2), at(i, j as isize + 1));
                    row[i] = face.flux(1, dx[1], ul, ur, wt, pl, pr, bl, br);
                }
            });
            let rx = dt / dx[0];
            let ry = dt / dx[1];
            let (fx, fy) = (&self.fx, &self.fy);
            par_rows(self.opts.threads, &mut next, nx, |j, row| {
                for i in 0..nx {
                    let k = i + nx * j;
                    let gx = fx[i + 1 + (nx + 1) * j] - fx[i + (nx + 1) * j];
                    let gy = fy[i + nx * (j + 1)] - fy[i + nx * j];
                    row[i] = v[k] + rx * gx + ry * gy;
                }
            });
        }
        if let Some((k, val)) = next.iter().enumerate().find(|(_, x)| !(**x >= 0.0)) {
            let (i, j) = (k % nx, k / nx);
            let grad = local_gradient(u, i, j);
            return Err(Error::Solver {
                step: step_no,
                message: format!(
                    "cell ({i}, {j}) became {val} (was {}), local gradient {:?}, dt = {dt:e}",
                    v[k], grad
                ),
            });
        }
        Ok(GridField::from_parts(u, next, u.time() + dt))
    }
}

fn local_gradient(u: &GridField, i: usize, j: usize) -> Vec<f64> {
    let [nx, ny] = u.n();
    let dx = u.dx();
    let mut g = vec![(u.get((i + 1).min(nx - 1), j) - u.get(i.saturating_sub(1), j)) / (2.0 * dx[0])];
    if u.dim() == 2 {
        g.push((u.get(i, (j + 1).min(ny - 1)) - u.get(i, j.saturating_sub(1))) / (2.0 * dx[1]));
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::{make_potential, make_pmodel_profile, AnisotropyMatrix};
    use crate::solver::{init_grid, total_mass, Datum, Domain};

    fn rhe(dim: usize) -> Potential {
        make_potential(make_pmodel_profile(2.0).unwrap(), AnisotropyMatrix::identity(dim), 1.0).unwrap()
    }

    #[test]
    fn timestep_example() {
        let p = rhe(1);
        let u = GridField::zeros(&Domain::new(&[0.0], &[1.0]).unwrap(), &[100]).unwrap();
        assert!((stable_timestep(&p, &u, 0.5) - 2.5e-5).abs() < 1e-18);
        let coarse = GridField::zeros(&Domain::new(&[0.0], &[1.0]).unwrap(), &[50]).unwrap();
        let ratio = stable_timestep(&p, &coarse, 1.0) / stable_timestep(&p, &u, 1.0);
        assert!((ratio - 4.0).abs() < 1e-12);
    }

    #[test]
    fn constant_field_is_steady() {
        let p = rhe(2);
        let d = Domain::new(&[0.0, 0.0], &[1.0, 1.0]).unwrap();
        let u = init_grid(&d, &[20, 20], &Datum::custom(|_| 0.7)).unwrap();
        let dt = stable_timestep(&p, &u, 0.9);
        let v = step(&u, &p, dt).unwrap();
        assert!(v.values().iter().all(|x| *x == 0.7));
    }

    #[test]
    fn mass_is_conserved() {
        let p = rhe(2);
        let d = Domain::new(&[-2.0, -2.0], &[2.0, 2.0]).unwrap();
        let mut u = init_grid(&d, &[40, 40], &Datum::box_2d([-0.5, -0.3], [0.4, 0.6], 1.3)).unwrap();
        let m0 = total_mass(&u);
        for _ in 0..50 {
            let dt = stable_timestep(&p, &u, 0.9);
            u = step(&u, &p, dt).unwrap();
        }
        assert!(((total_mass(&u) - m0) / m0).abs() < 1e-13);
    }

    #[test]
    fn threaded_step_is_bitwise_identical() {
        let p = make_potential(
            make_pmodel_profile(2.0).unwrap(),
            AnisotropyMatrix::new(&[vec![2.0, 0.5], vec![0.5, 1.0]]).unwrap(),
            1.0,
        )
        .unwrap();
        let d = Domain::new(&[-1.0, -1.0], &[1.0, 1.0]).unwrap();
        let u = init_grid(&d, &[32, 40], &Datum::Gaussian { center: vec![0.1, 0.0], sigma: 0.3, amplitude: 1.0 }).unwrap();
        let dt = stable_timestep(&p, &u, 0.9);
        let serial = step(&u, &p, dt).unwrap();
        let threaded = step_with(&u, &p, dt, SchemeOptions { threads: 3, ..Default::default() }).unwrap();
        assert_eq!(serial.values(), threaded.values());
    }
}
