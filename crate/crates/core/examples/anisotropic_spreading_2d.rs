//! Support of a 2D box datum under A = diag(4, 1) against the Minkowski
//! prediction K ⊕ tE, and the ratio of the axis front speeds.

use std::env;

use tempered::analysis::{front_speed, support_spreading_report};
use tempered::convex::{make_potential, make_pmodel_profile, AnisotropyMatrix};
use tempered::geometry::SupportSet;
use tempered::solver::{evolve, init_grid, Datum, Domain};

fn main() -> tempered::Result<()> {
    let per_unit: usize = env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(50);
    let p = make_potential(make_pmodel_profile(2.0)?, AnisotropyMatrix::diag(&[4.0, 1.0])?, 1.0)?;
    let domain = Domain::new(&[-1.2, -0.8], &[1.2, 0.8])?;
    let n = [(2.4 * per_unit as f64).round() as usize, (1.6 * per_unit as f64).round() as usize];
    let u0 = init_grid(&domain, &n, &Datum::box_2d([-0.2, -0.2], [0.2, 0.2], 1.0))?;
    let k0 = SupportSet::rectangle([-0.2, -0.2], [0.2, 0.2])?;
    let t_final = 0.4;
    let traj = evolve(&u0, &p, t_final, 4000, 0.5)?;
    println!("steps {}  snapshots {}  boundary warning {}", traj.steps(), traj.snapshots.len(), traj.boundary_warning);

    let dx = u0.min_dx();
    let rep = support_spreading_report(&traj, &p, &k0, 1e-8, 2.0 * dx)?;
    for r in &rep.rows {
        println!("t={:.3} area={:.4} predicted={:.4} hausdorff={:.4} excess={:.2e} contained={}", r.t, r.measured.measure(), r.predicted.measure(), r.hausdorff.unwrap_or(f64::NAN), r.excess, r.contained);
    }
    let window = (0.2 * t_final, t_final);
    let fx = front_speed(&traj, &p, &[1.0, 0.0], 1e-3, window)?;
    let fy = front_speed(&traj, &p, &[0.0, 1.0], 1e-3, window)?;
    println!("x speed {:.4} (predicted {:.4})", fx.fitted_speed, fx.predicted_speed);
    println!("y speed {:.4} (predicted {:.4})", fy.fitted_speed, fy.predicted_speed);
    println!("ratio {:.4}", fx.fitted_speed / fy.fitted_speed);
    Ok(())
}
