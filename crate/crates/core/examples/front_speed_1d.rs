//! Front speed of the relativistic heat equation (p = 2, A = I) from a box
//! datum, measured under grid refinement.

use tempered::analysis::{front_speed, FrontSpeedEstimate};
use tempered::convex::{make_potential, make_pmodel_profile, AnisotropyMatrix};
use tempered::solver::{evolve, init_grid, Datum, Domain};

fn run(n: usize, beta: f64) -> tempered::Result<FrontSpeedEstimate> {
    let p = make_potential(make_pmodel_profile(2.0)?, AnisotropyMatrix::identity(1), 1.0)?;
    let u0 = init_grid(&Domain::new(&[-4.0], &[4.0])?, &[n], &Datum::box_1d(-1.0, 1.0, beta))?;
    let t_final = 2.0;
    let traj = evolve(&u0, &p, t_final, n / 10, 0.5)?;
    front_speed(&traj, &p, &[1.0], 1e-3 * beta, (0.2 * t_final, t_final))
}

fn main() -> tempered::Result<()> {
    println!("{:>6} {:>12} {:>10} {:>10}", "cells", "speed", "rel.err", "rms");
    for n in [400, 800, 1600] {
        let e = run(n, 1.0)?;
        println!("{n:>6} {:>12.6} {:>10.2e} {:>10.2e}", e.fitted_speed, e.relative_error(), e.fit_residual);
    }
    Ok(())
}
