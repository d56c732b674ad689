//! Certified decay rate a for the bump W(t, x) = e^{-at} √(R(t)² − ‖x‖²),
//! then a 1D run started from W(0) checked against W(t).

use tempered::analysis::{default_lambda_samples, subsolution_field, verify_subsolution};
use tempered::convex::{make_pmodel_profile, make_potential, AnisotropyMatrix};
use tempered::solver::{evolve, init_grid, Datum, Domain};

fn main() -> tempered::Result<()> {
    let (r0, t_final) = (1.0, 0.5);
    for dim in [1, 2] {
        let cert = verify_subsolution(&make_pmodel_profile(2.0)?, &AnisotropyMatrix::identity(dim), r0, &default_lambda_samples(), (r0, r0 + t_final))?;
        println!(
            "{dim}D: minimal a = {:.6}, inf rho = {:.4} at (lambda, R) = ({:.3}, {:.3}), valid {}",
            cert.minimal_a, cert.rhs_infimum, cert.argmin.0, cert.argmin.1, cert.valid
        );
    }

    let m = AnisotropyMatrix::identity(1);
    let cert = verify_subsolution(&make_pmodel_profile(2.0)?, &m, r0, &default_lambda_samples(), (r0, r0 + t_final))?;
    let a = cert.minimal_a;
    let p = make_potential(make_pmodel_profile(2.0)?, m, 1.0)?;
    let u0 = init_grid(&Domain::new(&[-2.0], &[2.0])?, &[400], &Datum::Bump { matrix: m, r0, a, t: 0.0 })?;
    let dx = u0.min_dx();
    let traj = evolve(&u0, &p, t_final, 2000, 0.5)?;
    println!("{:>6} {:>14} {:>14}", "t", "max(W-u)", "max(u-W)");
    for u in &traj.snapshots {
        let (mut below, mut above) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for i in 0..u.n()[0] {
            let x = [u.center(i, 0)[0]];
            below = below.max(subsolution_field(&m, r0 - 2.0 * dx, a, u.time(), &x) - u.get(i, 0));
            above = above.max(u.get(i, 0) - subsolution_field(&m, r0, a, u.time(), &x));
        }
        println!("{:>6.3} {below:>14.3e} {above:>14.3e}", u.time());
    }
    Ok(())
}
