//! Jump fronts of a tall box datum: the jump travels at Phi_inf(nu) whatever
//! its height, and the traces satisfy the jump relation.

use tempered::analysis::{default_window, rankine_hugoniot_check};
use tempered::convex::{make_pmodel_profile, make_potential, AnisotropyMatrix};
use tempered::solver::{evolve, init_grid, Datum, Domain};

fn main() -> tempered::Result<()> {
    let p = make_potential(make_pmodel_profile(2.0)?, AnisotropyMatrix::identity(1), 1.0)?;
    for beta in [0.5, 1.0, 2.0, 4.0] {
        let u0 = init_grid(&Domain::new(&[-4.0], &[4.0])?, &[800], &Datum::box_1d(-1.0, 1.0, beta))?;
        let traj = evolve(&u0, &p, 2.0, 4000, 0.5)?;
        let r = rankine_hugoniot_check(&traj, &p, 5.0, default_window(&traj))?;
        println!(
            "beta {beta:<4} regime {:<8} velocity {:.5} (predicted {:.1}) jumps seen {} trace error {:.2e}",
            r.regime,
            r.velocity,
            r.predicted,
            r.samples.len(),
            r.trace_relative_error
        );
    }
    Ok(())
}
