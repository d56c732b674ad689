//! Cost function of the Wilson profile g(z) = 1/(1 + √(2z)) in 1D, computed by
//! bisection and by the sampled-grid oracle, against its closed form
//! k(x) = −|x| + ln(1/(1 − |x|)).

use tempered::convex::{legendre_transform, make_pmodel_profile, make_potential, radial_samples, AnisotropyMatrix, LegendreGrid};

fn main() -> tempered::Result<()> {
    let p = make_potential(make_pmodel_profile(1.0)?, AnisotropyMatrix::identity(1), 1.0)?;
    // samples reach R = 50; the maximiser R = x/(1 - x) leaves that range
    // past x = 0.98, so the last grid value falls short
    let grid = LegendreGrid::new(&p, &radial_samples(1, 50.0, 50_000, 0))?;
    println!("{:>7} {:>12} {:>12} {:>12}", "x", "exact", "bisection", "grid");
    for x in [0.0f64, 0.25, 0.5, 0.75, 0.9, 0.95, 0.99] {
        let exact = -x + (1.0 / (1.0 - x)).ln();
        let k = legendre_transform(&p, &[x]);
        println!("{x:>7.3} {exact:>12.8} {:>12.8} {:>12.8}", k.finite().unwrap_or(f64::NAN), grid.transform(&[x]));
    }
    // |x| ≥ ℓ lies outside dom k
    println!("k(1.2) = {:?}", legendre_transform(&p, &[1.2]));
    println!("boundary cost k(±1) = {:?}", p.boundary_cost());
    Ok(())
}
