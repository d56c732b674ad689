//! L¹ contraction and pointwise comparison on random ordered pairs, with and
//! without the front limiter. The seeds are those of the comparison_1d demo,
//! where one pair shows the limiter's small departure from monotonicity.

use tempered::analysis::comparison_suite;
use tempered::convex::{make_pmodel_profile, make_potential, AnisotropyMatrix};
use tempered::solver::{init_grid, Datum, Domain, SchemeOptions};

fn main() -> tempered::Result<()> {
    let p = make_potential(make_pmodel_profile(2.0)?, AnisotropyMatrix::identity(1), 1.0)?;
    let domain = Domain::new(&[-2.0], &[2.0])?;
    let random = |seed| Datum::Random { lo: vec![-1.0], hi: vec![1.0], max: 1.0, seed };
    let mut pairs = Vec::new();
    let base = 11 * 1_000_003u64;
    for k in 0..5u64 {
        let u0 = init_grid(&domain, &[200], &random(base + 2 * k))?;
        let w = init_grid(&domain, &[200], &random(base + 2 * k + 1))?;
        let v0 = w.with_values(u0.values().iter().zip(w.values()).map(|(a, b)| a + b).collect())?;
        pairs.push((u0, v0));
    }
    for limiter in [true, false] {
        let opts = SchemeOptions { front_limiter: limiter, ..Default::default() };
        let rep = comparison_suite(&p, &pairs, 0.25, 0.5, opts)?;
        println!("front limiter {limiter}: all hold {}, mass drift {:.1e}", rep.all_hold, rep.max_mass_drift);
        for (k, o) in rep.pairs.iter().enumerate() {
            println!("  pair {k}: |(u-v)+| {:.6e} <= {:.6e}? {}  max(u-v) {:.2e}", o.lhs, o.rhs, o.contraction_holds, o.max_violation);
        }
    }
    Ok(())
}
