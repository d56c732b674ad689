//! Wulff shapes for three anisotropy matrices: semi-axes, the support
//! function against ℓ‖θ‖_A, and boundary points for plotting.

use tempered::convex::{make_pmodel_profile, make_potential, wulff_shape, AnisotropyMatrix};

fn main() -> tempered::Result<()> {
    let cases = [
        ("I", AnisotropyMatrix::identity(2)),
        ("diag(4,1)", AnisotropyMatrix::diag(&[4.0, 1.0])?),
        ("[[2,1],[1,2]]", AnisotropyMatrix::new(&[vec![2.0, 1.0], vec![1.0, 2.0]])?),
    ];
    for (name, a) in cases {
        let p = make_potential(make_pmodel_profile(2.0)?, a, 1.0)?;
        let w = wulff_shape(&p, 256)?;
        let mut worst = 0.0f64;
        for k in 0..64 {
            let phi = std::f64::consts::TAU * k as f64 / 64.0;
            let th = [phi.cos(), phi.sin()];
            worst = worst.max((w.support_function(&th) - p.recession(&th, 1e-7)?).abs());
        }
        println!(
            "A = {name:<14} half widths x {:.4} y {:.4}, convex {}, max |h_E - Phi_inf| {worst:.1e}",
            w.axis_half_width(0),
            w.axis_half_width(1),
            w.is_convex()
        );
    }

    let p = make_potential(make_pmodel_profile(2.0)?, AnisotropyMatrix::new(&[vec![2.0, 1.0], vec![1.0, 2.0]])?, 1.0)?;
    println!("x,y");
    for q in wulff_shape(&p, 256)?.resampled(16) {
        println!("{:.6},{:.6}", q[0], q[1]);
    }
    Ok(())
}
