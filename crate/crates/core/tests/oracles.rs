//! Closed forms the numerics must reproduce.

use tempered::analysis::subsolution_field;
use tempered::convex::{legendre_transform, make_pmodel_profile, make_potential, wulff_shape, AnisotropyMatrix};

#[test]
fn relativistic_cost_is_one_minus_sqrt() {
    // p = 2: Φ(r) = √(1 + |r|²) − 1, so k(y) = 1 − √(1 − |y|²) on |y| < 1
    let p = make_potential(make_pmodel_profile(2.0).unwrap(), AnisotropyMatrix::identity(2), 1.0).unwrap();
    for i in 0..40 {
        let s = 0.99 * i as f64 / 39.0;
        let phi = 0.7 * i as f64;
        let y = [s * phi.cos(), s * phi.sin()];
        let k = legendre_transform(&p, &y).finite().unwrap();
        assert!((k - (1.0 - (1.0 - s * s).sqrt())).abs() < 1e-9, "s = {s}: {k}");
    }
    assert!(legendre_transform(&p, &[0.8, 0.8]).is_infinite());
}

#[test]
fn anisotropic_cost_uses_the_dual_norm() {
    // with A, k(y) = k_I(‖y‖_{A⁻¹})
    let a = AnisotropyMatrix::new(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
    let p = make_potential(make_pmodel_profile(2.0).unwrap(), a, 1.0).unwrap();
    for y in [[0.3, 0.1], [-0.5, 0.9], [1.0, -0.2]] {
        let s = a.dual_norm(&y);
        let k = legendre_transform(&p, &y);
        if s < 1.0 {
            assert!((k.finite().unwrap() - (1.0 - (1.0 - s * s).sqrt())).abs() < 1e-9);
        } else {
            assert!(k.is_infinite());
        }
    }
}

#[test]
fn potential_closed_form() {
    let p = make_potential(make_pmodel_profile(2.0).unwrap(), AnisotropyMatrix::identity(1), 1.0).unwrap();
    for r in [0.0, 0.1, 1.0, 7.5, 300.0] {
        assert!((p.eval(&[r]) - ((1.0 + r * r).sqrt() - 1.0)).abs() < 1e-9 * (1.0 + r));
        assert!((p.flux(&[r])[0] - r / (1.0 + r * r).sqrt()).abs() < 1e-12);
    }
}

#[test]
fn wulff_shape_of_a_tilted_matrix() {
    // E = {y : ‖y‖_{A⁻¹} ≤ ℓ}; for [[2,1],[1,2]] the axes are √3 along (1,1) and 1 along (1,−1)
    let a = AnisotropyMatrix::new(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
    let p = make_potential(make_pmodel_profile(2.0).unwrap(), a, 1.0).unwrap();
    let w = wulff_shape(&p, 512).unwrap();
    let d = std::f64::consts::FRAC_1_SQRT_2;
    assert!((w.support_function(&[d, d]) - 3f64.sqrt()).abs() < 1e-9);
    assert!((w.support_function(&[d, -d]) - 1.0).abs() < 1e-9);
}

#[test]
fn bump_profile() {
    let m = AnisotropyMatrix::identity(1);
    // e^{-at} √(R² − x²), R = R₀ + t
    let v = subsolution_field(&m, 1.0, 2.0, 0.5, &[0.9]);
    assert!((v - (-1.0f64).exp() * (2.25f64 - 0.81).sqrt()).abs() < 1e-14);
    assert_eq!(subsolution_field(&m, 1.0, 2.0, 0.5, &[1.6]), 0.0);
}
