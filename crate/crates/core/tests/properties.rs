use proptest::prelude::*;

use tempered::convex::{legendre_transform, make_pmodel_profile, make_potential, wulff_shape, AnisotropyMatrix, CostValue, Potential};
use tempered::geometry::{contained_within, hausdorff_distance, minkowski_dilate, SupportSet};
use tempered::solver::{init_grid, stable_timestep, step_with, total_mass, Datum, Domain, GridField, SchemeOptions};

fn spd() -> impl Strategy<Value = AnisotropyMatrix> {
    (0.2f64..4.0, 0.2f64..4.0, -0.9f64..0.9).prop_map(|(a, d, c)| {
        let off = c * (a * d).sqrt();
        AnisotropyMatrix::new(&[vec![a, off], vec![off, d]]).unwrap()
    })
}

fn potential_2d() -> impl Strategy<Value = Potential> {
    (1.0f64..3.0, spd(), 0.5f64..2.0).prop_map(|(p, a, l)| make_potential(make_pmodel_profile(p).unwrap(), a, l).unwrap())
}

fn vec2(r: f64) -> impl Strategy<Value = [f64; 2]> {
    (-r..r, -r..r).prop_map(|(x, y)| [x, y])
}

fn random_field_1d(seed: u64, n: usize) -> GridField {
    let d = Datum::Random { lo: vec![-0.5], hi: vec![0.5], max: 1.0, seed };
    init_grid(&Domain::new(&[-2.0], &[2.0]).unwrap(), &[n], &d).unwrap()
}

fn random_field_2d(seed: u64, n: usize) -> GridField {
    let d = Datum::Random { lo: vec![-0.4, -0.3], hi: vec![0.3, 0.4], max: 1.0, seed };
    init_grid(&Domain::new(&[-1.0, -1.0], &[1.0, 1.0]).unwrap(), &[n, n], &d).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn potential_is_even_convex_and_nonnegative(p in potential_2d(), a in vec2(20.0), b in vec2(20.0)) {
        let (fa, fb) = (p.eval(&a), p.eval(&b));
        let mid = [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
        prop_assert!(fa >= 0.0);
        prop_assert!((p.eval(&[-a[0], -a[1]]) - fa).abs() <= 1e-12 * (1.0 + fa));
        prop_assert!(p.eval(&mid) <= 0.5 * (fa + fb) + 1e-10 * (1.0 + fa + fb));
    }

    #[test]
    fn flux_is_bounded_by_its_supremum(p in potential_2d(), r in vec2(1e3)) {
        let f = p.flux(&r);
        let norm = (f[0] * f[0] + f[1] * f[1]).sqrt();
        prop_assert!(norm <= p.psi_sup() * (1.0 + 1e-12));
        // the flux lies in the Wulff shape: ‖ψ‖_{A⁻¹} ≤ ℓ
        prop_assert!(p.matrix().dual_norm(&f) <= p.ell() * (1.0 + 1e-12));
    }

    #[test]
    fn recession_is_the_a_norm(p in potential_2d(), phi in 0.0f64..std::f64::consts::TAU) {
        let th = [phi.cos(), phi.sin()];
        let rec = p.recession(&th, 1e-7).unwrap();
        prop_assert!((rec - p.ell() * p.matrix().norm(&th)).abs() <= 1e-6);
    }

    #[test]
    fn fenchel_young(p in potential_2d(), r in vec2(5.0), s in 0.0f64..0.99, phi in 0.0f64..std::f64::consts::TAU) {
        // y inside the open Wulff shape: y = s ℓ A u / ‖u‖_A
        let u = [phi.cos(), phi.sin()];
        let au = p.matrix().apply(&u);
        let n = p.matrix().norm(&u);
        let y = [s * p.ell() * au[0] / n, s * p.ell() * au[1] / n];
        let k = legendre_transform(&p, &y);
        match k {
            CostValue::Finite { value } => {
                prop_assert!(value >= -1e-12);
                prop_assert!(p.eval(&r) + value >= r[0] * y[0] + r[1] * y[1] - 1e-8);
            }
            other => prop_assert!(false, "expected a finite cost inside the Wulff shape, got {other:?}"),
        }
    }

    #[test]
    fn cost_is_infinite_outside_the_wulff_shape(p in potential_2d(), s in 1.01f64..3.0, phi in 0.0f64..std::f64::consts::TAU) {
        let u = [phi.cos(), phi.sin()];
        let au = p.matrix().apply(&u);
        let n = p.matrix().norm(&u);
        let y = [s * p.ell() * au[0] / n, s * p.ell() * au[1] / n];
        prop_assert!(legendre_transform(&p, &y).is_infinite());
    }

    #[test]
    fn dilation_contains_and_grows(p in potential_2d(), lo in vec2(0.5), w in 0.05f64..0.5, h in 0.05f64..0.5, t1 in 0.0f64..0.5, dt in 0.01f64..0.5) {
        let k = SupportSet::rectangle(lo, [lo[0] + w, lo[1] + h]).unwrap();
        let e = wulff_shape(&p, 128).unwrap();
        let a = minkowski_dilate(&k, &e, t1).unwrap();
        let b = minkowski_dilate(&k, &e, t1 + dt).unwrap();
        prop_assert!(contained_within(&k, &a, 1e-9));
        prop_assert!(contained_within(&a, &b, 1e-9));
        prop_assert!(b.measure() >= a.measure());
        // the dilation adds at most max_θ h_E(θ) = ℓ √λ_max
        let d = hausdorff_distance(&a, &b).unwrap();
        prop_assert!(d <= p.ell() * p.matrix().lambda_max().sqrt() * dt * (1.0 + 1e-6) + 1e-9);
    }

    #[test]
    fn hausdorff_is_a_metric_on_intervals(a in -2.0f64..2.0, la in 0.01f64..2.0, b in -2.0f64..2.0, lb in 0.01f64..2.0) {
        let s1 = SupportSet::interval(a, a + la).unwrap();
        let s2 = SupportSet::interval(b, b + lb).unwrap();
        let d12 = hausdorff_distance(&s1, &s2).unwrap();
        let d21 = hausdorff_distance(&s2, &s1).unwrap();
        prop_assert!((d12 - d21).abs() <= 1e-12);
        prop_assert!(d12 >= 0.0);
        prop_assert!(hausdorff_distance(&s1, &s1).unwrap() <= 1e-12);
        let exact = (a - b).abs().max((a + la - b - lb).abs());
        prop_assert!((d12 - exact).abs() <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn step_conserves_mass_and_positivity_1d(seed in any::<u64>(), p in 1.0f64..3.0, cfl in 0.1f64..1.0, limiter in any::<bool>()) {
        let pot = make_potential(make_pmodel_profile(p).unwrap(), AnisotropyMatrix::identity(1), 1.0).unwrap();
        let opts = SchemeOptions { front_limiter: limiter, ..Default::default() };
        let mut u = random_field_1d(seed, 120);
        let m0 = total_mass(&u);
        for _ in 0..20 {
            let dt = stable_timestep(&pot, &u, cfl);
            u = step_with(&u, &pot, dt, opts).unwrap();
        }
        prop_assert!(u.values().iter().all(|v| *v >= 0.0));
        prop_assert!((total_mass(&u) - m0).abs() <= 1e-12 * m0);
    }

    #[test]
    fn step_conserves_mass_and_positivity_2d(seed in any::<u64>(), p in potential_2d(), cfl in 0.1f64..1.0) {
        let mut u = random_field_2d(seed, 40);
        let m0 = total_mass(&u);
        for _ in 0..5 {
            let dt = stable_timestep(&p, &u, cfl);
            u = step_with(&u, &p, dt, SchemeOptions::default()).unwrap();
        }
        prop_assert!(u.values().iter().all(|v| *v >= 0.0));
        prop_assert!((total_mass(&u) - m0).abs() <= 1e-12 * m0);
    }

    #[test]
    fn step_commutes_with_reflection(seed in any::<u64>(), p in 1.0f64..3.0) {
        let pot = make_potential(make_pmodel_profile(p).unwrap(), AnisotropyMatrix::identity(1), 1.0).unwrap();
        let u = random_field_1d(seed, 100);
        let mirrored = u.with_values(u.values().iter().rev().cloned().collect()).unwrap();
        let dt = stable_timestep(&pot, &u, 0.5);
        let a = step_with(&u, &pot, dt, SchemeOptions::default()).unwrap();
        let b = step_with(&mirrored, &pot, dt, SchemeOptions::default()).unwrap();
        for (x, y) in a.values().iter().zip(b.values().iter().rev()) {
            prop_assert!((x - y).abs() <= 1e-13 * (1.0 + x.abs()));
        }
    }

    #[test]
    fn support_grows_at_most_one_cell_per_step(seed in any::<u64>(), p in potential_2d()) {
        let u = random_field_2d(seed, 40);
        let dt = stable_timestep(&p, &u, 0.9);
        let v = step_with(&u, &p, dt, SchemeOptions::default()).unwrap();
        let [nx, ny] = u.n();
        for j in 0..ny {
            for i in 0..nx {
                if v.get(i, j) > 0.0 {
                    let near = (i.saturating_sub(1)..=(i + 1).min(nx - 1))
                        .any(|a| (j.saturating_sub(1)..=(j + 1).min(ny - 1)).any(|b| u.get(a, b) > 0.0));
                    prop_assert!(near, "cell ({i}, {j}) filled from nowhere");
                }
            }
        }
    }

    #[test]
    fn threads_do_not_change_the_result(seed in any::<u64>(), p in potential_2d(), threads in 2usize..5) {
        let u = random_field_2d(seed, 32);
        let dt = stable_timestep(&p, &u, 0.5);
        let a = step_with(&u, &p, dt, SchemeOptions::default()).unwrap();
        let b = step_with(&u, &p, dt, SchemeOptions { threads, ..Default::default() }).unwrap();
        prop_assert_eq!(a.values(), b.values());
    }
}
