mod common;

use common::{rng, stable_system};
use drce_core::linalg::{inverse, real_jordan, solve, spectral_radius};
use drce_core::Matrix;
use proptest::prelude::*;

fn rel_close(a: &Matrix, b: &Matrix, tol: f64) -> bool {
    a.max_abs_diff(b) <= tol * (1.0 + a.norm_inf().max(b.norm_inf()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn power_is_additive(seed in any::<u64>(), n in 1usize..7, a in 0u64..40, b in 0u64..40) {
        let (m, _, _) = stable_system(n, 0.95, &mut rng(seed));
        let lhs = m.pow(a + b).unwrap();
        let rhs = m.pow(a).unwrap().matmul(&m.pow(b).unwrap()).unwrap();
        prop_assert!(rel_close(&lhs, &rhs, 1e-12));
    }

    #[test]
    fn power_matches_repeated_product(seed in any::<u64>(), n in 1usize..6, k in 0u64..25) {
        let (m, _, _) = stable_system(n, 1.3, &mut rng(seed));
        let mut naive = Matrix::identity(n);
        for _ in 0..k {
            naive = naive.matmul(&m).unwrap();
        }
        prop_assert!(rel_close(&m.pow(k).unwrap(), &naive, 1e-12));
    }

    #[test]
    fn spectral_radius_below_induced_norms(seed in any::<u64>(), n in 1usize..8, radius in 0.05f64..2.0) {
        let (m, _, _) = stable_system(n, radius, &mut rng(seed));
        let rho = spectral_radius(&m).unwrap();
        prop_assert!(rho >= 0.0);
        prop_assert!(rho <= m.norm_1() * (1.0 + 1e-9));
        prop_assert!(rho <= m.norm_inf() * (1.0 + 1e-9));
    }

    #[test]
    fn jordan_form_reconstructs(seed in any::<u64>(), n in 1usize..7) {
        let (m, _, _) = stable_system(n, 0.9, &mut rng(seed));
        let form = real_jordan(&m).unwrap();
        prop_assert!(rel_close(&form.reconstruct(), &m, 1e-6));
        let pp = form.p.matmul(&form.p_inverse).unwrap();
        prop_assert!(rel_close(&pp, &Matrix::identity(n), 1e-8));
    }

    #[test]
    fn blockwise_power_matches(seed in any::<u64>(), n in 1usize..6, k in 0u64..30) {
        let (m, _, _) = stable_system(n, 0.9, &mut rng(seed));
        let form = real_jordan(&m).unwrap();
        let jk = form.power_of_j(k);
        let direct = form.jordan_matrix().pow(k).unwrap();
        prop_assert!(rel_close(&jk, &direct, 1e-9));
        let mk = form.p.matmul(&jk).unwrap().matmul(&form.p_inverse).unwrap();
        prop_assert!(rel_close(&mk, &m.pow(k).unwrap(), 1e-5));
    }

    #[test]
    fn solve_and_inverse_agree(seed in any::<u64>(), n in 1usize..8) {
        let (m, b, _) = stable_system(n, 1.0, &mut rng(seed));
        let a = m.add(&Matrix::identity(n).scale(3.0)).unwrap();
        let x = solve(&a, &b).unwrap();
        prop_assert!(a.mat_vec(&x).unwrap().max_abs_diff(&b) < 1e-12);
        let inv = inverse(&a).unwrap();
        prop_assert!(rel_close(&a.matmul(&inv).unwrap(), &Matrix::identity(n), 1e-12));
    }

    #[test]
    fn kronecker_mixed_product(seed in any::<u64>(), n in 1usize..4, p in 1usize..4) {
        let mut r = rng(seed);
        let (a, _, _) = stable_system(n, 1.0, &mut r);
        let (b, _, _) = stable_system(p, 1.0, &mut r);
        let (c, _, _) = stable_system(n, 1.0, &mut r);
        let (d, _, _) = stable_system(p, 1.0, &mut r);
        let lhs = a.kron(&b).matmul(&c.kron(&d)).unwrap();
        let rhs = a.matmul(&c).unwrap().kron(&b.matmul(&d).unwrap());
        prop_assert!(rel_close(&lhs, &rhs, 1e-13));
    }
}
