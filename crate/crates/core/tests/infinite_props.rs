mod common;

use common::{brute_force, first_max, rng, stable_system};
use drce_core::infinite::{decompose, find_n0, find_t0, geometric_drce, geometric_objective, rce_infinite, OscillatorySum, RceInfKind};
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn decomposition_reproduces_costs(seed in any::<u64>(), n in 1usize..7) {
        let (m, x, c) = stable_system(n, 0.9, &mut rng(seed));
        let s = decompose(&m, &c, &x).unwrap();
        let brute = brute_force(&m, &x, &c, 60);
        for (t, &g) in brute.iter().enumerate() {
            prop_assert!((s.eval(t as u64 + 1).unwrap() - g).abs() < 1e-8, "t = {}", t + 1);
        }
    }

    #[test]
    fn cutoff_is_valid(seed in any::<u64>(), n in 1usize..6) {
        let (m, x, c) = stable_system(n, 0.9, &mut rng(seed));
        let s = decompose(&m, &c, &x).unwrap();
        let cut = find_t0(&s).unwrap();
        if let (Some(t0), Some(n0)) = (cut.t0, cut.n0) {
            let g0 = s.eval(t0).unwrap();
            prop_assert!(g0 > 0.0);
            // Past find_n0 the whole envelope is below g(t₀).
            let tail = find_n0(&s, g0).unwrap();
            let env = s.total_amplitude() * s.dominant_magnitude().powf(tail as f64);
            prop_assert!(env <= g0 * (1.0 + 1e-9));
            // The supremum is attained within [1, max(n₀, t₀)].
            let head = (1..=n0.max(t0)).map(|t| s.eval(t).unwrap()).fold(f64::NEG_INFINITY, f64::max);
            for t in n0..n0 + 200 {
                prop_assert!(s.eval(t).unwrap() <= head + 1e-12);
            }
        }
    }

    #[test]
    fn infinite_search_matches_long_scan(seed in any::<u64>(), n in 1usize..6) {
        let (m, x, c) = stable_system(n, 0.85, &mut rng(seed));
        let res = rce_infinite(&m, &c, &x).unwrap();
        let brute = brute_force(&m, &x, &c, 1500);
        let (t, v) = first_max(&brute);
        if v > 1e-12 {
            prop_assert_eq!(res.kind, RceInfKind::Attained);
            prop_assert!((res.value - v).abs() < 1e-9 * (1.0 + v.abs()));
            if brute.iter().filter(|&&g| (g - v).abs() < 1e-9).count() == 1 {
                prop_assert_eq!(res.t_star, Some(t as u64));
            }
        } else if v < -1e-12 {
            prop_assert_eq!(res.kind, RceInfKind::SupremumAtInfinity);
        }
    }

    #[test]
    fn geometric_dominates_interval_points(seed in any::<u64>(), rho_hat in 0.05f64..0.95, xi in 0.0f64..5.0) {
        let mut r = rng(seed);
        let complex: Vec<(f64, f64, f64, f64)> = (0..r.gen_range(0..3))
            .map(|_| (r.gen_range(0.1..2.0), r.gen_range(0.1..0.95), r.gen_range(1.0..179.0), r.gen_range(0.0..360.0)))
            .collect();
        let real: Vec<(f64, f64)> = (0..r.gen_range(1..3))
            .map(|_| (r.gen_range(-2.0..2.0), r.gen_range(-0.95..0.95)))
            .collect();
        let s = OscillatorySum::<f64>::new(&complex, &real).unwrap();
        prop_assume!(!s.is_empty());
        let res = geometric_drce(&s, rho_hat, xi, 1e-10).unwrap();
        let (lo, hi) = res.interval;
        prop_assert!(lo <= res.rho_star && res.rho_star <= hi);
        let g: Vec<f64> = (1..=res.n0).map(|t| s.eval(t).unwrap()).collect();
        for k in 0..=20 {
            let rho = lo + (hi - lo) * k as f64 / 20.0;
            prop_assert!(geometric_objective(&g, rho).0 <= res.value + 1e-7);
        }
        prop_assert!((geometric_objective(&g, res.rho_star).0 - res.value).abs() < 1e-12);
    }
}
