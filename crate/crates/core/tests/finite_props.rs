mod common;

use common::{brute_force, first_max, rng, stable_system};
use drce_core::finite::{cost_sequence_naive, cost_sequence_sabs, rce_finite};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn strided_equals_sequential(seed in any::<u64>(), n in 1usize..8, horizon in 1usize..400) {
        let (m, x, c) = stable_system(n, 0.98, &mut rng(seed));
        let naive = cost_sequence_naive(&m, &x, &c, horizon).unwrap();
        let sabs = cost_sequence_sabs(&m, &x, &c, horizon).unwrap();
        prop_assert_eq!(sabs.horizon(), horizon);
        for (a, b) in naive.values().iter().zip(sabs.values()) {
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
        }
    }

    #[test]
    fn stride_identity(seed in any::<u64>(), n in 1usize..6, b in 1u64..12, t in 1u64..120) {
        let (m, x, c) = stable_system(n, 0.95, &mut rng(seed));
        let big = m.pow(t / b * b).unwrap().mat_vec(&x).unwrap();
        let small = m.transpose().pow(t % b).unwrap().mat_vec(&c).unwrap();
        let direct = brute_force(&m, &x, &c, t as usize)[t as usize - 1];
        prop_assert!((small.dot(&big).unwrap() - direct).abs() < 1e-12);
    }

    #[test]
    fn worst_time_is_first_maximum(seed in any::<u64>(), n in 1usize..6, horizon in 1usize..200) {
        let (m, x, c) = stable_system(n, 1.0, &mut rng(seed));
        let seq = cost_sequence_naive(&m, &x, &c, horizon).unwrap();
        let (t, v) = rce_finite(&seq).unwrap();
        prop_assert_eq!((t, v), first_max(seq.values()));
    }
}

#[test]
fn zero_horizon_rejected() {
    let (m, x, c) = stable_system(3, 0.5, &mut rng(1));
    assert!(cost_sequence_naive(&m, &x, &c, 0).is_err());
    assert!(cost_sequence_sabs(&m, &x, &c, 0).is_err());
}
