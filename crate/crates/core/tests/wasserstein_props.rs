mod common;

use common::{cdf_norm, distribution, rng};
use drce_core::finite::CostSequence;
use drce_core::wasserstein::{drce_finite, drce_finite_lp, w1_distance, w_norm, AmbiguitySet, DrceCase, GroundDistance};
use drce_core::{Matrix, Tolerances, Vector};
use proptest::prelude::*;
use rand::Rng;

fn zero_sum(t: usize, seed: u64) -> Vector {
    let mut r = rng(seed);
    let mut v: Vector = (0..t).map(|_| r.gen_range(-1.0..1.0)).collect();
    let mean = v.sum() / t as f64;
    for x in v.as_mut_slice() {
        *x -= mean;
    }
    v
}

fn costs(t: usize, seed: u64) -> CostSequence<f64> {
    let mut r = rng(seed ^ 0x5eed);
    CostSequence::new((0..t).map(|_| r.gen_range(-3.0..3.0)).collect()).unwrap()
}

fn line_matrix(t: usize) -> Matrix {
    let mut d = Matrix::zeros(t, t);
    for i in 0..t {
        for j in 0..t {
            d[(i, j)] = i.abs_diff(j) as f64;
        }
    }
    d
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn line_norm_is_cdf_sum(seed in any::<u64>(), t in 2usize..9) {
        let mu = zero_sum(t, seed);
        let norm = w_norm(&mu, &GroundDistance::Line).unwrap();
        prop_assert!((norm - cdf_norm(&mu)).abs() < 1e-9);
        let scaled = w_norm(&mu.scale(-2.5), &GroundDistance::Line).unwrap();
        prop_assert!((scaled - 2.5 * norm).abs() < 1e-9);
    }

    #[test]
    fn norm_triangle_inequality(seed in any::<u64>(), t in 2usize..7) {
        let d = GroundDistance::explicit(line_matrix(t).map(|v| v.sqrt())).unwrap();
        let a = zero_sum(t, seed);
        let b = zero_sum(t, seed.wrapping_add(1));
        let sum = w_norm(&a.add(&b).unwrap(), &d).unwrap();
        prop_assert!(sum <= w_norm(&a, &d).unwrap() + w_norm(&b, &d).unwrap() + 1e-9);
    }

    #[test]
    fn robust_cost_bounds(seed in any::<u64>(), t in 2usize..9, xi in 0.0f64..3.0) {
        let p = distribution(t, &mut rng(seed));
        let seq = costs(t, seed);
        let sol = drce_finite(&seq, &AmbiguitySet::line(p.clone(), xi).unwrap()).unwrap();
        let nominal = seq.expectation(&p);
        let top = seq.values().iter().copied().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(sol.value >= nominal - 1e-9);
        prop_assert!(sol.value <= top + 1e-9);
        let q = &sol.worst_q;
        prop_assert!((q.sum() - 1.0).abs() < 1e-9 && q.iter().all(|&v| v >= -1e-9));
        prop_assert!((seq.expectation(q) - sol.value).abs() < 1e-9);
        prop_assert!(w1_distance(&p, q, &GroundDistance::Line).unwrap() <= xi + 1e-7);
    }

    #[test]
    fn robust_cost_monotone_in_radius(seed in any::<u64>(), t in 2usize..8, a in 0.0f64..2.0, b in 0.0f64..2.0) {
        let p = distribution(t, &mut rng(seed));
        let seq = costs(t, seed);
        let (lo, hi) = (a.min(b), a.max(b));
        let v_lo = drce_finite(&seq, &AmbiguitySet::line(p.clone(), lo).unwrap()).unwrap().value;
        let v_hi = drce_finite(&seq, &AmbiguitySet::line(p, hi).unwrap()).unwrap().value;
        prop_assert!(v_lo <= v_hi + 1e-9);
    }

    #[test]
    fn shortcut_agrees_with_program(seed in any::<u64>(), t in 2usize..9, frac in 0.0f64..1.0) {
        let p = distribution(t, &mut rng(seed));
        let xi = frac * p.iter().copied().fold(f64::INFINITY, f64::min);
        let seq = costs(t, seed);
        let amb = AmbiguitySet::line(p, xi).unwrap();
        let fast = drce_finite(&seq, &amb).unwrap();
        let lp = drce_finite_lp(&seq, &amb, &Tolerances::default()).unwrap();
        prop_assert!((fast.value - lp.value).abs() < 1e-8);
        prop_assert_eq!(lp.case_used, DrceCase::Lp);
    }

    #[test]
    fn explicit_line_metric_matches_line(seed in any::<u64>(), t in 2usize..7, xi in 0.0f64..2.0) {
        let p = distribution(t, &mut rng(seed));
        let seq = costs(t, seed);
        let line = drce_finite(&seq, &AmbiguitySet::line(p.clone(), xi).unwrap()).unwrap().value;
        let d = GroundDistance::explicit(line_matrix(t)).unwrap();
        let explicit = drce_finite(&seq, &AmbiguitySet::new(p, xi, d).unwrap()).unwrap().value;
        prop_assert!((line - explicit).abs() < 1e-8);
    }
}

#[test]
fn rejects_invalid_metric() {
    let d = Matrix::from_f64_rows(&[&[0.0, 1.0, 5.0], &[1.0, 0.0, 1.0], &[5.0, 1.0, 0.0]]);
    assert!(GroundDistance::explicit(d).is_err());
}
