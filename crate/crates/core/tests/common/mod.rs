#![allow(dead_code)]

use drce_core::bench::{random_stable, random_stochastic, random_vector};
use drce_core::{Matrix, Vector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Stable system `(M, x0, c)` with `‖M‖∞ = radius`.
pub fn stable_system(n: usize, radius: f64, rng: &mut ChaCha8Rng) -> (Matrix, Vector, Vector) {
    (random_stable(n, radius, rng), random_vector(n, rng), random_vector(n, rng))
}

pub fn chain(n: usize, rng: &mut ChaCha8Rng) -> Matrix {
    random_stochastic(n, rng)
}

pub fn distribution(n: usize, rng: &mut ChaCha8Rng) -> Vector {
    let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / s).collect()
}

/// `Σ_i |F_μ(i)|`, the line-distance W₁ norm via cumulative sums.
pub fn cdf_norm(mu: &Vector) -> f64 {
    let mut acc = 0.0;
    let mut total = 0.0;
    for &v in mu.iter().take(mu.dim().saturating_sub(1)) {
        acc += v;
        total += f64::abs(acc);
    }
    total
}

/// `⟨c, Mᵗ x⟩` for `t = 1..=horizon` by repeated multiplication.
pub fn brute_force(m: &Matrix, x: &Vector, c: &Vector, horizon: usize) -> Vec<f64> {
    let mut v = x.clone();
    (0..horizon)
        .map(|_| {
            v = m.mat_vec(&v).unwrap();
            c.dot(&v).unwrap()
        })
        .collect()
}

/// 1-based index and value of the first maximum.
pub fn first_max(values: &[f64]) -> (usize, f64) {
    let mut best = (1, values[0]);
    for (i, &v) in values.iter().enumerate() {
        if v > best.1 {
            best = (i + 1, v);
        }
    }
    best
}
