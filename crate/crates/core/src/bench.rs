//! Timing helpers and random instance generators.

use std::time::{Duration, Instant};

use rand::Rng;

use crate::finite::{cost_sequence_naive, cost_sequence_sabs, FiniteError};
use crate::linalg::LinalgError;
use crate::{Matrix, Vector};

/// Random column-stochastic matrix with strictly positive entries.
pub fn random_stochastic(n: usize, rng: &mut impl Rng) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    for j in 0..n {
        let col: Vec<f64> = (0..n).map(|_| rng.gen_range(0.01..1.0)).collect();
        let s: f64 = col.iter().sum();
        for (i, v) in col.into_iter().enumerate() {
            m[(i, j)] = v / s;
        }
    }
    m
}

/// Random matrix rescaled so that its ∞-norm is `radius`, hence stable for `radius < 1`.
pub fn random_stable(n: usize, radius: f64, rng: &mut impl Rng) -> Matrix {
    let m = Matrix::from_vec_unchecked(n, n, (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect());
    let norm = m.norm_inf();
    m.scale(radius / norm)
}

pub fn random_vector(n: usize, rng: &mut impl Rng) -> Vector {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

/// Fastest of `reps` runs of `f`.
pub fn best_of<R>(reps: usize, mut f: impl FnMut() -> R) -> (Duration, R) {
    let mut best = Duration::MAX;
    let mut out = None;
    for _ in 0..reps.max(1) {
        let start = Instant::now();
        let r = f();
        best = best.min(start.elapsed());
        out = Some(r);
    }
    (best, out.expect("at least one run"))
}

#[derive(Debug, Clone, Copy)]
pub struct SequenceTiming {
    pub naive: Duration,
    pub sabs: Duration,
    /// Largest entrywise difference between the two sequences.
    pub max_diff: f64,
}

/// Times the sequential and stride-based cost sequences on the same input.
pub fn time_cost_sequences(
    m: &Matrix,
    x0: &Vector,
    c: &Vector,
    horizon: usize,
    reps: usize,
) -> Result<SequenceTiming, FiniteError> {
    let (naive, a) = best_of(reps, || cost_sequence_naive(m, x0, c, horizon));
    let (sabs, b) = best_of(reps, || cost_sequence_sabs(m, x0, c, horizon));
    let (a, b) = (a?, b?);
    let max_diff = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    Ok(SequenceTiming { naive, sabs, max_diff })
}

/// Times `m^power` by successive squaring.
pub fn time_power(m: &Matrix, power: u64, reps: usize) -> Result<Duration, LinalgError> {
    let (d, r) = best_of(reps, || m.pow(power));
    r?;
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let m = random_stochastic(5, &mut rng);
        for j in 0..5 {
            assert!((m.column(j).sum() - 1.0).abs() < 1e-12);
        }
        let s = random_stable(6, 0.9, &mut rng);
        assert!((s.norm_inf() - 0.9).abs() < 1e-12);
    }

    #[test]
    fn timings_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = random_stable(8, 0.95, &mut rng);
        let x0 = random_vector(8, &mut rng);
        let c = random_vector(8, &mut rng);
        let t = time_cost_sequences(&m, &x0, &c, 300, 1).unwrap();
        assert!(t.max_diff < 1e-12);
        time_power(&m, 1000, 1).unwrap();
    }
}
