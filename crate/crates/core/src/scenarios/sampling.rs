use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::ScenarioError;

/// `k` integer horizons in `[min, max]` from a triangular law with its mode at `mean`.
///
/// Each integer gets the weight of the continuous triangular density on
/// `[min − ½, max + ½]` evaluated at that integer.
pub fn sample_horizons(min: u64, max: u64, mean: u64, k: usize, seed: u64) -> Result<Vec<u64>, ScenarioError> {
    if !(min >= 1 && min <= mean && mean <= max) {
        return Err(ScenarioError::Invalid(format!(
            "need 1 <= min <= mean <= max, got min={min} mean={mean} max={max}"
        )));
    }
    if k == 0 {
        return Err(ScenarioError::NoSamples);
    }
    let (a, b, c) = (min as f64 - 0.5, max as f64 + 0.5, mean as f64);
    let weights: Vec<f64> = (min..=max)
        .map(|t| {
            let x = t as f64;
            if x <= c {
                (x - a) / (c - a)
            } else {
                (b - x) / (b - c)
            }
        })
        .collect();
    let dist = WeightedIndex::new(&weights).map_err(|e| ScenarioError::Invalid(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..k).map(|_| min + dist.sample(&mut rng) as u64).collect())
}
