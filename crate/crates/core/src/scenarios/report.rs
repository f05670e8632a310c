use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{ChainModel, ScenarioError};
use crate::wasserstein::{drce_finite, AmbiguitySet};
use crate::Vector;

/// Nominal versus distributionally robust cost for one set of horizon samples.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    /// Ĉ, the expected cost at the rounded mean horizon.
    pub empirical_cost: f64,
    /// C, the worst expected cost over the Wasserstein ball.
    pub drce_cost: f64,
    /// Expected cost under the empirical horizon distribution itself.
    pub nominal_cost: f64,
    /// Share of simulated runs whose cost exceeds Ĉ, in percent.
    pub pct_exceed_empirical: f64,
    /// Share of simulated runs whose cost exceeds C, in percent.
    pub pct_exceed_drce: f64,
    pub t_hat: u64,
    pub xi: f64,
    pub seed: u64,
    pub samples: usize,
}

impl ComparisonReport {
    pub const CSV_HEADER: &'static str =
        "empirical_cost,drce_cost,nominal_cost,pct_exceed_empirical,pct_exceed_drce,t_hat,xi,seed,samples";

    /// One CSV row; reals use `fmt_real`.
    pub fn csv_row(&self, fmt_real: impl Fn(f64) -> String) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            fmt_real(self.empirical_cost),
            fmt_real(self.drce_cost),
            fmt_real(self.nominal_cost),
            fmt_real(self.pct_exceed_empirical),
            fmt_real(self.pct_exceed_drce),
            self.t_hat,
            fmt_real(self.xi),
            self.seed,
            self.samples
        )
    }
}

impl fmt::Display for ComparisonReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "samples        {} (seed {})", self.samples, self.seed)?;
        writeln!(f, "t_hat          {}", self.t_hat)?;
        writeln!(f, "radius         {}", self.xi)?;
        writeln!(f, "empirical cost {:.4}   exceeded in {:.0}% of runs", self.empirical_cost, self.pct_exceed_empirical)?;
        writeln!(f, "robust cost    {:.4}   exceeded in {:.0}% of runs", self.drce_cost, self.pct_exceed_drce)?;
        write!(f, "nominal cost   {:.4}", self.nominal_cost)
    }
}

/// Column-wise cumulative distributions for inverse-CDF sampling.
struct Sampler {
    n: usize,
    cdf: Vec<f64>,
}

impl Sampler {
    fn new(model: &ChainModel) -> Self {
        let n = model.m.rows();
        let mut cdf = vec![0.0; n * (n + 1)];
        for j in 0..n {
            let mut acc = 0.0;
            for i in 0..n {
                acc += model.m[(i, j)];
                cdf[j * n + i] = acc;
            }
        }
        let mut acc = 0.0;
        for i in 0..n {
            acc += model.x0[i];
            cdf[n * n + i] = acc;
        }
        Self { n, cdf }
    }

    /// Column `j` of the chain, or the initial distribution for `j = n`.
    fn draw(&self, j: usize, rng: &mut ChaCha8Rng) -> usize {
        let col = &self.cdf[j * self.n..(j + 1) * self.n];
        let u = rng.gen::<f64>() * col[self.n - 1];
        col.partition_point(|&v| v <= u).min(self.n - 1)
    }
}

/// Compares the cost at the mean horizon with the robust cost over a
/// W₁-ball of radius `xi` around the empirical horizon distribution, and
/// simulates one run per sample to see how often each estimate is exceeded.
///
/// Run `i` draws from its own ChaCha stream `i + 1` of `seed`, so results do
/// not depend on evaluation order.
pub fn compare_report(model: &ChainModel, samples: &[u64], xi: f64, seed: u64) -> Result<ComparisonReport, ScenarioError> {
    if samples.is_empty() {
        return Err(ScenarioError::NoSamples);
    }
    if samples.contains(&0) {
        return Err(ScenarioError::Invalid("horizon samples must be at least 1".into()));
    }
    let k = samples.len();
    let t_hat = (samples.iter().sum::<u64>() as f64 / k as f64).round() as u64;
    let horizon = *samples.iter().max().expect("non-empty") as usize;
    let seq = model.cost_sequence(horizon.max(t_hat as usize))?;
    let empirical_cost = seq.at(t_hat as usize);
    let seq = crate::finite::CostSequence::new(seq.values()[..horizon].to_vec())?;

    let mut p_hat = vec![0.0; horizon];
    for &t in samples {
        p_hat[t as usize - 1] += 1.0 / k as f64;
    }
    let p_hat = Vector::new(p_hat)?;
    let nominal_cost = seq.expectation(&p_hat);
    let drce_cost = drce_finite(&seq, &AmbiguitySet::line(p_hat, xi)?)?.value;

    let sampler = Sampler::new(model);
    let costs: Vec<f64> = samples
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64 + 1);
            (0..model.copies)
                .map(|_| {
                    let mut state = sampler.draw(sampler.n, &mut rng);
                    for _ in 0..t {
                        state = sampler.draw(state, &mut rng);
                    }
                    model.c[state]
                })
                .sum()
        })
        .collect();
    let pct = |level: f64| 100.0 * costs.iter().filter(|&&c| c > level).count() as f64 / k as f64;
    Ok(ComparisonReport {
        empirical_cost,
        drce_cost,
        nominal_cost,
        pct_exceed_empirical: pct(empirical_cost),
        pct_exceed_drce: pct(drce_cost),
        t_hat,
        xi,
        seed,
        samples: k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios::{build_health_chain, HealthModel, HealthParams};

    fn sir() -> ChainModel {
        build_health_chain(&HealthParams::new(HealthModel::Sir)).unwrap()
    }

    #[test]
    fn point_mass_without_radius() {
        let r = compare_report(&sir(), &[8; 20], 0.0, 3).unwrap();
        assert_eq!(r.t_hat, 8);
        assert!((r.drce_cost - r.empirical_cost).abs() < 1e-12);
    }

    #[test]
    fn radius_monotone() {
        let samples = crate::scenarios::sample_horizons(1, 15, 8, 100, 7).unwrap();
        let mut last = f64::NEG_INFINITY;
        for xi in [0.0, 0.5, 1.0, 2.0, 4.0, 8.0] {
            let r = compare_report(&sir(), &samples, xi, 7).unwrap();
            assert!(r.drce_cost >= last - 1e-12);
            assert!(r.drce_cost >= r.nominal_cost - 1e-12);
            assert!((0.0..=100.0).contains(&r.pct_exceed_drce));
            last = r.drce_cost;
        }
    }

    #[test]
    fn deterministic_under_seed() {
        let samples = crate::scenarios::sample_horizons(1, 15, 8, 50, 1).unwrap();
        let a = compare_report(&sir(), &samples, 1.0, 9).unwrap();
        let b = compare_report(&sir(), &samples, 1.0, 9).unwrap();
        assert_eq!(a, b);
        assert!(compare_report(&sir(), &[], 1.0, 9).is_err());
    }
}
