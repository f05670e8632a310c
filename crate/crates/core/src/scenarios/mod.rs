//! Model builders and reports for the queue-backlog and epidemic case studies.

mod csoc;
mod health;
mod report;
mod sampling;

pub use csoc::{build_csoc_overtime, CsocParams};
pub use health::{build_health_chain, HealthModel, HealthParams};
pub use report::{compare_report, ComparisonReport};
pub use sampling::sample_horizons;

use crate::finite::{cost_sequence_naive, CostSequence, FiniteError};
use crate::linalg::LinalgError;
use crate::markov::MarkovError;
use crate::wasserstein::WassersteinError;
use crate::{Matrix, Vector};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScenarioError {
    #[error("invalid parameter: {0}")]
    Invalid(String),
    #[error("no horizon samples")]
    NoSamples,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Markov(#[from] MarkovError),
    #[error(transparent)]
    Finite(#[from] FiniteError),
    #[error(transparent)]
    Wasserstein(#[from] WassersteinError),
}

/// A column-stochastic chain with state distribution `x0` and per-state
/// cost `c`, replicated over `copies` independent identical units whose
/// costs add up.
#[derive(Debug, Clone)]
pub struct ChainModel {
    pub m: Matrix,
    pub x0: Vector,
    pub c: Vector,
    pub copies: usize,
}

impl ChainModel {
    /// Total expected cost `copies · ⟨c, Mᵗ x0⟩` for `t = 1..=horizon`.
    pub fn cost_sequence(&self, horizon: usize) -> Result<CostSequence<f64>, ScenarioError> {
        let seq = cost_sequence_naive(&self.m, &self.x0, &self.c, horizon)?;
        let k = self.copies as f64;
        Ok(CostSequence::new(seq.values().iter().map(|v| v * k).collect())?)
    }

    /// Total expected cost at a single time step.
    pub fn expected_cost(&self, t: usize) -> Result<f64, ScenarioError> {
        if t == 0 {
            return Ok(self.copies as f64 * self.x0.dot(&self.c)?);
        }
        Ok(self.cost_sequence(t)?.at(t))
    }
}
