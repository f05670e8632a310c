use super::{ChainModel, ScenarioError};
use crate::{Matrix, Vector};

/// Alert-queue parameters for one analyst; the total cost sums over `analysts`.
#[derive(Debug, Clone, PartialEq)]
pub struct CsocParams {
    /// Alerts per hour.
    pub arrival_rate: f64,
    /// Alerts per hour.
    pub service_rate: f64,
    pub step_seconds: f64,
    pub queue_cap: usize,
    pub shift_steps: u64,
    pub analysts: usize,
    pub overtime_min: u64,
    pub overtime_max: u64,
    pub overtime_mean: u64,
}

impl Default for CsocParams {
    fn default() -> Self {
        Self {
            arrival_rate: 35.0,
            service_rate: 34.0,
            step_seconds: 30.0,
            queue_cap: 100,
            shift_steps: 960,
            analysts: 2,
            overtime_min: 1,
            overtime_max: 120,
            overtime_mean: 61,
        }
    }
}

impl CsocParams {
    fn validate(&self) -> Result<(f64, f64), ScenarioError> {
        let per_hour = 3600.0 / self.step_seconds;
        let a = self.arrival_rate / per_hour;
        let s = self.service_rate / per_hour;
        if !(self.step_seconds > 0.0) || !(a > 0.0 && a <= 1.0) || !(s > 0.0 && s <= 1.0) {
            return Err(ScenarioError::Invalid(format!(
                "per-step arrival and service probabilities must lie in (0, 1], got {a} and {s}"
            )));
        }
        if self.queue_cap == 0 || self.shift_steps == 0 || self.analysts == 0 {
            return Err(ScenarioError::Invalid("queue_cap, shift_steps and analysts must be positive".into()));
        }
        if !(self.overtime_min >= 1 && self.overtime_min <= self.overtime_mean && self.overtime_mean <= self.overtime_max) {
            return Err(ScenarioError::Invalid("overtime range must satisfy 1 <= min <= mean <= max".into()));
        }
        Ok((a, s))
    }
}

/// Overtime chain for one analyst's queue `{0..U}`.
///
/// During the shift each step sees one arrival with probability `a` and
/// one completion with probability `s`, independently; the queue moves up
/// on an arrival alone and down on a completion alone, clamped at 0 and U.
/// The overtime chain has no arrivals, so state 0 absorbs. The initial
/// distribution is the end-of-shift queue starting from an empty queue.
pub fn build_csoc_overtime(p: &CsocParams) -> Result<ChainModel, ScenarioError> {
    let (a, s) = p.validate()?;
    let u = p.queue_cap;
    let n = u + 1;
    let mut shift = Matrix::zeros(n, n);
    let (up, down) = (a * (1.0 - s), s * (1.0 - a));
    for j in 0..n {
        let to_up = if j < u { up } else { 0.0 };
        let to_down = if j > 0 { down } else { 0.0 };
        if j < u {
            shift[(j + 1, j)] = to_up;
        }
        if j > 0 {
            shift[(j - 1, j)] = to_down;
        }
        shift[(j, j)] = 1.0 - to_up - to_down;
    }
    let mut x0 = Vector::basis(n, 0);
    for _ in 0..p.shift_steps {
        x0 = shift.mat_vec(&x0)?;
    }

    let mut m = Matrix::zeros(n, n);
    m[(0, 0)] = 1.0;
    for j in 1..n {
        m[(j - 1, j)] = s;
        m[(j, j)] = 1.0 - s;
    }
    let c: Vector = (0..n)
        .map(|k| match k {
            0 => 0.0,
            _ if u == 1 => 0.5,
            _ => 0.5 + 0.5 * (k - 1) as f64 / (u - 1) as f64,
        })
        .collect();
    Ok(ChainModel {
        m,
        x0,
        c,
        copies: p.analysts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eigenvalues;
    use crate::markov::validate_stochastic;
    use crate::Tolerances;

    #[test]
    fn cost_profile() {
        let model = build_csoc_overtime(&CsocParams::default()).unwrap();
        assert_eq!(model.c[0], 0.0);
        assert_eq!(model.c[1], 0.5);
        assert_eq!(model.c[100], 1.0);
        assert!((model.x0.sum() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn overtime_chain_shape() {
        let model = build_csoc_overtime(&CsocParams::default()).unwrap();
        assert_eq!(model.m.column(0), Vector::basis(101, 0));
        validate_stochastic(model.m.clone(), &Tolerances::default()).unwrap();
        let small = build_csoc_overtime(&CsocParams {
            queue_cap: 10,
            ..CsocParams::default()
        })
        .unwrap();
        let units = eigenvalues(&small.m)
            .unwrap()
            .iter()
            .filter(|z| (z.norm() - 1.0).abs() < 1e-9)
            .count();
        assert_eq!(units, 1);
        let far = small.m.pow(5000).unwrap().mat_vec(&small.x0).unwrap();
        assert!((far[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_rates() {
        let p = CsocParams {
            arrival_rate: -1.0,
            ..CsocParams::default()
        };
        assert!(build_csoc_overtime(&p).is_err());
    }
}
