use super::{ChainModel, ScenarioError};
use crate::{Matrix, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HealthModel {
    /// Susceptible, Infected, Recovered.
    Sir,
    /// Susceptible, Vaccinated, Infected, Recovered.
    Svir,
}

impl std::str::FromStr for HealthModel {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sir" => Ok(Self::Sir),
            "svir" => Ok(Self::Svir),
            other => Err(ScenarioError::Invalid(format!("unknown model '{other}'"))),
        }
    }
}

impl HealthModel {
    /// Per-person transition table, row = from, column = to.
    fn table(self) -> &'static [&'static [f64]] {
        match self {
            Self::Sir => &[&[0.2, 0.8, 0.0], &[0.0, 0.5, 0.5], &[0.1, 0.0, 0.9]],
            Self::Svir => &[
                &[0.1, 0.1, 0.8, 0.0],
                &[0.1, 0.9, 0.0, 0.0],
                &[0.0, 0.0, 0.5, 0.5],
                &[0.1, 0.0, 0.0, 0.9],
            ],
        }
    }

    fn infected(self) -> usize {
        match self {
            Self::Sir => 1,
            Self::Svir => 2,
        }
    }

    fn default_init(self) -> Vec<f64> {
        match self {
            Self::Sir => vec![1.0, 0.0, 0.0],
            Self::Svir => vec![0.4, 0.6, 0.0, 0.0],
        }
    }

    /// Column-stochastic per-person matrix.
    pub fn person_matrix(self) -> Matrix {
        Matrix::from_f64_rows(self.table()).transpose()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HealthParams {
    pub model: HealthModel,
    pub population: usize,
    pub horizon_min: u64,
    pub horizon_max: u64,
    pub horizon_mean: u64,
    /// Per-person initial distribution; `None` uses the model default.
    pub init: Option<Vec<f64>>,
}

impl HealthParams {
    pub fn new(model: HealthModel) -> Self {
        Self {
            model,
            population: 5,
            horizon_min: 1,
            horizon_max: 15,
            horizon_mean: 8,
            init: None,
        }
    }
}

/// Joint chain over all individuals; the cost of a joint state is its number
/// of infected people.
pub fn build_health_chain(p: &HealthParams) -> Result<ChainModel, ScenarioError> {
    if p.population == 0 {
        return Err(ScenarioError::Invalid("population must be at least 1".into()));
    }
    let person = p.model.person_matrix();
    let k = person.rows();
    let init = p.init.clone().unwrap_or_else(|| p.model.default_init());
    if init.len() != k || init.iter().any(|&v| !(v >= 0.0)) || (init.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err(ScenarioError::Invalid(format!(
            "initial distribution must be {k} non-negative entries summing to 1"
        )));
    }
    let states = k
        .checked_pow(p.population as u32)
        .filter(|&s| s <= 1 << 14)
        .ok_or_else(|| ScenarioError::Invalid(format!("population {} is too large for a dense joint chain", p.population)))?;
    let mut m = person.clone();
    let mut x0 = init.clone();
    for _ in 1..p.population {
        m = m.kron(&person);
        x0 = x0.iter().flat_map(|&a| init.iter().map(move |&b| a * b)).collect();
    }
    let infected = p.model.infected();
    let c: Vector = (0..states)
        .map(|mut s| {
            let mut count = 0;
            for _ in 0..p.population {
                if s % k == infected {
                    count += 1;
                }
                s /= k;
            }
            count as f64
        })
        .collect();
    Ok(ChainModel {
        m,
        x0: Vector::new(x0)?,
        c,
        copies: 1,
    })
}
