//! Model and nominal-distribution files.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use drce_core::markov::{to_gas, GasSystem, MarkovChain};
use drce_core::{Matrix, Vector};
use serde::{Deserialize, Serialize};

use crate::InputError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Markov,
    Gas,
}

/// Row-major matrix, either nested rows or a flat list of `n·n` entries.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixData {
    Rows(Vec<Vec<f64>>),
    Flat(Vec<f64>),
}

impl MatrixData {
    fn to_matrix(&self, rows: usize, cols: usize, what: &str) -> Result<Matrix, InputError> {
        let flat: Vec<f64> = match self {
            Self::Rows(r) => {
                if r.len() != rows || r.iter().any(|row| row.len() != cols) {
                    return Err(InputError(format!("{what} must be {rows}x{cols}")));
                }
                r.concat()
            }
            Self::Flat(v) => v.clone(),
        };
        if flat.len() != rows * cols {
            return Err(InputError(format!("{what} has {} entries, expected {}", flat.len(), rows * cols)));
        }
        if flat.iter().any(|v| !v.is_finite()) {
            return Err(InputError(format!("{what} has a non-finite entry")));
        }
        Matrix::new(rows, cols, flat).map_err(|e| InputError(format!("{what}: {e}")))
    }

    pub fn from_matrix(m: &Matrix) -> Self {
        Self::Rows((0..m.rows()).map(|i| m.row(i).to_vec()).collect())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelFile {
    pub n: usize,
    pub matrix: MatrixData,
    pub kind: ModelKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<Vec<f64>>,
    /// `⟨c, π⟩`, added back to every cost of a reduced model.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost_offset: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stationary: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<MatrixData>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<MatrixData>,
}

/// A model ready for computation: `g(t) = offset + ⟨c, Mᵗ x0⟩`.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub kind: ModelKind,
    pub m: Matrix,
    pub cost: Option<Vector>,
    pub x0: Option<Vector>,
    pub offset: f64,
}

impl Loaded {
    pub fn cost(&self) -> Result<&Vector, InputError> {
        self.cost.as_ref().ok_or_else(|| InputError("model has no cost vector".into()))
    }

    pub fn x0(&self) -> Result<&Vector, InputError> {
        self.x0.as_ref().ok_or_else(|| InputError("model has no initial state x0".into()))
    }

    /// Stable form of the model; Markov chains are reduced first.
    pub fn stable(&self) -> Result<Loaded> {
        match self.kind {
            ModelKind::Gas => Ok(self.clone()),
            ModelKind::Markov => {
                let gas = reduce(&self.m)?;
                let (cost, x0) = (self.cost()?, self.x0()?);
                let v = gas.project_state(x0).map_err(|e| InputError(format!("x0: {e}")))?;
                let (gas, reduced) = gas.with_cost(cost)?;
                Ok(Loaded {
                    kind: ModelKind::Gas,
                    m: gas.m_bar.clone(),
                    cost: Some(reduced),
                    x0: Some(v),
                    offset: self.offset + gas.cost_offset.unwrap_or(0.0),
                })
            }
        }
    }
}

pub fn reduce(m: &Matrix) -> Result<GasSystem<f64>> {
    let chain = MarkovChain::new(m.clone()).map_err(|e| InputError(format!("invalid transition matrix: {e}")))?;
    Ok(to_gas(&chain)?)
}

fn vector(v: &Option<Vec<f64>>, n: usize, what: &str) -> Result<Option<Vector>, InputError> {
    let Some(v) = v else { return Ok(None) };
    if v.len() != n {
        return Err(InputError(format!("{what} has length {}, expected {n}", v.len())));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(InputError(format!("{what} has a non-finite entry")));
    }
    Ok(Some(Vector::from_f64(v)))
}

pub fn read_model_file(path: &Path) -> Result<ModelFile> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| InputError(format!("{}: {e}", path.display())).into())
}

pub fn load_model(path: &Path) -> Result<Loaded> {
    let file = read_model_file(path)?;
    if file.n == 0 {
        return Err(InputError("n must be positive".into()).into());
    }
    let m = file.matrix.to_matrix(file.n, file.n, "matrix")?;
    if file.kind == ModelKind::Markov {
        MarkovChain::new(m.clone()).map_err(|e| InputError(format!("invalid transition matrix: {e}")))?;
    }
    Ok(Loaded {
        kind: file.kind,
        cost: vector(&file.cost, file.n, "cost")?,
        x0: vector(&file.x0, file.n, "x0")?,
        offset: file.cost_offset.unwrap_or(0.0),
        m,
    })
}

/// Two-column CSV `t,probability`, optionally with a header line. Missing
/// times get probability zero; the support is `1..=max t`.
pub fn load_nominal(path: &Path) -> Result<Vector> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut pairs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let bad = || InputError(format!("{} line {}: expected `t,probability`", path.display(), i + 1));
        if fields.len() != 2 {
            return Err(bad().into());
        }
        match (fields[0].parse::<usize>(), fields[1].parse::<f64>()) {
            (Ok(t), Ok(p)) if t >= 1 && p.is_finite() => pairs.push((t, p)),
            _ if pairs.is_empty() && i == 0 => continue,
            _ => return Err(bad().into()),
        }
    }
    let horizon = pairs.iter().map(|&(t, _)| t).max().ok_or_else(|| InputError("nominal distribution is empty".into()))?;
    let mut p = vec![0.0; horizon];
    for (t, prob) in pairs {
        if p[t - 1] != 0.0 {
            return Err(InputError(format!("time {t} listed twice")).into());
        }
        p[t - 1] = prob;
    }
    Ok(Vector::from_f64(&p))
}
