//! Cost sequences `g(t) = ⟨c, Mᵗ x₀⟩` over a finite horizon.

use crate::linalg::{dot, DenseMatrix, DenseVector, LinalgError};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FiniteError {
    #[error("horizon must be at least 1")]
    ZeroHorizon,
    #[error("empty cost sequence")]
    Empty,
    #[error("dimension mismatch: matrix {matrix}x{matrix}, x0 {x0}, c {c}")]
    Dimension { matrix: usize, x0: usize, c: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `values[t − 1] = ⟨c, Mᵗ x₀⟩` for `t = 1..=T`.
#[derive(Debug, Clone, PartialEq)]
pub struct CostSequence<T> {
    values: Vec<T>,
}

impl<T: Scalar> CostSequence<T> {
    pub fn new(values: Vec<T>) -> Result<Self, FiniteError> {
        if values.is_empty() {
            return Err(FiniteError::Empty);
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(FiniteError::Linalg(LinalgError::NonFinite { row: i, col: 0 }));
        }
        Ok(Self { values })
    }

    pub fn horizon(&self) -> usize {
        self.values.len()
    }

    /// `g(t)` for `1 ≤ t ≤ T`.
    pub fn at(&self, t: usize) -> T {
        self.values[t - 1]
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// `Σ_t p_t g(t)`.
    pub fn expectation(&self, p: &DenseVector<T>) -> T {
        dot(&self.values, p.as_slice())
    }
}

fn check_dims<T: Scalar>(
    m: &DenseMatrix<T>,
    x0: &DenseVector<T>,
    c: &DenseVector<T>,
    horizon: usize,
) -> Result<(), FiniteError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        }
        .into());
    }
    if x0.dim() != m.rows() || c.dim() != m.rows() {
        return Err(FiniteError::Dimension {
            matrix: m.rows(),
            x0: x0.dim(),
            c: c.dim(),
        });
    }
    if horizon == 0 {
        return Err(FiniteError::ZeroHorizon);
    }
    Ok(())
}

/// Sequential evaluation, one matrix-vector product per step.
pub fn cost_sequence_naive<T: Scalar>(
    m: &DenseMatrix<T>,
    x0: &DenseVector<T>,
    c: &DenseVector<T>,
    horizon: usize,
) -> Result<CostSequence<T>, FiniteError> {
    check_dims(m, x0, c, horizon)?;
    let mut x = x0.clone();
    let mut values = Vec::with_capacity(horizon);
    for _ in 0..horizon {
        x = m.mat_vec(&x)?;
        values.push(dot(c.as_slice(), x.as_slice()));
    }
    CostSequence::new(values)
}

/// Small-and-big-strides evaluation.
///
/// With `B = ⌊√T⌋` the big strides `M^{iB} x₀` (`i ≤ B`) and small strides
/// `(Mᵀ)^j c` (`j < B`) give `g(t) = ⟨(Mᵀ)^{t mod B} c, M^{⌊t/B⌋B} x₀⟩` for
/// `t ≤ B²`; the remaining `t ∈ (B², T]` are stepped from `M^{B²} x₀`.
pub fn cost_sequence_sabs<T: Scalar>(
    m: &DenseMatrix<T>,
    x0: &DenseVector<T>,
    c: &DenseVector<T>,
    horizon: usize,
) -> Result<CostSequence<T>, FiniteError> {
    check_dims(m, x0, c, horizon)?;
    if horizon < 4 {
        return cost_sequence_naive(m, x0, c, horizon);
    }
    let b = (horizon as f64).sqrt().floor() as usize;
    let b = if (b + 1) * (b + 1) <= horizon { b + 1 } else if b * b > horizon { b - 1 } else { b };
    let m_b = m.pow(b as u64)?;
    let mut big = Vec::with_capacity(b + 1);
    big.push(x0.clone());
    for i in 0..b {
        big.push(m_b.mat_vec(&big[i])?);
    }
    let mut small = Vec::with_capacity(b);
    small.push(c.clone());
    for j in 1..b {
        small.push(m.transpose_vec(&small[j - 1])?);
    }
    let mut values = Vec::with_capacity(horizon);
    for t in 1..=b * b {
        values.push(dot(small[t % b].as_slice(), big[t / b].as_slice()));
    }
    let mut x = big[b].clone();
    for _ in b * b..horizon {
        x = m.mat_vec(&x)?;
        values.push(dot(c.as_slice(), x.as_slice()));
    }
    CostSequence::new(values)
}

/// Worst single stopping time: `(t*, g(t*))`, smallest `t` among ties.
pub fn rce_finite<T: Scalar>(seq: &CostSequence<T>) -> Result<(usize, T), FiniteError> {
    argmax_first(seq.values().iter().copied()).ok_or(FiniteError::Empty)
}

/// 1-based index and value of the first maximum.
pub(crate) fn argmax_first<T: Scalar>(values: impl IntoIterator<Item = T>) -> Option<(usize, T)> {
    let mut best: Option<(usize, T)> = None;
    for (i, v) in values.into_iter().enumerate() {
        if best.is_none_or(|(_, b)| v > b) {
            best = Some((i + 1, v));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = DenseMatrix<f64>;
    type V = DenseVector<f64>;

    fn both(m: &M, x0: &V, c: &V, t: usize) -> (Vec<f64>, Vec<f64>) {
        (
            cost_sequence_naive(m, x0, c, t).unwrap().values().to_vec(),
            cost_sequence_sabs(m, x0, c, t).unwrap().values().to_vec(),
        )
    }

    #[test]
    fn scalar_geometric() {
        let m = M::from_f64_rows(&[&[0.5]]);
        let one = V::from_f64(&[1.0]);
        let (n, s) = both(&m, &one, &one, 3);
        assert_eq!(n, vec![0.5, 0.25, 0.125]);
        assert_eq!(n, s);
    }

    #[test]
    fn identity_is_constant() {
        let x0 = V::from_f64(&[1.0, 2.0]);
        let c = V::from_f64(&[3.0, -1.0]);
        let (n, s) = both(&M::identity(2), &x0, &c, 4);
        assert_eq!(n, vec![1.0; 4]);
        assert_eq!(s, vec![1.0; 4]);
    }

    #[test]
    fn two_state_chain() {
        let m = M::from_f64_rows(&[&[0.9, 0.2], &[0.1, 0.8]]);
        let (n, s) = both(&m, &V::from_f64(&[0.0, 1.0]), &V::from_f64(&[1.0, 0.0]), 2);
        assert!((n[0] - 0.2).abs() < 1e-15 && (n[1] - 0.34).abs() < 1e-15);
        assert_eq!(n, s);
    }

    #[test]
    fn tail_boundary() {
        let m = M::from_f64_rows(&[&[0.5, 0.3], &[-0.2, 0.4]]);
        let x0 = V::from_f64(&[1.0, -1.0]);
        let c = V::from_f64(&[0.7, 0.2]);
        for t in 1..40 {
            let (n, s) = both(&m, &x0, &c, t);
            for (a, b) in n.iter().zip(&s) {
                assert!((a - b).abs() < 1e-12, "T={t}");
            }
        }
    }

    #[test]
    fn rce_examples() {
        let s = CostSequence::new(vec![0.5, 0.25, 0.125]).unwrap();
        assert_eq!(rce_finite(&s).unwrap(), (1, 0.5));
        let s = CostSequence::new(vec![0.4, 1.06, 0.604]).unwrap();
        assert_eq!(rce_finite(&s).unwrap(), (2, 1.06));
        let s = CostSequence::new(vec![1.0, 1.0, 1.0]).unwrap();
        assert_eq!(rce_finite(&s).unwrap(), (1, 1.0));
        assert!(matches!(CostSequence::<f64>::new(vec![]), Err(FiniteError::Empty)));
    }

    #[test]
    fn errors() {
        let m = M::identity(2);
        let v = V::zeros(2);
        assert!(matches!(cost_sequence_naive(&m, &v, &v, 0), Err(FiniteError::ZeroHorizon)));
        assert!(matches!(
            cost_sequence_sabs(&m, &V::zeros(3), &v, 5),
            Err(FiniteError::Dimension { .. })
        ));
    }
}
