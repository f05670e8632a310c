//! Markov chains and their reduction to globally asymptotically stable
//! (GAS) systems.
//!
//! A column-stochastic `M` with a unique unit eigenvalue acts on the
//! hyperplane `H_n = {z : Σz = 0}` as a contraction. With the operators
//!
//! ```text
//! A = [1 0 … 0; 1 1 0 … 0; …; 1 … 1 0]   ((n−1)×n, lower-triangular ones)
//! B = [I_{n−1}; 0] − [0; I_{n−1}]          (n×(n−1))
//! ```
//!
//! the reduced matrix `M̄ = A M B` satisfies `B M̄ = M B` and `M̄ A = A M` on
//! `H_n`, so `v_t = A(x_t − π)` evolves as `v_{t+1} = M̄ v_t`.

use crate::config::Tolerances;
use crate::linalg::{eigenvalues_with, spectral_radius, DenseMatrix, DenseVector, LinalgError, Lu};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MarkovError {
    #[error("a chain needs at least 2 states, got {0}")]
    TooFewStates(usize),
    #[error("transition matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("column {col} sums to {sum}, expected 1")]
    ColumnSum { col: usize, sum: f64 },
    #[error("negative transition probability {value} at ({row}, {col})")]
    Negative { row: usize, col: usize, value: f64 },
    #[error("chain has {count} eigenvalues of unit modulus, expected exactly 1")]
    UnitEigenvalues { count: usize },
    #[error("stationary distribution check failed (residual {residual:e})")]
    Stationarity { residual: f64 },
    #[error("reduced system has spectral radius {radius}, expected < 1")]
    NotStable { radius: f64 },
    #[error("state sums to {sum}, expected 1")]
    NotOnSimplex { sum: f64 },
    #[error("expected a vector of length {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// The operator pair `(A, B)` for `n` states.
pub fn build_ab<T: Scalar>(n: usize) -> Result<(DenseMatrix<T>, DenseMatrix<T>), MarkovError> {
    if n < 2 {
        return Err(MarkovError::TooFewStates(n));
    }
    let mut a = DenseMatrix::zeros(n - 1, n);
    let mut b = DenseMatrix::zeros(n, n - 1);
    for i in 0..n - 1 {
        for j in 0..=i {
            a[(i, j)] = T::one();
        }
        b[(i, i)] = T::one();
        b[(i + 1, i)] = -T::one();
    }
    Ok((a, b))
}

/// Validated column-stochastic chain with its stationary distribution.
#[derive(Debug, Clone)]
pub struct MarkovChain<T> {
    transition: DenseMatrix<T>,
    stationary: DenseVector<T>,
}

impl<T: Scalar> MarkovChain<T> {
    pub fn new(transition: DenseMatrix<T>) -> Result<Self, MarkovError> {
        Self::with_tolerances(transition, &Tolerances::default())
    }

    /// Validates `transition`, clamps rounding noise to zero and computes π.
    pub fn with_tolerances(transition: DenseMatrix<T>, tol: &Tolerances) -> Result<Self, MarkovError> {
        let transition = validate_stochastic(transition, tol)?;
        let stationary = stationary_with(&transition, tol)?;
        Ok(Self {
            transition,
            stationary,
        })
    }

    pub fn n(&self) -> usize {
        self.transition.rows()
    }

    pub fn transition(&self) -> &DenseMatrix<T> {
        &self.transition
    }

    pub fn stationary(&self) -> &DenseVector<T> {
        &self.stationary
    }
}

/// Checks column sums and signs; entries with magnitude below the clamp
/// threshold become exactly zero.
pub fn validate_stochastic<T: Scalar>(m: DenseMatrix<T>, tol: &Tolerances) -> Result<DenseMatrix<T>, MarkovError> {
    if !m.is_square() {
        return Err(MarkovError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if n < 2 {
        return Err(MarkovError::TooFewStates(n));
    }
    let clamp = T::lit(tol.clamp);
    let m = m.map(|x| if x.abs() < clamp { T::zero() } else { x });
    for i in 0..n {
        for j in 0..n {
            let x = m[(i, j)];
            if x < -clamp {
                return Err(MarkovError::Negative {
                    row: i,
                    col: j,
                    value: x.as_f64(),
                });
            }
        }
    }
    for j in 0..n {
        let sum: T = (0..n).map(|i| m[(i, j)]).sum();
        if (sum - T::one()).abs() > T::lit(tol.stochastic) {
            return Err(MarkovError::ColumnSum {
                col: j,
                sum: sum.as_f64(),
            });
        }
    }
    Ok(m)
}

pub fn stationary<T: Scalar>(m: &DenseMatrix<T>) -> Result<DenseVector<T>, MarkovError> {
    stationary_with(m, &Tolerances::default())
}

/// Stationary distribution by inverse iteration at the unit eigenvalue.
pub fn stationary_with<T: Scalar>(m: &DenseMatrix<T>, tol: &Tolerances) -> Result<DenseVector<T>, MarkovError> {
    if !m.is_square() {
        return Err(MarkovError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let unit = T::one() - T::lit(tol.eigen_repeat);
    let count = eigenvalues_with(m, tol)?.iter().filter(|z| z.norm() >= unit).count();
    if count != 1 {
        return Err(MarkovError::UnitEigenvalues { count });
    }
    let mut a = m.as_slice().to_vec();
    for i in 0..n {
        a[i * n + i] = a[i * n + i] - T::one();
    }
    let floor = T::epsilon() * T::one().max(m.norm_inf());
    let lu = Lu::<T, T>::factor(n, a, Some(floor))?;
    let mut pi = vec![T::one() / T::from_usize(n).unwrap_or_else(T::one); n];
    let target = T::lit(1e-10);
    let mut residual = T::infinity();
    for _ in 0..8 {
        pi = lu.solve(&pi);
        let s: T = pi.iter().copied().sum();
        if s == T::zero() || !s.is_finite() {
            break;
        }
        let clamp = T::lit(tol.clamp);
        pi.iter_mut().for_each(|x| {
            *x = *x / s;
            if x.abs() < clamp {
                *x = T::zero()
            }
        });
        let s: T = pi.iter().copied().sum();
        pi.iter_mut().for_each(|x| *x = *x / s);
        let v = DenseVector::from_vec_unchecked(pi.clone());
        residual = m.mat_vec(&v)?.max_abs_diff(&v);
        if residual <= target {
            return Ok(v);
        }
    }
    Err(MarkovError::Stationarity {
        residual: residual.as_f64(),
    })
}

/// Reduced GAS system on `R^{n−1}`.
#[derive(Debug, Clone)]
pub struct GasSystem<T> {
    pub m_bar: DenseMatrix<T>,
    pub a_op: DenseMatrix<T>,
    pub b_op: DenseMatrix<T>,
    pub stationary: DenseVector<T>,
    /// `⟨c, π⟩` once a cost has been attached with [`GasSystem::with_cost`].
    pub cost_offset: Option<T>,
}

/// Converts a validated chain into its reduced system.
pub fn to_gas<T: Scalar>(chain: &MarkovChain<T>) -> Result<GasSystem<T>, MarkovError> {
    let n = chain.n();
    let m = chain.transition();
    let (a_op, b_op) = build_ab(n)?;
    // A·M: row i is the sum of rows 0..=i of M.
    let mut am = DenseMatrix::zeros(n - 1, n);
    let mut running = vec![T::zero(); n];
    for i in 0..n - 1 {
        for (acc, &x) in running.iter_mut().zip(m.row(i)) {
            *acc = *acc + x;
        }
        for j in 0..n {
            am[(i, j)] = running[j];
        }
    }
    // (A·M)·B: column j is column j minus column j+1.
    let mut m_bar = DenseMatrix::zeros(n - 1, n - 1);
    for i in 0..n - 1 {
        for j in 0..n - 1 {
            m_bar[(i, j)] = am[(i, j)] - am[(i, j + 1)];
        }
    }
    let radius = spectral_radius(&m_bar)?;
    if !(radius < T::one()) {
        return Err(MarkovError::NotStable {
            radius: radius.as_f64(),
        });
    }
    Ok(GasSystem {
        m_bar,
        a_op,
        b_op,
        stationary: chain.stationary().clone(),
        cost_offset: None,
    })
}

impl<T: Scalar> GasSystem<T> {
    /// Number of states of the underlying chain.
    pub fn n(&self) -> usize {
        self.stationary.dim()
    }

    /// `v = A(x − π)` for a state `x` on the extended simplex.
    pub fn project_state(&self, x: &DenseVector<T>) -> Result<DenseVector<T>, MarkovError> {
        self.check_len(x.dim(), self.n())?;
        let sum = x.sum();
        if (sum - T::one()).abs() > T::lit(Tolerances::default().simplex) {
            return Err(MarkovError::NotOnSimplex { sum: sum.as_f64() });
        }
        let mut acc = T::zero();
        Ok((0..self.n() - 1)
            .map(|i| {
                acc = acc + (x[i] - self.stationary[i]);
                acc
            })
            .collect())
    }

    /// `x = B v + π`.
    pub fn recover_state(&self, v: &DenseVector<T>) -> Result<DenseVector<T>, MarkovError> {
        let n = self.n();
        self.check_len(v.dim(), n - 1)?;
        Ok((0..n)
            .map(|i| {
                let up = if i < n - 1 { v[i] } else { T::zero() };
                let down = if i > 0 { v[i - 1] } else { T::zero() };
                up - down + self.stationary[i]
            })
            .collect())
    }

    /// `(Bᵀc, ⟨c, π⟩)`, so that `⟨c, x⟩ = ⟨Bᵀc, v⟩ + ⟨c, π⟩`.
    pub fn transfer_cost(&self, c: &DenseVector<T>) -> Result<(DenseVector<T>, T), MarkovError> {
        let n = self.n();
        self.check_len(c.dim(), n)?;
        let reduced = (0..n - 1).map(|j| c[j] - c[j + 1]).collect();
        Ok((reduced, c.dot(&self.stationary)?))
    }

    /// Records `⟨c, π⟩` and returns the reduced cost vector.
    pub fn with_cost(mut self, c: &DenseVector<T>) -> Result<(Self, DenseVector<T>), MarkovError> {
        let (reduced, offset) = self.transfer_cost(c)?;
        self.cost_offset = Some(offset);
        Ok((self, reduced))
    }

    fn check_len(&self, got: usize, expected: usize) -> Result<(), MarkovError> {
        if got != expected {
            return Err(MarkovError::Dimension { expected, got });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = DenseMatrix<f64>;
    type V = DenseVector<f64>;

    fn two_state() -> MarkovChain<f64> {
        MarkovChain::new(M::from_f64_rows(&[&[0.9, 0.2], &[0.1, 0.8]])).unwrap()
    }

    #[test]
    fn ab_small_cases() {
        let (a, b) = build_ab::<f64>(2).unwrap();
        assert_eq!(a, M::from_f64_rows(&[&[1.0, 0.0]]));
        assert_eq!(b, M::from_f64_rows(&[&[1.0], &[-1.0]]));
        let (a, b) = build_ab::<f64>(3).unwrap();
        assert_eq!(a, M::from_f64_rows(&[&[1.0, 0.0, 0.0], &[1.0, 1.0, 0.0]]));
        assert_eq!(b, M::from_f64_rows(&[&[1.0, 0.0], &[-1.0, 1.0], &[0.0, -1.0]]));
        for n in 2..12 {
            let (a, b) = build_ab::<f64>(n).unwrap();
            assert_eq!(a.matmul(&b).unwrap(), M::identity(n - 1));
        }
        assert!(matches!(build_ab::<f64>(1), Err(MarkovError::TooFewStates(1))));
    }

    #[test]
    fn stationary_examples() {
        let c = two_state();
        assert!((c.stationary()[0] - 2.0 / 3.0).abs() < 1e-12);
        assert!((c.stationary()[1] - 1.0 / 3.0).abs() < 1e-12);
        let sym = M::from_f64_rows(&[&[0.5, 0.25, 0.25], &[0.25, 0.5, 0.25], &[0.25, 0.25, 0.5]]);
        let pi = stationary(&sym).unwrap();
        assert!(pi.iter().all(|p| (p - 1.0 / 3.0).abs() < 1e-12));
        let sink = M::from_f64_rows(&[&[1.0, 0.3, 0.0], &[0.0, 0.7, 0.3], &[0.0, 0.0, 0.7]]);
        let pi = stationary(&sink).unwrap();
        assert_eq!(pi.as_slice(), &[1.0, 0.0, 0.0]);
    }

    #[test]
    fn identity_rejected() {
        assert!(matches!(
            MarkovChain::new(M::identity(2)),
            Err(MarkovError::UnitEigenvalues { count: 2 })
        ));
    }

    #[test]
    fn bad_columns_rejected() {
        let m = M::from_f64_rows(&[&[0.9, 0.2], &[0.2, 0.8]]);
        assert!(matches!(MarkovChain::new(m), Err(MarkovError::ColumnSum { col: 0, .. })));
        let m = M::from_f64_rows(&[&[1.1, 0.2], &[-0.1, 0.8]]);
        assert!(matches!(MarkovChain::new(m), Err(MarkovError::Negative { row: 1, col: 0, .. })));
    }

    #[test]
    fn two_state_reduction() {
        let g = to_gas(&two_state()).unwrap();
        assert!((g.m_bar[(0, 0)] - 0.7).abs() < 1e-15);
        let v = g.project_state(&V::from_f64(&[1.0, 0.0])).unwrap();
        assert!((v[0] - 1.0 / 3.0).abs() < 1e-12);
        let x = g.recover_state(&V::from_f64(&[1.0 / 3.0])).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-12 && x[1].abs() < 1e-12);
        let pi = g.stationary.clone();
        assert!(g.project_state(&pi).unwrap().norm_inf() < 1e-15);
        assert!(g.recover_state(&V::zeros(1)).unwrap().max_abs_diff(&pi) < 1e-15);
    }

    #[test]
    fn cost_transfer() {
        let g = to_gas(&two_state()).unwrap();
        let (cb, off) = g.transfer_cost(&V::filled(2, 1.0)).unwrap();
        assert_eq!(cb.as_slice(), &[0.0]);
        assert!((off - 1.0).abs() < 1e-12);
        let (g, cb) = g.with_cost(&V::from_f64(&[1.0, 0.0])).unwrap();
        assert!((cb[0] - 1.0).abs() < 1e-15);
        assert!((g.cost_offset.unwrap() - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn off_simplex_rejected() {
        let g = to_gas(&two_state()).unwrap();
        assert!(matches!(
            g.project_state(&V::from_f64(&[1.0, 0.5])),
            Err(MarkovError::NotOnSimplex { .. })
        ));
    }
}
