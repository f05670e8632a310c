//! LU factorisation with partial pivoting over real or complex entries.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex;

use crate::linalg::{DenseMatrix, DenseVector, LinalgError};
use crate::scalar::Scalar;

/// Field element the factorisation runs over.
pub(crate) trait Field<T: Scalar>:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn magnitude(self) -> T;
    fn from_real(x: T) -> Self;
}

impl<T: Scalar> Field<T> for T {
    fn magnitude(self) -> T {
        self.abs()
    }
    fn from_real(x: T) -> Self {
        x
    }
}

impl<T: Scalar> Field<T> for Complex<T> {
    fn magnitude(self) -> T {
        self.norm()
    }
    fn from_real(x: T) -> Self {
        Complex::new(x, T::zero())
    }
}

/// Packed LU factors of a square matrix, `P A = L U`.
pub(crate) struct Lu<T, F> {
    n: usize,
    lu: Vec<F>,
    perm: Vec<usize>,
    _scalar: std::marker::PhantomData<T>,
}

impl<T: Scalar, F: Field<T>> Lu<T, F> {
    /// Factorises a row-major `n × n` matrix.
    ///
    /// With `floor = Some(f)` a pivot smaller than `f` is replaced by `f`
    /// instead of failing, which is what inverse iteration needs.
    pub(crate) fn factor(n: usize, mut a: Vec<F>, floor: Option<T>) -> Result<Self, LinalgError> {
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pmag) = (k..n)
                .map(|i| (i, a[i * n + k].magnitude()))
                .fold((k, T::neg_infinity()), |best, cur| {
                    if cur.1 > best.1 {
                        cur
                    } else {
                        best
                    }
                });
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            if pmag == T::zero() || !pmag.is_finite() || floor.is_some_and(|f| pmag < f) {
                match floor {
                    Some(f) => a[k * n + k] = F::from_real(f),
                    None => return Err(LinalgError::Singular),
                }
            }
            let pivot = a[k * n + k];
            for i in (k + 1)..n {
                let factor = a[i * n + k] / pivot;
                a[i * n + k] = factor;
                if factor.magnitude() == T::zero() {
                    continue;
                }
                for j in (k + 1)..n {
                    let u = a[k * n + j];
                    a[i * n + j] = a[i * n + j] - factor * u;
                }
            }
        }
        Ok(Self {
            n,
            lu: a,
            perm,
            _scalar: std::marker::PhantomData,
        })
    }

    pub(crate) fn solve(&self, b: &[F]) -> Vec<F> {
        let n = self.n;
        let mut x: Vec<F> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s = s - self.lu[i * n + j] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in (i + 1)..n {
                s = s - self.lu[i * n + j] * x[j];
            }
            x[i] = s / self.lu[i * n + i];
        }
        x
    }
}

/// Solves `a x = b` for square `a`.
pub fn solve<T: Scalar>(a: &DenseMatrix<T>, b: &DenseVector<T>) -> Result<DenseVector<T>, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if a.rows() != b.dim() {
        return Err(LinalgError::DimensionMismatch {
            op: "solve",
            left: (a.rows(), a.cols()),
            right: (b.dim(), 1),
        });
    }
    let lu = Lu::<T, T>::factor(a.rows(), a.as_slice().to_vec(), None)?;
    let x = lu.solve(b.as_slice());
    DenseVector::new(x).map_err(|_| LinalgError::Singular)
}

/// Inverse of a square matrix.
pub fn inverse<T: Scalar>(a: &DenseMatrix<T>) -> Result<DenseMatrix<T>, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    let lu = Lu::<T, T>::factor(n, a.as_slice().to_vec(), None)?;
    let mut out = DenseMatrix::zeros(n, n);
    let mut e = vec![T::zero(); n];
    for j in 0..n {
        e.iter_mut().for_each(|x| *x = T::zero());
        e[j] = T::one();
        let col = lu.solve(&e);
        for (i, v) in col.into_iter().enumerate() {
            if !v.is_finite() {
                return Err(LinalgError::Singular);
            }
            out[(i, j)] = v;
        }
    }
    Ok(out)
}
