//! Dense real linear algebra.

mod eigen;
mod jordan;
mod lu;
mod matrix;

pub use eigen::{eigenvalues, eigenvalues_with, spectral_radius};
pub use jordan::{real_jordan, real_jordan_with, ComplexBlock, Perturbation, RealJordanForm};
pub use lu::{inverse, solve};
pub(crate) use lu::Lu;
pub(crate) use matrix::dot;
pub use matrix::{DenseMatrix, DenseVector};

/// Failures of the linear-algebra layer.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinalgError {
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("{op}: incompatible shapes {left:?} and {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("{rows}x{cols} matrix needs {} entries, got {len}", rows * cols)]
    ShapeMismatch { rows: usize, cols: usize, len: usize },
    #[error("rows have different lengths")]
    RaggedRows,
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("QR iteration did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("eigenvector matrix does not reproduce the input (residual {residual:e})")]
    JordanFailure { residual: f64 },
}
