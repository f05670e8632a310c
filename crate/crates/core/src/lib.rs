#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]
//! Robust and distributionally-robust cost estimation for linear dynamical
//! systems whose stopping time is uncertain.

pub mod bench;
pub mod config;
pub mod finite;
pub mod infinite;
pub mod linalg;
pub mod lp;
pub mod markov;
pub mod scalar;
pub mod scenarios;
pub mod wasserstein;

pub use config::Tolerances;
pub use scalar::Scalar;

/// Double-precision matrix.
pub type Matrix = linalg::DenseMatrix<f64>;
/// Double-precision vector.
pub type Vector = linalg::DenseVector<f64>;
