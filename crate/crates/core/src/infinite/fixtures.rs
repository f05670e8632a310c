//! Instance generators whose first positive cost is provably late.

use super::InfiniteError;
use crate::linalg::{DenseMatrix, DenseVector};

/// `M = ½·Rot(θ_k)`, `c = e₁`, `x = (cos α_k, sin α_k)` (radians).
#[derive(Debug, Clone)]
pub struct AdversarialInstance {
    pub m: DenseMatrix<f64>,
    pub c: DenseVector<f64>,
    pub x: DenseVector<f64>,
    pub alpha: f64,
    pub theta: f64,
}

/// Instance with `g(t) < 0` for `t ≤ k` and `g(9k) > 0`.
///
/// `θ_k = 2/(4k+1)` and `α_k = Σ_{i ≤ k} 4/((4i−1)(4i−3))`, so that
/// `α_k + tθ_k` stays inside `(π/2, 3π/2)` for the first k steps.
pub fn adversarial_instance(k: u64) -> Result<AdversarialInstance, InfiniteError> {
    if k == 0 {
        return Err(InfiniteError::Invalid("k must be positive".into()));
    }
    let theta = 2.0 / (4.0 * k as f64 + 1.0);
    let alpha: f64 = (1..=k)
        .map(|i| {
            let i = i as f64;
            4.0 / ((4.0 * i - 1.0) * (4.0 * i - 3.0))
        })
        .sum();
    let (sin, cos) = theta.sin_cos();
    let m = DenseMatrix::from_f64_rows(&[&[0.5 * cos, -0.5 * sin], &[0.5 * sin, 0.5 * cos]]);
    Ok(AdversarialInstance {
        m,
        c: DenseVector::from_f64(&[1.0, 0.0]),
        x: DenseVector::from_f64(&[alpha.cos(), alpha.sin()]),
        alpha,
        theta,
    })
}

/// Reduction from directed reachability.
#[derive(Debug, Clone)]
pub struct DircycInstance {
    pub m: DenseMatrix<f64>,
    pub x: DenseVector<f64>,
    pub c: DenseVector<f64>,
    pub alpha: f64,
    /// Scaling `1 + max column sum` that makes `M = A/r` stable.
    pub r: f64,
}

/// `⟨c, Mᵗ x⟩ = −(Aᵗ)₁ₙ / rᵗ`, which is negative exactly when a walk of
/// length t leads from node 1 to node n.
pub fn dircyc_instance(adjacency: &DenseMatrix<f64>) -> Result<DircycInstance, InfiniteError> {
    let n = adjacency.rows();
    if n == 0 || !adjacency.is_square() {
        return Err(InfiniteError::Invalid("adjacency matrix must be square and non-empty".into()));
    }
    if let Some(v) = adjacency.as_slice().iter().find(|&&v| v != 0.0 && v != 1.0) {
        return Err(InfiniteError::Invalid(format!("adjacency entry {v} is not 0 or 1")));
    }
    let max_col = (0..n).map(|j| adjacency.column(j).sum()).fold(0.0, f64::max);
    let r = 1.0 + max_col;
    let mut c = DenseVector::zeros(n);
    c[0] = -1.0;
    Ok(DircycInstance {
        m: adjacency.scale(1.0 / r),
        x: DenseVector::basis(n, n - 1),
        c,
        alpha: 0.0,
        r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::cost_sequence_naive;

    #[test]
    fn adversarial_first_instance() {
        let inst = adversarial_instance(1).unwrap();
        assert!((inst.alpha - 4.0 / 3.0).abs() < 1e-15 && (inst.theta - 0.4).abs() < 1e-15);
        let g = cost_sequence_naive(&inst.m, &inst.x, &inst.c, 9).unwrap();
        assert!(g.at(1) < 0.0);
        assert!(g.at(9) > 0.0);
    }

    #[test]
    fn adversarial_stays_negative() {
        for k in [1, 2, 5, 10, 20] {
            let inst = adversarial_instance(k).unwrap();
            let g = cost_sequence_naive(&inst.m, &inst.x, &inst.c, 9 * k as usize).unwrap();
            assert!(g.values()[..k as usize].iter().all(|&v| v < 0.0), "k={k}");
            assert!(g.at(9 * k as usize) > 0.0, "k={k}");
        }
    }

    #[test]
    fn path_graph() {
        let a = DenseMatrix::from_f64_rows(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0], &[0.0, 0.0, 0.0]]);
        let inst = dircyc_instance(&a).unwrap();
        assert_eq!(inst.r, 2.0);
        let g = cost_sequence_naive(&inst.m, &inst.x, &inst.c, 3).unwrap();
        assert_eq!(g.at(1), 0.0);
        assert_eq!(g.at(2), -0.25);
        assert_eq!(g.at(3), 0.0);
    }

    #[test]
    fn empty_graph_and_bad_entries() {
        let inst = dircyc_instance(&DenseMatrix::zeros(3, 3)).unwrap();
        let g = cost_sequence_naive(&inst.m, &inst.x, &inst.c, 5).unwrap();
        assert!(g.values().iter().all(|&v| v == 0.0));
        let bad = DenseMatrix::from_f64_rows(&[&[0.0, 2.0], &[0.0, 0.0]]);
        assert!(dircyc_instance(&bad).is_err());
    }
}
