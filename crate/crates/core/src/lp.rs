//! Dense two-phase primal simplex with Bland's anti-cycling rule.
//!
//! Programs have the form
//!
//! ```text
//! maximise  cᵀx
//! s.t.      A x ≤ b
//!           E x = f
//!           x_j ≥ 0   for every j flagged non-negative
//! ```
//!
//! Free variables are split as `x = x⁺ − x⁻`.

use crate::config::Tolerances;
use crate::linalg::{DenseMatrix, DenseVector};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LpError {
    #[error("linear program shape mismatch: {0}")]
    Shape(String),
    #[error("non-finite coefficient in linear program")]
    NonFinite,
    #[error("pivot magnitude {pivot:e} below tolerance")]
    NumericInstability { pivot: f64 },
    #[error("simplex exceeded {0} pivots")]
    IterationLimit(usize),
}

#[derive(Debug, Clone)]
pub struct LinearProgram<T> {
    pub objective: DenseVector<T>,
    pub ineq_lhs: DenseMatrix<T>,
    pub ineq_rhs: DenseVector<T>,
    pub eq_lhs: DenseMatrix<T>,
    pub eq_rhs: DenseVector<T>,
    pub nonneg: Vec<bool>,
}

impl<T: Scalar> LinearProgram<T> {
    /// Program with the given objective, no constraints and all variables free.
    pub fn new(objective: DenseVector<T>) -> Self {
        let n = objective.dim();
        Self {
            objective,
            ineq_lhs: DenseMatrix::zeros(0, n),
            ineq_rhs: DenseVector::zeros(0),
            eq_lhs: DenseMatrix::zeros(0, n),
            eq_rhs: DenseVector::zeros(0),
            nonneg: vec![false; n],
        }
    }

    pub fn with_inequalities(mut self, lhs: DenseMatrix<T>, rhs: DenseVector<T>) -> Self {
        self.ineq_lhs = lhs;
        self.ineq_rhs = rhs;
        self
    }

    pub fn with_equalities(mut self, lhs: DenseMatrix<T>, rhs: DenseVector<T>) -> Self {
        self.eq_lhs = lhs;
        self.eq_rhs = rhs;
        self
    }

    pub fn with_nonneg(mut self, mask: Vec<bool>) -> Self {
        self.nonneg = mask;
        self
    }

    pub fn all_nonneg(mut self) -> Self {
        self.nonneg = vec![true; self.objective.dim()];
        self
    }

    pub fn num_vars(&self) -> usize {
        self.objective.dim()
    }

    fn validate(&self) -> Result<(), LpError> {
        let n = self.num_vars();
        let shape = |what: &str| Err(LpError::Shape(what.to_string()));
        if self.ineq_lhs.cols() != n || self.ineq_lhs.rows() != self.ineq_rhs.dim() {
            return shape("inequality block");
        }
        if self.eq_lhs.cols() != n || self.eq_lhs.rows() != self.eq_rhs.dim() {
            return shape("equality block");
        }
        if self.nonneg.len() != n {
            return shape("non-negativity mask");
        }
        let finite = self
            .objective
            .iter()
            .chain(self.ineq_lhs.as_slice())
            .chain(self.ineq_rhs.iter())
            .chain(self.eq_lhs.as_slice())
            .chain(self.eq_rhs.iter())
            .all(|x| x.is_finite());
        if !finite {
            return Err(LpError::NonFinite);
        }
        Ok(())
    }

    /// Largest violation of any constraint at `x`.
    pub fn max_violation(&self, x: &DenseVector<T>) -> T {
        let mut worst = T::zero();
        for i in 0..self.ineq_lhs.rows() {
            let lhs: T = crate::linalg::dot(self.ineq_lhs.row(i), x.as_slice());
            worst = worst.max(lhs - self.ineq_rhs[i]);
        }
        for i in 0..self.eq_lhs.rows() {
            let lhs: T = crate::linalg::dot(self.eq_lhs.row(i), x.as_slice());
            worst = worst.max((lhs - self.eq_rhs[i]).abs());
        }
        for (j, &nn) in self.nonneg.iter().enumerate() {
            if nn {
                worst = worst.max(-x[j]);
            }
        }
        worst
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LpSolution<T> {
    pub status: LpStatus,
    /// Optimal point; zeros unless `status` is optimal.
    pub point: DenseVector<T>,
    pub value: T,
}

pub fn lp_solve<T: Scalar>(lp: &LinearProgram<T>) -> Result<LpSolution<T>, LpError> {
    lp_solve_with(lp, &Tolerances::default())
}

pub fn lp_solve_with<T: Scalar>(lp: &LinearProgram<T>, tol: &Tolerances) -> Result<LpSolution<T>, LpError> {
    lp.validate()?;
    let mut tab = Tableau::build(lp, tol);
    let outcome = tab.run()?;
    let n = lp.num_vars();
    let failed = |status| LpSolution {
        status,
        point: DenseVector::zeros(n),
        value: T::zero(),
    };
    match outcome {
        LpStatus::Optimal => {}
        s => return Ok(failed(s)),
    }
    let cols = tab.column_values();
    let mut x = Vec::with_capacity(n);
    let mut c = 0;
    for &nn in &lp.nonneg {
        if nn {
            x.push(cols[c]);
            c += 1;
        } else {
            x.push(cols[c] - cols[c + 1]);
            c += 2;
        }
    }
    let point = DenseVector::from_vec_unchecked(x);
    let value = crate::linalg::dot(lp.objective.as_slice(), point.as_slice());
    Ok(LpSolution {
        status: LpStatus::Optimal,
        point,
        value,
    })
}

/// Dense simplex tableau `[A | b]` in canonical form for the current basis.
struct Tableau<T> {
    m: usize,
    /// Structural + slack + artificial columns.
    ncols: usize,
    first_artificial: usize,
    data: Vec<T>,
    basis: Vec<usize>,
    /// Phase-2 objective over all columns (maximised).
    cost: Vec<T>,
    pivot_tol: T,
    feas_tol: T,
    max_pivots: usize,
}

impl<T: Scalar> Tableau<T> {
    fn build(lp: &LinearProgram<T>, tol: &Tolerances) -> Self {
        let nvar_cols: usize = lp.nonneg.iter().map(|&b| if b { 1 } else { 2 }).sum();
        let mi = lp.ineq_lhs.rows();
        let me = lp.eq_lhs.rows();
        let m = mi + me;
        let nslack = mi;
        // An artificial is needed for every equality row and every
        // inequality row whose right-hand side is negative.
        let needs_art: Vec<bool> = (0..m)
            .map(|r| if r < mi { lp.ineq_rhs[r] < T::zero() } else { true })
            .collect();
        let nart = needs_art.iter().filter(|&&b| b).count();
        let first_artificial = nvar_cols + nslack;
        let ncols = first_artificial + nart;
        let w = ncols + 1;
        let mut data = vec![T::zero(); m * w];
        let mut basis = vec![0; m];
        let mut next_art = first_artificial;
        for r in 0..m {
            let (row, rhs) = if r < mi {
                (lp.ineq_lhs.row(r), lp.ineq_rhs[r])
            } else {
                (lp.eq_lhs.row(r - mi), lp.eq_rhs[r - mi])
            };
            let sign = if rhs < T::zero() { -T::one() } else { T::one() };
            let mut c = 0;
            for (j, &nn) in lp.nonneg.iter().enumerate() {
                data[r * w + c] = sign * row[j];
                if !nn {
                    data[r * w + c + 1] = -sign * row[j];
                    c += 2;
                } else {
                    c += 1;
                }
            }
            if r < mi {
                data[r * w + nvar_cols + r] = sign;
            }
            data[r * w + ncols] = sign * rhs;
            if needs_art[r] {
                data[r * w + next_art] = T::one();
                basis[r] = next_art;
                next_art += 1;
            } else {
                basis[r] = nvar_cols + r;
            }
        }
        let mut cost = vec![T::zero(); ncols];
        let mut c = 0;
        for (j, &nn) in lp.nonneg.iter().enumerate() {
            cost[c] = lp.objective[j];
            if !nn {
                cost[c + 1] = -lp.objective[j];
                c += 2;
            } else {
                c += 1;
            }
        }
        Self {
            m,
            ncols,
            first_artificial,
            data,
            basis,
            cost,
            pivot_tol: T::lit(tol.lp_pivot),
            feas_tol: T::lit(tol.lp_feasibility),
            max_pivots: 50 * (m + ncols) + 1000,
        }
    }

    #[inline]
    fn at(&self, r: usize, c: usize) -> T {
        self.data[r * (self.ncols + 1) + c]
    }

    fn rhs(&self, r: usize) -> T {
        self.at(r, self.ncols)
    }

    fn run(&mut self) -> Result<LpStatus, LpError> {
        let mut pivots = 0;
        if self.first_artificial < self.ncols {
            let phase1: Vec<T> = (0..self.ncols)
                .map(|j| if j >= self.first_artificial { -T::one() } else { T::zero() })
                .collect();
            let status = self.optimise(&phase1, self.ncols, &mut pivots)?;
            debug_assert_eq!(status, LpStatus::Optimal);
            let infeasibility: T = (0..self.m)
                .filter(|&r| self.basis[r] >= self.first_artificial)
                .map(|r| self.rhs(r))
                .sum();
            if infeasibility > self.feas_tol {
                return Ok(LpStatus::Infeasible);
            }
            self.drive_out_artificials();
        }
        let cost = self.cost.clone();
        self.optimise(&cost, self.first_artificial, &mut pivots)
    }

    /// Maximises `cost` using columns `< allowed` as entering candidates.
    fn optimise(&mut self, cost: &[T], allowed: usize, pivots: &mut usize) -> Result<LpStatus, LpError> {
        let scale = cost.iter().fold(T::one(), |a, &c| a.max(c.abs()));
        let opt_tol = T::lit(1e-9) * scale;
        loop {
            // Bland: the lowest-index column with a positive reduced profit.
            let entering = (0..allowed).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let z: T = (0..self.m).map(|r| cost[self.basis[r]] * self.at(r, j)).sum();
                cost[j] - z > opt_tol
            });
            let Some(j) = entering else {
                return Ok(LpStatus::Optimal);
            };
            let mut leave: Option<(usize, T)> = None;
            let mut tiny_positive = T::zero();
            for r in 0..self.m {
                let a = self.at(r, j);
                if a > self.pivot_tol {
                    let ratio = self.rhs(r).max(T::zero()) / a;
                    leave = match leave {
                        None => Some((r, ratio)),
                        Some((br, bratio)) => {
                            if ratio < bratio || (ratio == bratio && self.basis[r] < self.basis[br]) {
                                Some((r, ratio))
                            } else {
                                Some((br, bratio))
                            }
                        }
                    };
                } else if a > T::lit(1e-13) {
                    tiny_positive = tiny_positive.max(a);
                }
            }
            let Some((r, _)) = leave else {
                if tiny_positive > T::zero() {
                    return Err(LpError::NumericInstability {
                        pivot: tiny_positive.as_f64(),
                    });
                }
                return Ok(LpStatus::Unbounded);
            };
            *pivots += 1;
            if *pivots > self.max_pivots {
                return Err(LpError::IterationLimit(self.max_pivots));
            }
            self.pivot(r, j);
        }
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let w = self.ncols + 1;
        let p = self.data[r * w + j];
        for c in 0..w {
            self.data[r * w + c] = self.data[r * w + c] / p;
        }
        self.data[r * w + j] = T::one();
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let f = self.data[i * w + j];
            if f == T::zero() {
                continue;
            }
            for c in 0..w {
                let v = self.data[r * w + c];
                if v != T::zero() {
                    self.data[i * w + c] = self.data[i * w + c] - f * v;
                }
            }
            self.data[i * w + j] = T::zero();
        }
        self.basis[r] = j;
    }

    /// Pivots zero-level artificials out of the basis; rows where that is
    /// impossible are redundant and dropped.
    fn drive_out_artificials(&mut self) {
        let mut r = 0;
        while r < self.m {
            if self.basis[r] < self.first_artificial {
                r += 1;
                continue;
            }
            let col = (0..self.first_artificial)
                .filter(|j| !self.basis.contains(j))
                .max_by(|&a, &b| {
                    self.at(r, a)
                        .abs()
                        .partial_cmp(&self.at(r, b).abs())
                        .unwrap_or(std::cmp::Ordering::Equal)
                        .then(b.cmp(&a))
                });
            match col {
                Some(j) if self.at(r, j).abs() > self.pivot_tol => {
                    self.pivot(r, j);
                    r += 1;
                }
                _ => self.remove_row(r),
            }
        }
    }

    fn remove_row(&mut self, r: usize) {
        let w = self.ncols + 1;
        self.data.drain(r * w..(r + 1) * w);
        self.basis.remove(r);
        self.m -= 1;
    }

    fn column_values(&self) -> Vec<T> {
        let mut out = vec![T::zero(); self.first_artificial];
        for r in 0..self.m {
            let b = self.basis[r];
            if b < self.first_artificial {
                out[b] = self.rhs(r);
            }
        }
        out
    }
}
