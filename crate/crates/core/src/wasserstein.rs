//! Wasserstein-1 geometry on the horizon simplex and finite-support DRCE.
//!
//! The ambiguity set around a nominal horizon distribution `p̂` is
//! `{q ∈ Δ_T : W₁(p̂, q) ≤ ξ}`. On the line distance `d(i, j) = |i − j|` the
//! unit ball of the transport norm in `H_T` is the polytope spanned by the
//! `2(T − 1)` points `±(e_i − e_{i+1})`.

use crate::config::Tolerances;
use crate::finite::{cost_sequence_sabs, CostSequence, FiniteError};
use crate::linalg::{DenseMatrix, DenseVector};
use crate::lp::{lp_solve_with, LinearProgram, LpError, LpStatus};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WassersteinError {
    #[error("vector must sum to zero, sums to {sum}")]
    NotBalanced { sum: f64 },
    #[error("not a probability vector: {0}")]
    NotDistribution(String),
    #[error("radius must be a finite non-negative number, got {0}")]
    BadRadius(f64),
    #[error("support sizes differ: {left} vs {right}")]
    Dimension { left: usize, right: usize },
    #[error("invalid ground distance: {0}")]
    InvalidDistance(String),
    #[error("support size must be at least 2, got {0}")]
    TooSmall(usize),
    #[error("at least one initial-state vertex is required")]
    NoVertices,
    #[error("linear program ended as {0:?}")]
    LpStatus(LpStatus),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Finite(#[from] FiniteError),
}

/// Ground distance on `{1, …, T}`.
#[derive(Debug, Clone, PartialEq)]
pub enum GroundDistance<T> {
    /// `d(i, j) = |i − j|`.
    Line,
    /// Explicit metric; build with [`GroundDistance::explicit`].
    Matrix(DenseMatrix<T>),
}

impl<T: Scalar> GroundDistance<T> {
    /// Validates zero diagonal, symmetry, positivity and the triangle inequality.
    pub fn explicit(d: DenseMatrix<T>) -> Result<Self, WassersteinError> {
        let bad = |s: String| Err(WassersteinError::InvalidDistance(s));
        if !d.is_square() {
            return bad(format!("{}x{} matrix", d.rows(), d.cols()));
        }
        let n = d.rows();
        let slack = T::lit(1e-12);
        for i in 0..n {
            if d[(i, i)] != T::zero() {
                return bad(format!("d({i},{i}) is not zero"));
            }
            for j in 0..n {
                if i != j && !(d[(i, j)] > T::zero()) {
                    return bad(format!("d({i},{j}) is not positive"));
                }
                if (d[(i, j)] - d[(j, i)]).abs() > slack {
                    return bad(format!("d({i},{j}) != d({j},{i})"));
                }
                for k in 0..n {
                    if d[(i, j)] + d[(j, k)] < d[(i, k)] - slack {
                        return bad(format!("triangle inequality fails for ({i},{j},{k})"));
                    }
                }
            }
        }
        Ok(Self::Matrix(d))
    }

    /// Distance between 0-based support points `i` and `j`.
    pub fn d(&self, i: usize, j: usize) -> T {
        match self {
            Self::Line => T::from_usize(i.abs_diff(j)).unwrap_or_else(T::infinity),
            Self::Matrix(m) => m[(i, j)],
        }
    }

    fn check_size(&self, t: usize) -> Result<(), WassersteinError> {
        match self {
            Self::Matrix(m) if m.rows() != t => Err(WassersteinError::Dimension {
                left: m.rows(),
                right: t,
            }),
            _ => Ok(()),
        }
    }
}

/// Transport norm `max μᵀx` over `x ∈ H_T` with `x_i − x_j ≤ d_ij`.
pub fn w_norm<T: Scalar>(mu: &DenseVector<T>, d: &GroundDistance<T>) -> Result<T, WassersteinError> {
    w_norm_with(mu, d, &Tolerances::default())
}

pub fn w_norm_with<T: Scalar>(
    mu: &DenseVector<T>,
    d: &GroundDistance<T>,
    tol: &Tolerances,
) -> Result<T, WassersteinError> {
    let t = mu.dim();
    d.check_size(t)?;
    let sum = mu.sum();
    if sum.abs() > T::lit(tol.simplex) {
        return Err(WassersteinError::NotBalanced { sum: sum.as_f64() });
    }
    if t <= 1 {
        return Ok(T::zero());
    }
    // On the line, the adjacent constraints imply all others.
    let pairs: Vec<(usize, usize)> = match d {
        GroundDistance::Line => (0..t - 1).flat_map(|i| [(i, i + 1), (i + 1, i)]).collect(),
        GroundDistance::Matrix(_) => (0..t)
            .flat_map(|i| (0..t).filter(move |&j| j != i).map(move |j| (i, j)))
            .collect(),
    };
    let mut a = DenseMatrix::zeros(pairs.len(), t);
    let mut b = DenseVector::zeros(pairs.len());
    for (r, &(i, j)) in pairs.iter().enumerate() {
        a[(r, i)] = T::one();
        a[(r, j)] = -T::one();
        b[r] = d.d(i, j);
    }
    let lp = LinearProgram::new(mu.clone())
        .with_inequalities(a, b)
        .with_equalities(DenseMatrix::from_vec_unchecked(1, t, vec![T::one(); t]), DenseVector::zeros(1));
    let sol = lp_solve_with(&lp, tol)?;
    match sol.status {
        LpStatus::Optimal => Ok(sol.value.max(T::zero())),
        s => Err(WassersteinError::LpStatus(s)),
    }
}

/// `W₁(p, q) = ‖p − q‖_W`.
pub fn w1_distance<T: Scalar>(
    p: &DenseVector<T>,
    q: &DenseVector<T>,
    d: &GroundDistance<T>,
) -> Result<T, WassersteinError> {
    let tol = Tolerances::default();
    check_distribution(p, &tol)?;
    check_distribution(q, &tol)?;
    if p.dim() != q.dim() {
        return Err(WassersteinError::Dimension {
            left: p.dim(),
            right: q.dim(),
        });
    }
    let mu = p.sub(q).expect("equal lengths");
    w_norm_with(&mu, d, &tol)
}

fn check_distribution<T: Scalar>(p: &DenseVector<T>, tol: &Tolerances) -> Result<(), WassersteinError> {
    if p.is_empty() {
        return Err(WassersteinError::NotDistribution("empty".into()));
    }
    if let Some(i) = p.iter().position(|&x| x < -T::lit(tol.clamp)) {
        return Err(WassersteinError::NotDistribution(format!("entry {} is negative", i + 1)));
    }
    let sum = p.sum();
    if (sum - T::one()).abs() > T::lit(tol.simplex) {
        return Err(WassersteinError::NotDistribution(format!("sums to {sum}")));
    }
    Ok(())
}

/// The `2(T − 1)` extreme points of the unit ball on the line distance, in
/// the order `+(e_1 − e_2), −(e_1 − e_2), +(e_2 − e_3), …`.
pub fn unit_ball_vertices<T: Scalar>(t: usize) -> Result<Vec<DenseVector<T>>, WassersteinError> {
    if t < 2 {
        return Err(WassersteinError::TooSmall(t));
    }
    let mut out = Vec::with_capacity(2 * (t - 1));
    for i in 0..t - 1 {
        let mut v = DenseVector::zeros(t);
        v[i] = T::one();
        v[i + 1] = -T::one();
        out.push(v.clone());
        out.push(v.scale(-T::one()));
    }
    Ok(out)
}

/// Nominal distribution, radius and ground distance.
#[derive(Debug, Clone)]
pub struct AmbiguitySet<T> {
    nominal: DenseVector<T>,
    radius: T,
    distance: GroundDistance<T>,
}

impl<T: Scalar> AmbiguitySet<T> {
    pub fn new(nominal: DenseVector<T>, radius: T, distance: GroundDistance<T>) -> Result<Self, WassersteinError> {
        let tol = Tolerances::default();
        check_distribution(&nominal, &tol)?;
        if !(radius >= T::zero()) || !radius.is_finite() {
            return Err(WassersteinError::BadRadius(radius.as_f64()));
        }
        distance.check_size(nominal.dim())?;
        let clamp = T::lit(tol.clamp);
        let nominal = nominal.iter().map(|&x| if x.abs() < clamp { T::zero() } else { x }).collect();
        Ok(Self {
            nominal,
            radius,
            distance,
        })
    }

    /// Line-distance ball of radius `radius` around `nominal`.
    pub fn line(nominal: DenseVector<T>, radius: T) -> Result<Self, WassersteinError> {
        Self::new(nominal, radius, GroundDistance::Line)
    }

    pub fn nominal(&self) -> &DenseVector<T> {
        &self.nominal
    }

    pub fn radius(&self) -> T {
        self.radius
    }

    pub fn distance(&self) -> &GroundDistance<T> {
        &self.distance
    }

    pub fn support(&self) -> usize {
        self.nominal.dim()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DrceCase {
    /// Every shifted ball vertex stays in the simplex; the optimum is one of them.
    VertexEnumeration,
    /// The ball is clipped by the simplex; solved as a linear program.
    Lp,
}

#[derive(Debug, Clone)]
pub struct DrceSolution<T> {
    pub value: T,
    pub worst_q: DenseVector<T>,
    pub case_used: DrceCase,
}

/// Worst expected cost over the ambiguity set.
pub fn drce_finite<T: Scalar>(seq: &CostSequence<T>, amb: &AmbiguitySet<T>) -> Result<DrceSolution<T>, WassersteinError> {
    drce_finite_with(seq, amb, &Tolerances::default())
}

pub fn drce_finite_with<T: Scalar>(
    seq: &CostSequence<T>,
    amb: &AmbiguitySet<T>,
    tol: &Tolerances,
) -> Result<DrceSolution<T>, WassersteinError> {
    let t = amb.support();
    if seq.horizon() != t {
        return Err(WassersteinError::Dimension {
            left: seq.horizon(),
            right: t,
        });
    }
    let p = amb.nominal();
    let xi = amb.radius();
    let nominal_value = seq.expectation(p);
    if xi == T::zero() || t == 1 {
        return Ok(DrceSolution {
            value: nominal_value,
            worst_q: p.clone(),
            case_used: DrceCase::VertexEnumeration,
        });
    }
    if let GroundDistance::Line = amb.distance() {
        let margin = T::lit(tol.vertex_feasibility);
        if (0..t - 1).all(|i| p[i].min(p[i + 1]) - xi > margin) {
            return Ok(vertex_enumeration(seq, p, xi, nominal_value));
        }
    }
    drce_finite_lp(seq, amb, tol)
}

/// Worst expected cost solved as a linear program over the ball's vertex
/// directions, regardless of whether the vertex shortcut would apply.
pub fn drce_finite_lp<T: Scalar>(
    seq: &CostSequence<T>,
    amb: &AmbiguitySet<T>,
    tol: &Tolerances,
) -> Result<DrceSolution<T>, WassersteinError> {
    let t = amb.support();
    if seq.horizon() != t {
        return Err(WassersteinError::Dimension {
            left: seq.horizon(),
            right: t,
        });
    }
    let directions = match amb.distance() {
        GroundDistance::Line if t == 1 => Vec::new(),
        GroundDistance::Line => unit_ball_vertices(t)?,
        GroundDistance::Matrix(_) => {
            let d = amb.distance();
            let mut dirs = Vec::with_capacity(t * (t - 1));
            for i in 0..t {
                for j in 0..t {
                    if i != j {
                        let mut v = DenseVector::zeros(t);
                        v[i] = T::one() / d.d(i, j);
                        v[j] = -T::one() / d.d(i, j);
                        dirs.push(v);
                    }
                }
            }
            dirs
        }
    };
    if directions.is_empty() {
        let p = amb.nominal();
        return Ok(DrceSolution {
            value: seq.expectation(p),
            worst_q: p.clone(),
            case_used: DrceCase::Lp,
        });
    }
    drce_lp(seq, amb.nominal(), amb.radius(), &directions, tol)
}

fn vertex_enumeration<T: Scalar>(seq: &CostSequence<T>, p: &DenseVector<T>, xi: T, nominal_value: T) -> DrceSolution<T> {
    let g = seq.values();
    let mut best: Option<(usize, T, T)> = None;
    for i in 0..g.len() - 1 {
        // q = p̂ ± ξ(e_i − e_{i+1}) shifts the objective by ±ξ(g_i − g_{i+1}).
        let delta = xi * (g[i] - g[i + 1]);
        for sign in [T::one(), -T::one()] {
            let value = nominal_value + sign * delta;
            if best.is_none_or(|(_, _, b)| value > b) {
                best = Some((i, sign, value));
            }
        }
    }
    let mut worst_q = p.clone();
    let value = match best {
        Some((i, sign, value)) if value >= nominal_value => {
            worst_q[i] = worst_q[i] + sign * xi;
            worst_q[i + 1] = worst_q[i + 1] - sign * xi;
            value
        }
        _ => nominal_value,
    };
    DrceSolution {
        value,
        worst_q,
        case_used: DrceCase::VertexEnumeration,
    }
}

/// `max Σ q_t g(t)` over `q ≥ 0`, `λ ≥ 0`, `Σλ = 1`, `q = p̂ + Σ_k λ_k ξ v_k`.
fn drce_lp<T: Scalar>(
    seq: &CostSequence<T>,
    p: &DenseVector<T>,
    xi: T,
    directions: &[DenseVector<T>],
    tol: &Tolerances,
) -> Result<DrceSolution<T>, WassersteinError> {
    let t = p.dim();
    let k = directions.len();
    let nvar = t + k;
    let mut objective = DenseVector::zeros(nvar);
    for (s, &g) in seq.values().iter().enumerate() {
        objective[s] = g;
    }
    let mut e = DenseMatrix::zeros(t + 1, nvar);
    let mut f = DenseVector::zeros(t + 1);
    for s in 0..t {
        e[(s, s)] = T::one();
        for (kk, v) in directions.iter().enumerate() {
            e[(s, t + kk)] = -xi * v[s];
        }
        f[s] = p[s];
    }
    for kk in 0..k {
        e[(t, t + kk)] = T::one();
    }
    f[t] = T::one();
    let lp = LinearProgram::new(objective).with_equalities(e, f).all_nonneg();
    let sol = lp_solve_with(&lp, tol)?;
    if sol.status != LpStatus::Optimal {
        return Err(WassersteinError::LpStatus(sol.status));
    }
    let worst_q: DenseVector<T> = sol.point.iter().take(t).copied().collect();
    Ok(DrceSolution {
        value: seq.expectation(&worst_q),
        worst_q,
        case_used: DrceCase::Lp,
    })
}

/// Result of DRCE under a polytope of initial states.
#[derive(Debug, Clone)]
pub struct InitialUncertaintyResult<T> {
    pub value: T,
    /// 0-based index of the maximising vertex (smallest among ties).
    pub best_vertex: usize,
    pub solution: DrceSolution<T>,
}

/// Maximises DRCE over initial states `x̂₀ + u_i`; the objective is convex
/// in the initial state, so the polytope's vertices suffice.
pub fn drce_with_initial_uncertainty<T: Scalar>(
    m: &DenseMatrix<T>,
    x_hat0: &DenseVector<T>,
    vertices: &[DenseVector<T>],
    c: &DenseVector<T>,
    amb: &AmbiguitySet<T>,
) -> Result<InitialUncertaintyResult<T>, WassersteinError> {
    if vertices.is_empty() {
        return Err(WassersteinError::NoVertices);
    }
    let mut best: Option<InitialUncertaintyResult<T>> = None;
    for (i, u) in vertices.iter().enumerate() {
        let x0 = x_hat0.add(u).map_err(|_| WassersteinError::Dimension {
            left: x_hat0.dim(),
            right: u.dim(),
        })?;
        let seq = cost_sequence_sabs(m, &x0, c, amb.support())?;
        let sol = drce_finite(&seq, amb)?;
        if best.as_ref().is_none_or(|b| sol.value > b.value) {
            best = Some(InitialUncertaintyResult {
                value: sol.value,
                best_vertex: i,
                solution: sol,
            });
        }
    }
    Ok(best.expect("non-empty vertex list"))
}

#[cfg(test)]
mod tests {
    use super::*;

    type V = DenseVector<f64>;

    fn seq(v: &[f64]) -> CostSequence<f64> {
        CostSequence::new(v.to_vec()).unwrap()
    }

    #[test]
    fn norm_examples() {
        let line = GroundDistance::Line;
        assert_eq!(w_norm(&V::zeros(3), &line).unwrap(), 0.0);
        assert!((w_norm(&V::from_f64(&[1.0, -1.0]), &line).unwrap() - 1.0).abs() < 1e-12);
        assert!((w_norm(&V::from_f64(&[1.0, 0.0, -1.0]), &line).unwrap() - 2.0).abs() < 1e-12);
        assert!(matches!(
            w_norm(&V::from_f64(&[1.0, 0.0]), &line),
            Err(WassersteinError::NotBalanced { .. })
        ));
    }

    #[test]
    fn distance_examples() {
        let line = GroundDistance::Line;
        let p = V::from_f64(&[1.0, 0.0, 0.0]);
        assert_eq!(w1_distance(&p, &p, &line).unwrap(), 0.0);
        let q = V::from_f64(&[0.0, 0.0, 1.0]);
        assert!((w1_distance(&p, &q, &line).unwrap() - 2.0).abs() < 1e-12);
        let a = V::from_f64(&[0.5, 0.5, 0.0]);
        let b = V::from_f64(&[0.0, 1.0, 0.0]);
        assert!((w1_distance(&a, &b, &line).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn explicit_distance_matches_line() {
        let d = DenseMatrix::<f64>::from_f64_rows(&[&[0.0, 1.0, 2.0], &[1.0, 0.0, 1.0], &[2.0, 1.0, 0.0]]);
        let d = GroundDistance::explicit(d).unwrap();
        let mu = V::from_f64(&[0.2, 0.3, -0.5]);
        let a = w_norm(&mu, &d).unwrap();
        let b = w_norm(&mu, &GroundDistance::Line).unwrap();
        assert!((a - b).abs() < 1e-12);
        let bad = DenseMatrix::<f64>::from_f64_rows(&[&[0.0, 1.0, 5.0], &[1.0, 0.0, 1.0], &[5.0, 1.0, 0.0]]);
        assert!(GroundDistance::explicit(bad).is_err());
    }

    #[test]
    fn vertices() {
        let v = unit_ball_vertices::<f64>(2).unwrap();
        assert_eq!(v[0].as_slice(), &[1.0, -1.0]);
        assert_eq!(v[1].as_slice(), &[-1.0, 1.0]);
        let v = unit_ball_vertices::<f64>(3).unwrap();
        assert_eq!(v.len(), 4);
        for u in &v {
            assert!((w_norm(u, &GroundDistance::Line).unwrap() - 1.0).abs() < 1e-9);
        }
        assert!(unit_ball_vertices::<f64>(1).is_err());
    }

    #[test]
    fn drce_case_one() {
        let amb = AmbiguitySet::line(V::filled(3, 1.0 / 3.0), 0.1).unwrap();
        let s = drce_finite(&seq(&[1.0, 0.0, 0.0]), &amb).unwrap();
        assert_eq!(s.case_used, DrceCase::VertexEnumeration);
        assert!((s.value - 13.0 / 30.0).abs() < 1e-12);
        assert!((s.worst_q[0] - (1.0 / 3.0 + 0.1)).abs() < 1e-12);
        assert!((s.worst_q[1] - (1.0 / 3.0 - 0.1)).abs() < 1e-12);
    }

    #[test]
    fn drce_case_two() {
        let amb = AmbiguitySet::line(V::from_f64(&[1.0, 0.0, 0.0]), 0.5).unwrap();
        let s = drce_finite(&seq(&[0.0, 1.0, 0.0]), &amb).unwrap();
        assert_eq!(s.case_used, DrceCase::Lp);
        assert!((s.value - 0.5).abs() < 1e-9);
        assert!((s.worst_q[0] - 0.5).abs() < 1e-9 && (s.worst_q[1] - 0.5).abs() < 1e-9);
    }

    #[test]
    fn zero_radius_is_nominal() {
        let p = V::from_f64(&[0.2, 0.5, 0.3]);
        let g = seq(&[0.3, -1.0, 2.0]);
        let s = drce_finite(&g, &AmbiguitySet::line(p.clone(), 0.0).unwrap()).unwrap();
        assert!((s.value - g.expectation(&p)).abs() < 1e-15);
    }

    #[test]
    fn bad_radius_rejected() {
        assert!(matches!(
            AmbiguitySet::line(V::from_f64(&[1.0]), -0.1),
            Err(WassersteinError::BadRadius(_))
        ));
    }

    #[test]
    fn explicit_distance_drce() {
        let d = DenseMatrix::<f64>::from_f64_rows(&[&[0.0, 1.0, 2.0], &[1.0, 0.0, 1.0], &[2.0, 1.0, 0.0]]);
        let amb_line = AmbiguitySet::line(V::from_f64(&[1.0, 0.0, 0.0]), 0.5).unwrap();
        let amb_mat = AmbiguitySet::new(amb_line.nominal().clone(), 0.5, GroundDistance::explicit(d).unwrap()).unwrap();
        let g = seq(&[0.0, 1.0, 0.3]);
        let a = drce_finite(&g, &amb_line).unwrap().value;
        let b = drce_finite(&g, &amb_mat).unwrap().value;
        assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn initial_uncertainty_degenerate() {
        let m = DenseMatrix::<f64>::from_f64_rows(&[&[0.9, 0.2], &[0.1, 0.8]]);
        let x0 = V::from_f64(&[0.0, 1.0]);
        let c = V::from_f64(&[1.0, 0.0]);
        let amb = AmbiguitySet::line(V::filled(4, 0.25), 0.1).unwrap();
        let r = drce_with_initial_uncertainty(&m, &x0, &[V::zeros(2)], &c, &amb).unwrap();
        let direct = drce_finite(&cost_sequence_sabs(&m, &x0, &c, 4).unwrap(), &amb).unwrap();
        assert_eq!(r.best_vertex, 0);
        assert!((r.value - direct.value).abs() < 1e-15);
        assert!(matches!(
            drce_with_initial_uncertainty(&m, &x0, &[], &c, &amb),
            Err(WassersteinError::NoVertices)
        ));
    }
}
