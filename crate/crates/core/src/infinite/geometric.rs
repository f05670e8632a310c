//! Distributionally robust cost when the stopping time is geometric.
//!
//! The ambiguity set is the geometric family within W₁-radius ξ of
//! `Geom(ρ̂)`; since `W₁(Geom(ρ), Geom(ρ̂)) = |1/ρ − 1/ρ̂|` it is an interval
//! of success probabilities.

use super::{find_n0, InfiniteError, OscillatorySum};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometricDrce<T> {
    pub rho_star: T,
    pub value: T,
    /// Bound on the truncation error of `value`, `eps·(1 − ρ*)^{n₀}`.
    pub error_bound: T,
    pub interval: (T, T),
    pub n0: u64,
}

const RESTARTS: usize = 8;
const ITERATIONS: usize = 500;

/// `[ρ̂/(1+ρ̂ξ), min(1, ρ̂/(1−ρ̂ξ))]`, the upper end being 1 once `ρ̂ξ ≥ 1`.
pub fn geometric_interval<T: Scalar>(rho_hat: T, xi: T) -> Result<(T, T), InfiniteError> {
    if !(rho_hat > T::zero() && rho_hat < T::one()) {
        return Err(InfiniteError::Invalid(format!("rho_hat = {rho_hat} outside (0, 1)")));
    }
    if !(xi >= T::zero()) || !xi.is_finite() {
        return Err(InfiniteError::Invalid(format!("radius {xi} must be non-negative")));
    }
    let k = rho_hat * xi;
    let lo = rho_hat / (T::one() + k);
    let hi = if k < T::one() { (rho_hat / (T::one() - k)).min(T::one()) } else { T::one() };
    if !(lo <= hi) {
        return Err(InfiniteError::Invalid("empty parameter interval".into()));
    }
    Ok((lo, hi))
}

/// `Σ_{t ≤ n₀} g(t)(1−ρ)^{t−1}ρ` for precomputed `g(1..=n₀)`, with its derivative in ρ.
pub fn geometric_objective<T: Scalar>(g: &[T], rho: T) -> (T, T) {
    let q = T::one() - rho;
    let (mut value, mut slope) = (T::zero(), T::zero());
    // pw = q^{t−1}, prev = q^{t−2}
    let (mut pw, mut prev) = (T::one(), T::zero());
    for (i, &gt) in g.iter().enumerate() {
        let k = T::from_usize(i).unwrap_or_else(T::zero);
        value = value + gt * pw * rho;
        slope = slope + gt * (pw - k * prev * rho);
        prev = pw;
        pw = pw * q;
    }
    (value, slope)
}

/// Maximises the truncated expected cost over the geometric interval.
pub fn geometric_drce<T: Scalar>(
    s: &OscillatorySum<T>,
    rho_hat: T,
    xi: T,
    eps: T,
) -> Result<GeometricDrce<T>, InfiniteError> {
    if !(eps > T::zero()) {
        return Err(InfiniteError::Invalid(format!("accuracy {eps} must be positive")));
    }
    let (lo, hi) = geometric_interval(rho_hat, xi)?;
    let n0 = find_n0(s, eps)?;
    let g: Vec<T> = (1..=n0).map(|t| s.eval_unchecked(t)).collect();
    let objective = |rho: T| geometric_objective(&g, rho);

    let width = hi - lo;
    let mut best = (lo, objective(lo).0);
    if width > T::zero() {
        for k in 0..RESTARTS {
            let frac = T::from_usize(k).unwrap_or_else(T::zero) / T::from_usize(RESTARTS - 1).unwrap_or_else(T::one);
            let (rho, value) = ascend(&objective, lo + frac * width, lo, hi);
            if value > best.1 || (value == best.1 && rho < best.0) {
                best = (rho, value);
            }
        }
    }
    let (rho_star, value) = best;
    let tail = (T::one() - rho_star).powf(T::from_u64(n0).unwrap_or_else(T::infinity));
    Ok(GeometricDrce {
        rho_star,
        value,
        error_bound: eps * tail,
        interval: (lo, hi),
        n0,
    })
}

/// Sign-of-gradient ascent with step halving, projected onto `[lo, hi]`.
fn ascend<T: Scalar>(f: &impl Fn(T) -> (T, T), start: T, lo: T, hi: T) -> (T, T) {
    let mut x = start;
    let (mut fx, mut dfx) = f(x);
    let mut step = T::lit(0.1) * (hi - lo);
    let min_step = T::epsilon() * (hi - lo);
    for _ in 0..ITERATIONS {
        if dfx == T::zero() || step <= min_step {
            break;
        }
        let cand = (x + step * dfx.signum()).max(lo).min(hi);
        let (fc, dfc) = f(cand);
        if fc > fx {
            (x, fx, dfx) = (cand, fc, dfc);
        } else {
            step = step / T::lit(2.0);
        }
    }
    (x, fx)
}
