//! Infinite-horizon robust cost estimation.
//!
//! For a stable `M = P J P⁻¹` the cost `g(t) = ⟨c, Mᵗ x⟩` has the closed form
//!
//! ```text
//! g(t) = Σ_i d_i r_iᵗ cos(t θ_i + η_i) + Σ_j w_j λ_jᵗ
//! ```
//!
//! with angles in degrees. The worst stopping time is found by locating some
//! `t₀` with `g(t₀) > 0` and a cutoff `n₀` past which `|g| < g(t₀)`, then
//! scanning `[1, n₀]`.

mod cutoff;
mod fixtures;
mod geometric;
mod planar;

pub use cutoff::{bezout_steps, find_n0, find_t0, find_t0_with, rationalize_degrees, rce_infinite, rce_infinite_with};
pub use fixtures::{adversarial_instance, dircyc_instance, AdversarialInstance, DircycInstance};
pub use geometric::{geometric_drce, geometric_interval, geometric_objective, GeometricDrce};
pub use planar::{planar_polar, rce_infinite_2d};

use crate::config::Tolerances;
use crate::linalg::{real_jordan_with, spectral_radius, DenseMatrix, DenseVector, LinalgError};
use crate::scalar::{cos_deg, Scalar};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum InfiniteError {
    #[error("system is not stable: spectral radius {radius} >= 1")]
    NotStable { radius: f64 },
    #[error("time index must be at least 1")]
    ZeroTime,
    #[error("dominant magnitudes tie ({left} vs {right}); the cutoff bounds need a unique dominant term")]
    DominanceTie { left: f64, right: f64 },
    #[error("cutoff requires a positive reference value, got {0}")]
    NonPositiveReference(f64),
    #[error("scan would exceed {limit} steps")]
    ScanLimit { limit: u64 },
    #[error("no positive value found up to the guaranteed bound {bound}")]
    CutoffFailed { bound: u64 },
    #[error("gcd({a}, {b}) is not 1")]
    NotCoprime { a: u64, b: u64 },
    #[error("angle {a}/{b} degrees is outside (0, 360)")]
    AngleRange { a: u64, b: u64 },
    #[error("invalid parameter: {0}")]
    Invalid(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Angle `num/den` degrees in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RationalAngle {
    pub num: u64,
    pub den: u64,
    /// No fraction with denominator under the cap met the accuracy target;
    /// `num/den` is only the closest convergent.
    pub approximate: bool,
}

/// `d·rᵗ·cos(tθ + η)`, angles in degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexTerm<T> {
    pub d: T,
    pub r: T,
    pub theta: T,
    pub eta: T,
    pub angle: RationalAngle,
}

/// `w·λᵗ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealTerm<T> {
    pub w: T,
    pub lambda: T,
}

/// Closed form of `g(t)`; terms are kept in ascending order of magnitude.
#[derive(Debug, Clone, PartialEq)]
pub struct OscillatorySum<T> {
    pub complex_terms: Vec<ComplexTerm<T>>,
    pub real_terms: Vec<RealTerm<T>>,
}

impl<T: Scalar> OscillatorySum<T> {
    /// Builds a sum from `(d, r, θ°, η°)` and `(w, λ)` tuples.
    ///
    /// Terms with negligible amplitude or zero magnitude are dropped, θ is
    /// rationalised (and snapped to the fraction when it is accurate), and
    /// η is reduced to `[0, 360)`.
    pub fn new(complex: &[(T, T, T, T)], real: &[(T, T)]) -> Result<Self, InfiniteError> {
        Self::with_tolerances(complex, real, &Tolerances::default())
    }

    pub fn with_tolerances(complex: &[(T, T, T, T)], real: &[(T, T)], tol: &Tolerances) -> Result<Self, InfiniteError> {
        let floor = T::lit(tol.amplitude_floor);
        let mut complex_terms = Vec::new();
        for &(d, r, theta, eta) in complex {
            let finite = [d, r, theta, eta].iter().all(|x| x.is_finite());
            if !finite || r < T::zero() || r >= T::one() {
                return Err(InfiniteError::Invalid(format!("complex term with r = {r}")));
            }
            if d.abs() < floor || r == T::zero() {
                continue;
            }
            let angle = rationalize_degrees(theta, tol);
            let theta = if angle.approximate {
                theta
            } else {
                T::from_u64(angle.num).unwrap_or(theta) / T::from_u64(angle.den).unwrap_or_else(T::one)
            };
            complex_terms.push(ComplexTerm {
                d,
                r,
                theta,
                eta: normalise_phase(eta),
                angle,
            });
        }
        let mut real_terms = Vec::new();
        for &(w, lambda) in real {
            if !w.is_finite() || !lambda.is_finite() || lambda.abs() >= T::one() {
                return Err(InfiniteError::Invalid(format!("real term with lambda = {lambda}")));
            }
            if w.abs() < floor || lambda == T::zero() {
                continue;
            }
            real_terms.push(RealTerm { w, lambda });
        }
        complex_terms.sort_by(|a, b| a.r.partial_cmp(&b.r).unwrap_or(std::cmp::Ordering::Equal));
        real_terms.sort_by(|a, b| {
            a.lambda
                .abs()
                .partial_cmp(&b.lambda.abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        Ok(Self {
            complex_terms,
            real_terms,
        })
    }

    pub fn is_empty(&self) -> bool {
        self.complex_terms.is_empty() && self.real_terms.is_empty()
    }

    /// `Σ|d_i| + Σ|w_j|`.
    pub fn total_amplitude(&self) -> T {
        self.complex_terms.iter().map(|t| t.d.abs()).sum::<T>() + self.real_terms.iter().map(|t| t.w.abs()).sum::<T>()
    }

    /// `ζ = max(r_q, |λ_p|)`.
    pub fn dominant_magnitude(&self) -> T {
        let rq = self.complex_terms.last().map_or(T::zero(), |t| t.r);
        let lp = self.real_terms.last().map_or(T::zero(), |t| t.lambda.abs());
        rq.max(lp)
    }

    /// `g(t)`; errors for `t = 0`.
    pub fn eval(&self, t: u64) -> Result<T, InfiniteError> {
        if t == 0 {
            return Err(InfiniteError::ZeroTime);
        }
        Ok(self.eval_unchecked(t))
    }

    pub(crate) fn eval_unchecked(&self, t: u64) -> T {
        let tf = T::from_u64(t).unwrap_or_else(T::infinity);
        let mut s = T::zero();
        for term in &self.complex_terms {
            s = s + term.d * pow_t(term.r, t) * cos_deg(term.phase_at(t, tf) + term.eta);
        }
        for term in &self.real_terms {
            s = s + term.w * pow_t(term.lambda, t);
        }
        s
    }
}

impl<T: Scalar> ComplexTerm<T> {
    /// `t·θ` reduced modulo 360, exactly when θ is an exact fraction.
    fn phase_at(&self, t: u64, tf: T) -> T {
        if self.angle.approximate {
            return tf * self.theta;
        }
        let period = 360u128 * self.angle.den as u128;
        let turns = (t as u128 % period) * self.angle.num as u128 % period;
        T::from_u128(turns).unwrap_or_else(T::zero) / T::from_u64(self.angle.den).unwrap_or_else(T::one)
    }
}

/// `g(t)` for `t ≥ 1`.
pub fn eval_g<T: Scalar>(s: &OscillatorySum<T>, t: u64) -> Result<T, InfiniteError> {
    s.eval(t)
}

fn pow_t<T: Scalar>(x: T, t: u64) -> T {
    match i32::try_from(t) {
        Ok(k) => x.powi(k),
        Err(_) => x.powf(T::from_u64(t).unwrap_or_else(T::infinity)),
    }
}

/// Reduces a phase to `[0, 360)`, snapping to an integer when within 1e-9.
fn normalise_phase<T: Scalar>(eta: T) -> T {
    let full = T::lit(360.0);
    let mut e = eta - full * (eta / full).floor();
    let rounded = e.round();
    if (e - rounded).abs() <= T::lit(1e-9) {
        e = rounded;
    }
    if e >= full {
        e = e - full;
    }
    e
}

pub fn decompose<T: Scalar>(
    m: &DenseMatrix<T>,
    c: &DenseVector<T>,
    x: &DenseVector<T>,
) -> Result<OscillatorySum<T>, InfiniteError> {
    decompose_with(m, c, x, &Tolerances::default())
}

/// Oscillatory-sum form of `⟨c, Mᵗ x⟩` via the real Jordan form of `M`.
pub fn decompose_with<T: Scalar>(
    m: &DenseMatrix<T>,
    c: &DenseVector<T>,
    x: &DenseVector<T>,
    tol: &Tolerances,
) -> Result<OscillatorySum<T>, InfiniteError> {
    if !m.is_square() || c.dim() != m.rows() || x.dim() != m.rows() {
        return Err(LinalgError::DimensionMismatch {
            op: "decompose",
            left: (m.rows(), m.cols()),
            right: (c.dim(), x.dim()),
        }
        .into());
    }
    let radius = spectral_radius(m)?;
    if !(radius < T::one()) {
        return Err(InfiniteError::NotStable {
            radius: radius.as_f64(),
        });
    }
    let form = real_jordan_with(m, tol)?;
    let sigma = form.p.transpose_vec(c)?;
    let tau = form.p_inverse.mat_vec(x)?;
    let mut complex = Vec::with_capacity(form.complex_blocks.len());
    for (i, blk) in form.complex_blocks.iter().enumerate() {
        let (s1, s2) = (sigma[2 * i], sigma[2 * i + 1]);
        let (t1, t2) = (tau[2 * i], tau[2 * i + 1]);
        let u = t1 * s1 + t2 * s2;
        let v = t2 * s1 - t1 * s2;
        let d = u.hypot(v);
        let eta = v.atan2(u).to_degrees();
        complex.push((d, blk.r, blk.theta, eta));
    }
    let off = 2 * form.complex_blocks.len();
    let real: Vec<(T, T)> = form
        .real_eigs
        .iter()
        .enumerate()
        .map(|(j, &lam)| (tau[off + j] * sigma[off + j], lam))
        .collect();
    OscillatorySum::with_tolerances(&complex, &real, tol)
}

/// Outcome of the infinite-horizon search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RceInfKind {
    Attained,
    /// `g(t) ≤ 0` for every t; the supremum 0 is approached as t → ∞.
    SupremumAtInfinity,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RceInfResult<T> {
    pub kind: RceInfKind,
    pub t_star: Option<u64>,
    pub value: T,
    /// Last time step inspected by the scan.
    pub n0: Option<u64>,
}

impl<T: Scalar> RceInfResult<T> {
    pub(crate) fn at_infinity() -> Self {
        Self {
            kind: RceInfKind::SupremumAtInfinity,
            t_star: None,
            value: T::zero(),
            n0: None,
        }
    }
}

/// Which bound located `t₀`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseTag {
    RealPosPos,
    RealPosNeg,
    RealNegNeg,
    RealNegPos,
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CutoffResult {
    pub t0: Option<u64>,
    pub n0: Option<u64>,
    pub case_tag: CaseTag,
}
