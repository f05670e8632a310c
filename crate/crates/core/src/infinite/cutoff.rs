//! Locating `t₀` with `g(t₀) > 0` and the cutoff `n₀`.

use super::{decompose_with, CaseTag, CutoffResult, InfiniteError, OscillatorySum, RationalAngle, RceInfKind, RceInfResult};
use crate::config::Tolerances;
use crate::finite::argmax_first;
use crate::linalg::{DenseMatrix, DenseVector};
use crate::scalar::Scalar;

/// Best rational approximation of an angle in degrees by continued fractions.
///
/// Stops at the first convergent within `rational_accuracy`; if the
/// denominator cap is reached first the last admissible convergent is
/// returned with `approximate` set.
pub fn rationalize_degrees<T: Scalar>(theta: T, tol: &Tolerances) -> RationalAngle {
    let x = theta.as_f64();
    let cap = tol.rational_denominator_cap.max(1);
    if !x.is_finite() || x <= 0.0 {
        return RationalAngle {
            num: 0,
            den: 1,
            approximate: true,
        };
    }
    let (mut h0, mut h1) = (0u128, 1u128);
    let (mut k0, mut k1) = (1u128, 0u128);
    let mut rem = x;
    let mut best = (x.round().max(0.0) as u128, 1u128);
    for _ in 0..64 {
        let a = rem.floor();
        let ai = a as u128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > cap as u128 || h2 > u64::MAX as u128 {
            break;
        }
        best = (h2, k2);
        if (x - h2 as f64 / k2 as f64).abs() <= tol.rational_accuracy {
            return RationalAngle {
                num: h2 as u64,
                den: k2 as u64,
                approximate: false,
            };
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = rem - a;
        if frac <= 0.0 {
            break;
        }
        rem = 1.0 / frac;
    }
    RationalAngle {
        num: best.0 as u64,
        den: best.1 as u64,
        approximate: true,
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// For θ = a/b degrees, integers `(n, l, g)` with `a·n + 360·b·l = g = gcd(360, a)`.
pub fn bezout_steps(a: u64, b: u64) -> Result<(i128, i128, u64), InfiniteError> {
    if a == 0 || b == 0 || gcd(a, b) != 1 {
        return Err(InfiniteError::NotCoprime { a, b });
    }
    if a as u128 >= 360 * b as u128 {
        return Err(InfiniteError::AngleRange { a, b });
    }
    let (mut r0, mut r1) = (a as i128, 360 * b as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    Ok((s0, t0, r0 as u64))
}

pub fn find_t0<T: Scalar>(s: &OscillatorySum<T>) -> Result<CutoffResult, InfiniteError> {
    find_t0_with(s, &Tolerances::default())
}

pub fn find_t0_with<T: Scalar>(s: &OscillatorySum<T>, tol: &Tolerances) -> Result<CutoffResult, InfiniteError> {
    if s.is_empty() {
        return Err(InfiniteError::Invalid("empty oscillatory sum".into()));
    }
    let gap = T::lit(tol.dominance_gap);
    let mags: Vec<T> = s.complex_terms.iter().map(|t| t.r).collect();
    let lams: Vec<T> = s.real_terms.iter().map(|t| t.lambda.abs()).collect();
    for list in [&mags, &lams] {
        if let [.., x, y] = list.as_slice() {
            if (*y - *x).abs() <= gap {
                return Err(InfiniteError::DominanceTie {
                    left: x.as_f64(),
                    right: y.as_f64(),
                });
            }
        }
    }
    match (mags.last(), lams.last()) {
        (Some(&rq), Some(&lp)) if (rq - lp).abs() <= gap => Err(InfiniteError::DominanceTie {
            left: rq.as_f64(),
            right: lp.as_f64(),
        }),
        (Some(&rq), Some(&lp)) if lp > rq => real_dominant(s, tol),
        (None, Some(_)) => real_dominant(s, tol),
        _ => complex_dominant(s, tol),
    }
}

/// `log_base(x)` with `β = 0` style degeneracies mapped to `−∞`.
fn log_base(x: f64, base: f64) -> f64 {
    if x.is_infinite() || base <= 0.0 {
        return f64::NEG_INFINITY;
    }
    x.ln() / base.ln()
}

fn to_count(x: f64, limit: u64) -> Result<u64, InfiniteError> {
    if x > limit as f64 {
        return Err(InfiniteError::ScanLimit { limit });
    }
    Ok(x.max(0.0) as u64)
}

fn real_dominant<T: Scalar>(s: &OscillatorySum<T>, tol: &Tolerances) -> Result<CutoffResult, InfiniteError> {
    let (top, rest) = s.real_terms.split_last().expect("real terms present");
    let (w, lam) = (top.w.as_f64(), top.lambda.as_f64());
    let other = rest
        .iter()
        .map(|t| t.lambda.abs().as_f64())
        .chain(s.complex_terms.iter().map(|t| t.r.as_f64()))
        .fold(0.0, f64::max);
    let eps = other / lam.abs();
    let beta = rest.iter().map(|t| t.w.abs().as_f64()).sum::<f64>()
        + s.complex_terms.iter().map(|t| t.d.abs().as_f64()).sum::<f64>();
    let ratio = if beta == 0.0 { f64::INFINITY } else { w.abs() / beta };
    let l = log_base(ratio, eps);
    let ceil_pos = |x: f64| -> Result<u64, InfiniteError> { Ok(to_count(x.ceil(), tol.max_scan)?.max(1)) };
    let (case_tag, t0, step) = match (w > 0.0, lam > 0.0) {
        (true, true) => (CaseTag::RealPosPos, 1 + ceil_pos(l)?, 1),
        (true, false) => (CaseTag::RealPosNeg, 2 + 2 * ceil_pos(l / 2.0)?, 2),
        (false, false) => (CaseTag::RealNegNeg, 2 * ceil_pos(l / 2.0)? + 1, 2),
        (false, true) => {
            let bound = if l.is_finite() { to_count(l.floor(), tol.max_scan)? } else { 0 };
            let best = argmax_first((1..=bound).map(|t| s.eval_unchecked(t)));
            return Ok(match best {
                Some((t, v)) if v > T::zero() => CutoffResult {
                    t0: Some(t as u64),
                    n0: Some(bound),
                    case_tag: CaseTag::RealNegPos,
                },
                _ => CutoffResult {
                    t0: None,
                    n0: None,
                    case_tag: CaseTag::RealNegPos,
                },
            });
        }
    };
    // The bound is exact in real arithmetic; rounding can leave g(t0) a hair
    // below zero, in which case the next index of the same parity is used.
    let mut t = t0;
    for _ in 0..1000 {
        if s.eval_unchecked(t) > T::zero() {
            return Ok(CutoffResult {
                t0: Some(t),
                n0: None,
                case_tag,
            });
        }
        t += step;
    }
    Err(InfiniteError::CutoffFailed { bound: t0 })
}

fn complex_dominant<T: Scalar>(s: &OscillatorySum<T>, tol: &Tolerances) -> Result<CutoffResult, InfiniteError> {
    let (top, rest) = s.complex_terms.split_last().expect("complex terms present");
    let rq = top.r.as_f64();
    let other = rest
        .iter()
        .map(|t| t.r.as_f64())
        .chain(s.real_terms.iter().map(|t| t.lambda.abs().as_f64()))
        .fold(0.0, f64::max);
    let big_c = other / rq;
    let gamma = rest.iter().map(|t| t.d.abs().as_f64()).sum::<f64>()
        + s.real_terms.iter().map(|t| t.w.abs().as_f64()).sum::<f64>();
    let d = top.d.as_f64();
    let found = |t0: Option<u64>| CutoffResult {
        t0,
        n0: None,
        case_tag: CaseTag::Complex,
    };
    if top.angle.approximate {
        return Ok(found(decay_scan(s, tol)?));
    }
    let (a, b) = (top.angle.num, top.angle.den);
    let (n, _l, g) = bezout_steps(a, b)?;
    let (b, g) = (b as i128, g as i128);
    let sgn_d: i128 = if d >= 0.0 { 1 } else { -1 };
    let c = 135 + top.eta.as_f64().floor() as i128 - sgn_d * 90;
    let cb = c * b;
    let p = (1..90 * b)
        .chain([0, 90 * b])
        .find(|p| (p - cb).rem_euclid(g) == 0);
    let Some(p) = p else {
        return Ok(found(decay_scan(s, tol)?));
    };
    let sgn_n: i128 = n.signum();
    let s0 = 1 + 0i128.max(div_ceil(sgn_n * (cb - p), 360));
    let d_bound = if gamma == 0.0 {
        f64::NEG_INFINITY
    } else {
        (g as f64 * log_base(d.abs() / (2.0 * gamma), big_c) - (n * (p - cb)) as f64) / (360.0 * b as f64 * n.abs() as f64)
            - s0 as f64
    };
    let f = if d_bound > 1.0 {
        d_bound.ceil().min(i64::MAX as f64 / 1e6) as i128
    } else {
        1
    };
    let bound = (n * (p - b * c))
        .saturating_add(n.abs().saturating_mul(s0 + f).saturating_mul(360 * b))
        / g;
    let scan_to = u64::try_from(bound.max(1)).unwrap_or(u64::MAX).min(tol.max_scan);
    match (1..=scan_to).find(|&t| s.eval_unchecked(t) > T::zero()) {
        Some(t) => Ok(found(Some(t))),
        None if scan_to < u64::try_from(bound).unwrap_or(u64::MAX) => Err(InfiniteError::ScanLimit { limit: tol.max_scan }),
        None => Err(InfiniteError::CutoffFailed { bound: scan_to }),
    }
}

fn div_ceil(x: i128, y: i128) -> i128 {
    let q = x.div_euclid(y);
    if x.rem_euclid(y) == 0 { q } else { q + 1 }
}

/// First positive `g(t)` before the terms decay below machine precision.
fn decay_scan<T: Scalar>(s: &OscillatorySum<T>, tol: &Tolerances) -> Result<Option<u64>, InfiniteError> {
    let zeta = s.dominant_magnitude().as_f64();
    let total = s.total_amplitude().as_f64();
    let horizon = log_base(1e-12 / total, zeta).ceil();
    let horizon = to_count(horizon, tol.max_scan)?.max(1);
    Ok((1..=horizon).find(|&t| s.eval_unchecked(t) > T::zero()))
}

/// Smallest `n₀` with `|g(t)| < g_t0` for every `t > n₀`.
pub fn find_n0<T: Scalar>(s: &OscillatorySum<T>, g_t0: T) -> Result<u64, InfiniteError> {
    if !(g_t0 > T::zero()) {
        return Err(InfiniteError::NonPositiveReference(g_t0.as_f64()));
    }
    let zeta = s.dominant_magnitude().as_f64();
    let total = s.total_amplitude().as_f64();
    if total == 0.0 || zeta == 0.0 {
        return Ok(1);
    }
    let x = log_base(g_t0.as_f64() / total, zeta).ceil() + 1.0;
    if x >= u64::MAX as f64 {
        return Ok(u64::MAX);
    }
    Ok((x.max(1.0)) as u64)
}

pub fn rce_infinite<T: Scalar>(
    m: &DenseMatrix<T>,
    c: &DenseVector<T>,
    x: &DenseVector<T>,
) -> Result<RceInfResult<T>, InfiniteError> {
    rce_infinite_with(m, c, x, &Tolerances::default())
}

/// `sup_{t ≥ 1} ⟨c, Mᵗ x⟩` for a stable `M`.
pub fn rce_infinite_with<T: Scalar>(
    m: &DenseMatrix<T>,
    c: &DenseVector<T>,
    x: &DenseVector<T>,
    tol: &Tolerances,
) -> Result<RceInfResult<T>, InfiniteError> {
    let s = decompose_with(m, c, x, tol)?;
    s.rce(tol)
}

impl<T: Scalar> OscillatorySum<T> {
    /// `sup_{t ≥ 1} g(t)`: attained at the smallest maximiser, or 0 at infinity.
    pub fn rce(&self, tol: &Tolerances) -> Result<RceInfResult<T>, InfiniteError> {
        if self.is_empty() {
            return Ok(RceInfResult::at_infinity());
        }
        let cut = find_t0_with(self, tol)?;
        let Some(t0) = cut.t0 else {
            return Ok(RceInfResult::at_infinity());
        };
        let n0 = match cut.n0 {
            Some(n0) => n0,
            None => find_n0(self, self.eval_unchecked(t0))?,
        }
        .max(t0);
        if n0 > tol.max_scan {
            return Err(InfiniteError::ScanLimit { limit: tol.max_scan });
        }
        let (t, value) = argmax_first((1..=n0).map(|t| self.eval_unchecked(t))).expect("n0 >= 1");
        Ok(RceInfResult {
            kind: RceInfKind::Attained,
            t_star: Some(t as u64),
            value,
            n0: Some(n0),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = DenseMatrix<f64>;
    type V = DenseVector<f64>;

    fn diag_sum() -> OscillatorySum<f64> {
        OscillatorySum::new(&[], &[(1.0, 0.9), (1.0, -0.5)]).unwrap()
    }

    fn rotation_sum() -> OscillatorySum<f64> {
        OscillatorySum::new(&[(1.0, 0.5, 90.0, 0.0)], &[]).unwrap()
    }

    #[test]
    fn bezout_examples() {
        assert_eq!(bezout_steps(90, 1).unwrap(), (1, 0, 90));
        assert_eq!(bezout_steps(45, 1).unwrap(), (1, 0, 45));
        assert_eq!(bezout_steps(1, 3).unwrap(), (1, 0, 1));
        assert!(matches!(bezout_steps(4, 2), Err(InfiniteError::NotCoprime { .. })));
        for (a, b) in [(7u64, 3u64), (359, 1), (1, 1_000_000), (123_457, 1000)] {
            let (n, l, g) = bezout_steps(a, b).unwrap();
            assert_ne!(n, 0);
            assert_eq!(a as i128 * n + 360 * b as i128 * l, g as i128);
            assert_eq!(g, gcd(360, a));
        }
    }

    #[test]
    fn rationalize() {
        let tol = Tolerances::default();
        let r = rationalize_degrees(90.0, &tol);
        assert_eq!((r.num, r.den, r.approximate), (90, 1, false));
        let r = rationalize_degrees(120.0 / 7.0, &tol);
        assert_eq!((r.num, r.den, r.approximate), (120, 7, false));
        let r = rationalize_degrees(2.0f64.sqrt(), &tol);
        assert!(r.den <= 1_000_000);
        assert!((r.num as f64 / r.den as f64 - 2.0f64.sqrt()).abs() < 1e-9);
        let r = rationalize_degrees(std::f64::consts::PI * 1e-3, &Tolerances {
            rational_denominator_cap: 10,
            ..Tolerances::default()
        });
        assert!(r.approximate);
    }

    #[test]
    fn t0_real_positive() {
        let cut = find_t0(&diag_sum()).unwrap();
        assert_eq!(cut.t0, Some(2));
        assert_eq!(cut.case_tag, CaseTag::RealPosPos);
    }

    #[test]
    fn t0_pure_negative() {
        let s = OscillatorySum::new(&[], &[(-1.0, 0.9)]).unwrap();
        let cut = find_t0(&s).unwrap();
        assert_eq!(cut.t0, None);
        assert_eq!(cut.case_tag, CaseTag::RealNegPos);
    }

    #[test]
    fn t0_sign_cases() {
        let s = OscillatorySum::new(&[], &[(1.0, -0.9), (0.5, 0.3)]).unwrap();
        let cut = find_t0(&s).unwrap();
        assert_eq!(cut.case_tag, CaseTag::RealPosNeg);
        assert!(cut.t0.unwrap() % 2 == 0 && s.eval(cut.t0.unwrap()).unwrap() > 0.0);
        let s = OscillatorySum::new(&[], &[(-1.0, -0.9), (0.5, 0.3)]).unwrap();
        let cut = find_t0(&s).unwrap();
        assert_eq!(cut.case_tag, CaseTag::RealNegNeg);
        assert!(cut.t0.unwrap() % 2 == 1 && s.eval(cut.t0.unwrap()).unwrap() > 0.0);
    }

    #[test]
    fn t0_negative_dominant_with_early_bump() {
        let s = OscillatorySum::new(&[], &[(-1.0, 0.9), (3.0, 0.5)]).unwrap();
        let cut = find_t0(&s).unwrap();
        assert_eq!(cut.t0, Some(1));
        assert!(cut.n0.unwrap() >= 1);
    }

    #[test]
    fn t0_rotation() {
        let cut = find_t0(&rotation_sum()).unwrap();
        assert_eq!(cut.t0, Some(4));
        assert_eq!(cut.case_tag, CaseTag::Complex);
    }

    #[test]
    fn ties_rejected() {
        let s = OscillatorySum::new(&[(1.0, 0.5, 60.0, 0.0)], &[(1.0, 0.5)]).unwrap();
        assert!(matches!(find_t0(&s), Err(InfiniteError::DominanceTie { .. })));
        let s = OscillatorySum::new(&[], &[(1.0, 0.5), (1.0, -0.5)]).unwrap();
        assert!(matches!(find_t0(&s), Err(InfiniteError::DominanceTie { .. })));
    }

    #[test]
    fn n0_examples() {
        assert_eq!(find_n0(&diag_sum(), 1.06).unwrap(), 8);
        assert_eq!(find_n0(&diag_sum(), 2.0).unwrap(), 1);
        assert!(matches!(find_n0(&diag_sum(), 0.0), Err(InfiniteError::NonPositiveReference(_))));
        let s = diag_sum();
        let n0 = find_n0(&s, 1.06).unwrap();
        for t in n0 + 1..=n0 + 1000 {
            assert!(s.eval(t).unwrap().abs() < 1.06);
        }
    }

    #[test]
    fn rce_examples() {
        let r = rce_infinite(&M::diagonal(&[0.9, -0.5]), &V::filled(2, 1.0), &V::filled(2, 1.0)).unwrap();
        assert_eq!(r.kind, RceInfKind::Attained);
        assert_eq!(r.t_star, Some(2));
        assert!((r.value - 1.06).abs() < 1e-12);

        let m = M::from_f64_rows(&[&[0.0, -0.5], &[0.5, 0.0]]);
        let r = rce_infinite(&m, &V::from_f64(&[1.0, 0.0]), &V::from_f64(&[1.0, 0.0])).unwrap();
        assert_eq!(r.t_star, Some(4));
        assert_eq!(r.value, 0.0625);

        let s = OscillatorySum::new(&[], &[(-1.0, 0.9)]).unwrap();
        let r = s.rce(&Tolerances::default()).unwrap();
        assert_eq!(r.kind, RceInfKind::SupremumAtInfinity);
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn complex_with_interference() {
        let s = OscillatorySum::new(&[(0.2, 0.3, 50.0, 10.0), (1.0, 0.8, 100.0, 200.0)], &[(-0.5, 0.6)]).unwrap();
        let cut = find_t0(&s).unwrap();
        let t0 = cut.t0.unwrap();
        assert!(s.eval(t0).unwrap() > 0.0);
        let r = s.rce(&Tolerances::default()).unwrap();
        let brute = argmax_first((1..=2000).map(|t| s.eval(t).unwrap())).unwrap();
        assert_eq!(r.t_star, Some(brute.0 as u64));
    }
}
