//! Closed-form search for two-dimensional rotations, `g(t) = d·rᵗ·cos(tθ + α)`.
//!
//! Angles here are in radians.

use std::f64::consts::PI;

use super::{InfiniteError, RceInfKind, RceInfResult};
use crate::finite::argmax_first;
use crate::scalar::Scalar;

/// Polar form `(κ, γ)` of `ln r + iθ`.
pub fn planar_polar(r: f64, theta: f64) -> (f64, f64) {
    let re = r.ln();
    (re.hypot(theta), theta.atan2(re))
}

/// Worst stopping time of `d·rᵗ·cos(tθ + α)` given `κe^{iγ} = ln r + iθ`.
///
/// Picks the first `t₀` past a full turn where the cosine is non-negative,
/// then bounds the search by the extremum index `m*` past which every
/// local maximum of `|g|` is below `g(t₀)`.
pub fn rce_infinite_2d(d: f64, kappa: f64, r: f64, theta: f64, alpha: f64, gamma: f64) -> Result<RceInfResult<f64>, InfiniteError> {
    if !(theta > 0.0 && theta < PI) {
        return Err(InfiniteError::Invalid(format!("theta = {theta} outside (0, pi)")));
    }
    if !(r > 0.0 && r < 1.0) || !(d > 0.0) || !d.is_finite() || !alpha.is_finite() {
        return Err(InfiniteError::Invalid(format!("need 0 < r < 1 and d > 0, got r = {r}, d = {d}")));
    }
    let scale = kappa.abs().max(1.0);
    if (kappa * gamma.cos() - r.ln()).abs() > 1e-9 * scale || (kappa * gamma.sin() - theta).abs() > 1e-9 * scale {
        return Err(InfiniteError::Invalid("kappa, gamma are not the polar form of ln r + i theta".into()));
    }
    let g = |t: u64| d * r.powi(t as i32) * (t as f64 * theta + alpha).cos();
    let turns = (alpha / (2.0 * PI) + 0.25).ceil();
    let mut t0 = ((-PI / 2.0 - alpha + 2.0 * PI * turns) / theta).ceil().max(1.0) as u64;
    // At exact zeros of the cosine the closed form can land on g(t₀) = 0.
    let period = (2.0 * PI / theta).ceil() as u64 + 1;
    let mut tries = 0;
    while g(t0) <= 0.0 {
        t0 += 1;
        tries += 1;
        if tries > period {
            return Ok(RceInfResult::at_infinity());
        }
    }
    let g_t0 = g(t0);
    let m_star = 1.0 + ((theta * (g_t0 / (gamma.sin().abs() * d)).ln() / r.ln() + alpha + gamma - PI / 2.0) / PI).ceil();
    let x_m = (PI / 2.0 - alpha - gamma + m_star * PI) / theta;
    let upper = (x_m.floor().max(0.0) as u64).max(t0);
    let (t, value) = argmax_first((1..=upper).map(g)).expect("upper >= 1");
    Ok(RceInfResult {
        kind: RceInfKind::Attained,
        t_star: Some(t as u64),
        value: value.as_f64(),
        n0: Some(upper),
    })
}
