//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Real floating-point scalar the algorithms are generic over (`f32`, `f64`).
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Converts an `f64` constant into the scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant representable in scalar type")
    }

    /// Lossy conversion to `f64` for diagnostics and integer arithmetic.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Scalar for T where
    T: Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
}

/// Cosine of an angle given in degrees.
///
/// Exact multiples of 90° return exact values so that sign tests on
/// oscillating terms are not decided by rounding noise.
pub fn cos_deg<T: Scalar>(deg: T) -> T {
    let full = T::lit(360.0);
    let mut r = deg - full * (deg / full).floor();
    if r >= full {
        r = r - full;
    }
    let quarter = T::lit(90.0);
    if r == T::zero() {
        T::one()
    } else if r == quarter || r == T::lit(270.0) {
        T::zero()
    } else if r == T::lit(180.0) {
        -T::one()
    } else {
        r.to_radians().cos()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cos_deg_exact_quadrants() {
        assert_eq!(cos_deg(90.0_f64), 0.0);
        assert_eq!(cos_deg(360.0_f64), 1.0);
        assert_eq!(cos_deg(-90.0_f64), 0.0);
        assert_eq!(cos_deg(540.0_f64), -1.0);
        assert!((cos_deg(60.0_f64) - 0.5).abs() < 1e-15);
        assert!((cos_deg(60.0_f32) - 0.5).abs() < 1e-6);
    }
}
