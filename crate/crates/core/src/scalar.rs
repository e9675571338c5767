//! Scalar abstraction shared by every numeric module.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

/// Real floating-point type the engines are generic over (`f32` or `f64`).
pub trait Scalar: Float + FloatConst + FromPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static {
    /// Default absolute tolerance for normalization, hermiticity and
    /// fidelity checks at this precision.
    fn default_tolerance() -> Self;

    /// Lossless for `f64`, rounding for `f32`.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("finite literal")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn default_tolerance() -> Self {
        1e-10
    }
}

impl Scalar for f32 {
    fn default_tolerance() -> Self {
        1e-5
    }
}

/// Builds a complex number from `f64` parts.
pub fn cplx<T: Scalar>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::lit(im))
}

/// `e^{i theta}`.
pub fn cis<T: Scalar>(theta: T) -> Complex<T> {
    Complex::new(theta.cos(), theta.sin())
}

/// Wraps an angle into `[-pi, pi]`. Angles already inside are returned unchanged,
/// so both endpoints survive.
pub fn wrap_angle<T: Scalar>(theta: T) -> T {
    let pi = T::PI();
    if theta.abs() <= pi {
        return theta;
    }
    let two_pi = pi + pi;
    let mut w = theta - two_pi * (theta / two_pi).round();
    if w > pi {
        w = w - two_pi;
    } else if w < -pi {
        w = w + two_pi;
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn wrap_keeps_in_range_values() {
        assert_eq!(wrap_angle(PI), PI);
        assert_eq!(wrap_angle(-PI), -PI);
        assert_eq!(wrap_angle(0.3), 0.3);
    }

    #[test]
    fn wrap_reduces_out_of_range() {
        assert!((wrap_angle(0.3 + 2.0 * PI) - 0.3).abs() < 1e-12);
        assert!((wrap_angle(-0.3 - 6.0 * PI) + 0.3).abs() < 1e-12);
        let w = wrap_angle(3.5_f32);
        assert!(w.abs() <= std::f32::consts::PI);
    }
}
