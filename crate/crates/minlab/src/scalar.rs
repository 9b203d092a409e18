//! Scalar abstraction: the whole numeric core is generic over a floating
//! point type implementing [`Real`].

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};
use std::fmt::{Debug, Display};

/// Floating-point scalar of the library: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + Send + Sync + 'static
{
    /// Converts an `f64` literal into the scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal not representable")
    }

    /// Machine epsilon of the scalar type as used by tolerance heuristics.
    #[inline]
    fn eps() -> Self {
        Self::epsilon()
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex value over the crate scalar.
pub type C<R> = Complex<R>;

/// `i` as a complex constant.
#[inline]
pub fn ci<R: Real>() -> C<R> {
    C::new(R::zero(), R::one())
}

/// Real constant lifted to a complex value.
#[inline]
pub fn cr<R: Real>(x: R) -> C<R> {
    C::new(x, R::zero())
}

/// Inverse Gudermannian: `atanh(sin x)`.
#[inline]
pub fn gudermann_inv<R: Real>(x: R) -> R {
    x.sin().atanh()
}

/// Gudermannian function: `asin(tanh x)`.
#[inline]
pub fn gudermann<R: Real>(x: R) -> R {
    x.tanh().asin()
}

/// Wraps `x` into `(-pi, pi]`.
pub fn wrap_angle<R: Real>(x: R) -> R {
    let two_pi = R::PI() + R::PI();
    let mut y = x % two_pi;
    if y > R::PI() {
        y -= two_pi;
    } else if y <= -R::PI() {
        y += two_pi;
    }
    y
}

/// Shifts `x` by a multiple of `2 pi` so that it lies within `pi` of `near`.
pub fn unwrap_near<R: Real>(x: R, near: R) -> R {
    near + wrap_angle(x - near)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gudermann_roundtrip() {
        for &x in &[0.0f64, 0.3, -0.9, 1.4] {
            assert!((gudermann(gudermann_inv(x)) - x).abs() < 1e-14);
        }
    }

    #[test]
    fn unwrap_tracks_branch() {
        let x = unwrap_near(0.1f64, 6.0);
        assert!((x - (0.1 + 2.0 * std::f64::consts::PI)).abs() < 1e-14);
        assert!((unwrap_near(-3.0f64, 3.2) - (-3.0 + 2.0 * std::f64::consts::PI)).abs() < 1e-14);
    }
}
