//! Scalar abstraction: the toolkit is generic over the real floating-point
//! type, with `f64` as the default used by the CLI and acceptance tests.

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar underlying all disc arithmetic (`f32` or `f64`).
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + std::fmt::Debug
    + std::fmt::Display
    + Send
    + Sync
    + 'static
{
    /// Shorthand for converting literal constants and tolerances.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant representable in scalar type")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex point with `Re = x`, `Im = 0`.
pub fn real<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

/// `e^{iθ}` on the unit circle.
pub fn unit<T: Real>(theta: T) -> Complex<T> {
    Complex::new(theta.cos(), theta.sin())
}

/// True when both parts of `z` are finite.
pub fn is_finite<T: Real>(z: Complex<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}
