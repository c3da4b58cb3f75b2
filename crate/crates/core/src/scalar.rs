//! Floating-point scalar abstraction.
//!
//! All analytic code is generic over `Real`, which is any IEEE float with
//! the `num-traits` interfaces we need (`f32` or `f64`).  Exact lattice and
//! Lie-algebra computations do not go through this trait; they use rational
//! arithmetic directly.

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};
use std::fmt::{Debug, Display};

pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Send + Sync + 'static
{
}

impl Real for f64 {}
impl Real for f32 {}

/// Shorthand for converting an `f64` literal into the generic scalar.
#[inline]
pub fn r<R: Real>(v: f64) -> R {
    R::from_f64(v).expect("literal conversion")
}

/// Complex constant from a pair of `f64` literals.
#[inline]
pub fn c<R: Real>(re: f64, im: f64) -> Complex<R> {
    Complex::new(r(re), r(im))
}

/// `exp(2 pi i t)` for a rational turn `t`.
#[inline]
pub fn unit_phase<R: Real>(turns: f64) -> Complex<R> {
    let two_pi = r::<R>(2.0) * R::PI();
    Complex::from_polar(R::one(), two_pi * r(turns))
}
