//! Scalar abstraction: all numerics are generic over the floating-point type.
//!
//! `Real` collects everything the library needs from a scalar: elementary
//! functions through `nalgebra::RealField`, conversions, and (via the blanket
//! impl in rustfft) FFT support. Concrete code should use the `f64` aliases
//! exported at the crate root.

use num_complex::Complex;
use num_traits::{FromPrimitive, ToPrimitive};

pub use nalgebra::{ComplexField, RealField};

/// Floating-point scalar: f32 or f64.
///
/// `RealField + Copy` already satisfies rustfft's `FftNum`, so any `Real`
/// can be used with the FFT paths as well.
pub trait Real:
    RealField + Copy + FromPrimitive + ToPrimitive + Default + std::iter::Sum
{
    /// Shorthand conversion from an `f64` literal or constant.
    #[inline]
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("f64 constant must be representable")
    }

    #[inline]
    fn of_usize(v: usize) -> Self {
        Self::from_usize(v).expect("usize must be representable")
    }

    /// Lossy conversion back to f64 (for reports and error messages).
    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().expect("scalar converts to f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex number over the library scalar.
pub type Cplx<T> = Complex<T>;

/// |x|, disambiguated between `Signed::abs` and `ComplexField::abs`.
#[inline]
pub fn rabs<T: Real>(x: T) -> T {
    ComplexField::abs(x)
}

/// sign(x) with sign(0) = 0, so that u0 * v0 == V holds exactly where V vanishes.
#[inline]
pub fn rsign<T: Real>(x: T) -> T {
    if x > T::zero() {
        T::one()
    } else if x < T::zero() {
        -T::one()
    } else {
        T::zero()
    }
}

/// Modulus of a complex number.
#[inline]
pub fn cabs<T: Real>(z: Cplx<T>) -> T {
    ComplexField::hypot(z.re, z.im)
}

/// exp(z) for complex z.
#[inline]
pub fn cexp<T: Real>(z: Cplx<T>) -> Cplx<T> {
    let r = ComplexField::exp(z.re);
    Cplx::new(r * ComplexField::cos(z.im), r * ComplexField::sin(z.im))
}

/// e^{i t}.
#[inline]
pub fn cis<T: Real>(t: T) -> Cplx<T> {
    Cplx::new(ComplexField::cos(t), ComplexField::sin(t))
}

/// <x> = (1 + |x|^2)^(1/2) evaluated from r = |x|.
#[inline]
pub fn jweight<T: Real>(r: T) -> T {
    ComplexField::sqrt(T::one() + r * r)
}
