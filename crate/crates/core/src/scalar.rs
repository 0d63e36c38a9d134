//! Real scalar abstraction for the numerical core.

use num_complex::Complex;

/// Floating-point scalar the whole crate is generic over: `f32` or `f64`.
///
/// `nalgebra::RealField` supplies the elementary functions and the dense
/// eigensolver bounds; the `num_traits` conversions bridge literal constants
/// into the generic code.
pub trait Real:
    nalgebra::RealField + num_traits::FromPrimitive + num_traits::ToPrimitive + Copy
{
    /// Lift an `f64` literal into the scalar type.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    /// Lossy view as `f64`, for diagnostics and error payloads.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar")
    }
}

impl<T> Real for T where
    T: nalgebra::RealField + num_traits::FromPrimitive + num_traits::ToPrimitive + Copy
{
}

/// Complex number over the generic real scalar.
pub type Cplx<T> = Complex<T>;

/// Complex literal helper.
#[inline]
pub fn cplx<T: Real>(re: f64, im: f64) -> Cplx<T> {
    Complex::new(T::of(re), T::of(im))
}

/// Real-to-complex embedding.
#[inline]
pub fn re<T: Real>(x: T) -> Cplx<T> {
    Complex::new(x, T::zero())
}

/// Modulus of a complex scalar (num-complex's `norm` needs `Float`, which
/// the generic bound deliberately avoids).
#[inline]
pub fn cmod<T: Real>(z: Cplx<T>) -> T {
    (z.re * z.re + z.im * z.im).sqrt()
}
