//! Floating point abstraction shared by every numerical module.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar used throughout the crate: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar converts to f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `x / sinh x`, accurate near zero.
pub fn x_over_sinh<T: Real>(x: T) -> T {
    let ax = x.abs();
    if ax < T::lit(1e-4) {
        let x2 = x * x;
        T::one() - x2 / T::lit(6.0) + T::lit(7.0) * x2 * x2 / T::lit(360.0)
    } else if ax > T::lit(40.0) {
        // sinh x = e^x/2 up to e^{-2x}
        T::lit(2.0) * ax * (-ax).exp() / (T::one() - (-T::lit(2.0) * ax).exp())
    } else {
        x / x.sinh()
    }
}

/// `sin x / x`, accurate near zero.
pub fn sinc<T: Real>(x: T) -> T {
    if x.abs() < T::lit(1e-4) {
        let x2 = x * x;
        T::one() - x2 / T::lit(6.0) + x2 * x2 / T::lit(120.0)
    } else {
        x.sin() / x
    }
}

/// `ln sinh x` for `x > 0` without overflow.
pub fn ln_sinh<T: Real>(x: T) -> T {
    if x > T::lit(20.0) {
        x - T::LN_2() + (-(-(T::lit(2.0) * x)).exp()).ln_1p()
    } else {
        x.sinh().ln()
    }
}

/// `coth x` for `x > 0`, accurate near zero.
pub fn coth<T: Real>(x: T) -> T {
    if x.abs() < T::lit(1e-4) {
        T::one() / x + x / T::lit(3.0)
    } else {
        T::one() / x.tanh()
    }
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope<T: Real>(xs: &[T], ys: &[T]) -> T {
    let n = T::from_usize_lossy(xs.len());
    let lx: Vec<T> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<T> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().copied().sum::<T>() / n;
    let my = ly.iter().copied().sum::<T>() / n;
    let mut num = T::zero();
    let mut den = T::zero();
    for (a, b) in lx.iter().zip(&ly) {
        num = num + (*a - mx) * (*b - my);
        den = den + (*a - mx) * (*a - mx);
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_argument_branches_match_direct_formulas() {
        for &x in &[1.1e-4_f64, 5e-4, 1e-3] {
            assert!((x_over_sinh(x) - x / x.sinh()).abs() < 1e-15);
            assert!((sinc(x) - x.sin() / x).abs() < 1e-15);
        }
        let x = 9.9e-5_f64;
        assert!((x_over_sinh(x) - x / x.sinh()).abs() < 1e-15);
        assert!((coth(x) - 1.0 / x.tanh()).abs() / coth(x) < 1e-12);
    }

    #[test]
    fn large_argument_branches_are_continuous() {
        let a = x_over_sinh(40.0_f64 - 1e-9);
        let b = x_over_sinh(40.0_f64 + 1e-9);
        assert!(((a - b) / a).abs() < 1e-8);
        assert!((ln_sinh(30.0_f64) - 30.0_f64.sinh().ln()).abs() < 1e-12);
        assert!(ln_sinh(800.0_f64).is_finite());
    }

    #[test]
    fn slope_of_power_law() {
        let xs = [10.0_f64, 100.0, 1000.0];
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x.powf(-0.5)).collect();
        assert!((loglog_slope(&xs, &ys) + 0.5).abs() < 1e-12);
    }
}
