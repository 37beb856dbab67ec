//! Coefficient domains.
//!
//! Polynomials are generic over their coefficient ring. Three domains are
//! provided: exact rationals ([`BigRational`]), real doubles (`f64`) and
//! complex doubles ([`Complex64`]). The exact domain is what certificates and
//! resultants are computed in; the floating domains are what evaluation and
//! fitting use.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A field usable as polynomial coefficients.
pub trait Coeff:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// `true` when arithmetic in this domain is exact.
    const EXACT: bool;

    /// Absolute value (modulus for complex numbers) as a double.
    fn magnitude(&self) -> f64;

    fn to_complex(&self) -> Complex64;

    /// Real part as a double.
    fn to_f64(&self) -> f64 {
        self.to_complex().re
    }

    /// Exact conversion from a double. Every finite double is a dyadic
    /// rational, so the exact domain loses nothing here.
    fn from_f64(v: f64) -> Self;

    /// Conversion used for user-facing parameters (transform angles, scales,
    /// offsets). Floating domains pass the value through; the exact domain
    /// snaps it to the nearest rational with a small denominator so that
    /// downstream exact arithmetic stays cheap.
    fn rationalize(v: f64) -> Self {
        Self::from_f64(v)
    }

    fn from_i64(v: i64) -> Self;
}

impl Coeff for BigRational {
    const EXACT: bool = true;

    fn magnitude(&self) -> f64 {
        ratio_to_f64(&self.abs())
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(ratio_to_f64(self), 0.0)
    }

    fn from_f64(v: f64) -> Self {
        BigRational::from_float(v).expect("non-finite value converted to an exact rational")
    }

    fn rationalize(v: f64) -> Self {
        rational_approximation(v, 1_000_000)
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
}

impl Coeff for f64 {
    const EXACT: bool = false;

    fn magnitude(&self) -> f64 {
        self.abs()
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(*self, 0.0)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_f64(v: f64) -> Self {
        v
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }
}

impl Coeff for Complex64 {
    const EXACT: bool = false;

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn to_complex(&self) -> Complex64 {
        *self
    }

    fn from_f64(v: f64) -> Self {
        Complex64::new(v, 0.0)
    }

    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
}

/// Converts a rational to the nearest double without overflowing on large
/// numerators and denominators.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if let Some(v) = ToPrimitive::to_f64(r) {
        if v.is_finite() {
            return v;
        }
    }
    // Fall back to shifting both parts into range.
    let num_bits = r.numer().bits() as i64;
    let den_bits = r.denom().bits() as i64;
    let shift_n = (num_bits - 960).max(0) as u64;
    let shift_d = (den_bits - 960).max(0) as u64;
    let n = (r.numer() >> shift_n).to_f64().unwrap_or(0.0);
    let d = (r.denom() >> shift_d).to_f64().unwrap_or(1.0);
    n / d * 2f64.powi((shift_n as i64 - shift_d as i64) as i32)
}

/// Best rational approximation of `v` with denominator at most `max_den`,
/// by continued fractions.
pub fn rational_approximation(v: f64, max_den: i64) -> BigRational {
    assert!(v.is_finite(), "cannot approximate a non-finite value");
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    let mut x = v;
    for _ in 0..64 {
        let a = x.floor();
        if a.abs() > 1e18 {
            break;
        }
        let a = a as i128;
        let p2 = a * p1 + p0;
        let q2 = a * q1 + q0;
        if q2 > max_den as i128 {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = x - a as f64;
        if frac.abs() < 1e-15 {
            break;
        }
        x = 1.0 / frac;
    }
    if q1 == 0 {
        return BigRational::from_f64(v);
    }
    BigRational::new(BigInt::from(p1), BigInt::from(q1))
}

/// Shorthand for building an exact rational `num/den`.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
