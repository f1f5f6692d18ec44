//! Scalar abstraction and the combinatorial primitives shared by every module.
//!
//! All identity checks in this crate run over [`BigRational`], where arithmetic
//! is exact. The same kernels also compile for `f64`/`f32`, which is handy for
//! quick numeric evaluation but carries the usual rounding.

use std::fmt::{Debug, Display};
use std::ops::Neg;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::matrix::Matrix;

/// The number type every generic kernel is written against.
pub trait Scalar:
    Clone + Debug + Display + PartialEq + PartialOrd + Num + Neg<Output = Self> + Send + Sync + 'static
{
    fn from_bigint(n: &BigInt) -> Self;

    fn from_ratio(r: &BigRational) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_bigint(&BigInt::from(n))
    }

    /// `Some(n)` when the value is an integer.
    fn to_bigint_exact(&self) -> Option<BigInt>;

    fn to_f64(&self) -> f64;

    /// Equality used when validating stochastic matrices and block identities.
    /// Exact for rationals, relative tolerance for floating point.
    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }

    /// Pivot preference for elimination: larger is better.
    fn pivot_weight(&self) -> f64;

    /// Inverts a square matrix. The default is plain Gauss-Jordan elimination.
    fn invert(m: &Matrix<Self>) -> Result<Matrix<Self>, Error> {
        crate::matrix::gauss_jordan_inverse(m)
    }
}

impl Scalar for BigRational {
    fn from_bigint(n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }

    fn from_ratio(r: &BigRational) -> Self {
        r.clone()
    }

    fn to_bigint_exact(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.to_integer())
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn pivot_weight(&self) -> f64 {
        // prefer short numbers to limit growth
        -((self.numer().bits() + self.denom().bits()) as f64)
    }

    fn invert(m: &Matrix<Self>) -> Result<Matrix<Self>, Error> {
        crate::matrix::fraction_free_inverse(m)
    }
}

macro_rules! float_scalar {
    ($t:ty, $tol:expr) => {
        impl Scalar for $t {
            fn from_bigint(n: &BigInt) -> Self {
                n.to_f64().unwrap_or(f64::NAN) as $t
            }

            fn from_ratio(r: &BigRational) -> Self {
                ToPrimitive::to_f64(r).unwrap_or(f64::NAN) as $t
            }

            fn to_bigint_exact(&self) -> Option<BigInt> {
                if self.fract() == 0.0 && self.is_finite() {
                    Some(BigInt::from(*self as i128))
                } else {
                    None
                }
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn approx_eq(&self, other: &Self) -> bool {
                let scale = self.abs().max(other.abs()).max(1.0);
                (self - other).abs() <= $tol * scale
            }

            fn pivot_weight(&self) -> f64 {
                self.abs() as f64
            }
        }
    };
}

float_scalar!(f64, 1e-12);
float_scalar!(f32, 1e-5);

/// `base^exp` with `0^0 = 1`.
pub fn pow<T: Scalar>(base: &T, exp: usize) -> T {
    num_traits::pow(base.clone(), exp)
}

/// `(-1)^n` as a scalar.
pub fn sign<T: Scalar>(n: usize) -> T {
    if n.is_multiple_of(2) {
        T::one()
    } else {
        -T::one()
    }
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, v| acc * BigInt::from(v))
}

/// Binomial coefficient on all integer arguments.
///
/// Zero when `r < 0`, or when `r > n >= 0`. For `n < 0` and `r >= 0` the
/// falling-factorial extension `(-1)^r * binom(r - n - 1, r)` is used.
pub fn binom(n: i64, r: i64) -> BigInt {
    if r < 0 {
        return BigInt::zero();
    }
    if n < 0 {
        let v = binom(r - n - 1, r);
        return if r % 2 == 0 { v } else { -v };
    }
    if r > n {
        return BigInt::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigInt::one();
    for t in 0..r {
        acc = acc * BigInt::from(n - t) / BigInt::from(t + 1);
    }
    acc
}

/// Binomial coefficient with a general upper argument, `x (x-1) ... (x-j+1) / j!`.
pub fn binom_gen<T: Scalar>(x: &T, j: usize) -> T {
    let mut acc = T::one();
    for t in 0..j {
        acc = acc * (x.clone() - T::from_i64(t as i64)) / T::from_i64(t as i64 + 1);
    }
    acc
}

/// Falling factorial `x (x-1) ... (x-j+1)`.
pub fn falling<T: Scalar>(x: &T, j: usize) -> T {
    (0..j).fold(T::one(), |acc, t| acc * (x.clone() - T::from_i64(t as i64)))
}

/// Multinomial coefficient `i! / (parts[0]! parts[1]! ...)`.
pub fn multinom(i: usize, parts: &[usize]) -> Result<BigInt, Error> {
    let total: usize = parts.iter().sum();
    if total != i {
        return Err(Error::Domain(format!(
            "multinomial parts sum to {total}, expected {i}"
        )));
    }
    // product of binomials avoids the big factorial quotient
    let mut acc = BigInt::one();
    let mut used = 0usize;
    for &p in parts {
        used += p;
        acc *= binom(used as i64, p as i64);
    }
    Ok(acc)
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `"a/b"` or `"a"`. Decimal input is rejected.
pub fn parse_rational(s: &str) -> Result<BigRational, Error> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(
            BigInt::from_str(s).map_err(|_| bad())?,
        )),
    }
}

/// `"num/den"`, or `"n"` for integers.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// True when `r` lies in the closed unit interval.
pub(crate) fn in_unit_interval<T: Scalar>(r: &T) -> bool {
    *r >= T::zero() && *r <= T::one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pow_conventions() {
        assert_eq!(pow(&int(0), 0), int(1));
        assert_eq!(pow(&int(-1), 1), int(-1));
        assert_eq!(pow(&rational(3, 2), 3), rational(27, 8));
        assert_eq!(pow(&0.0f64, 0), 1.0);
    }

    #[test]
    fn binom_values() {
        assert_eq!(binom(5, 2), BigInt::from(10));
        assert_eq!(binom(3, 5), BigInt::zero());
        assert_eq!(binom(-1, 2), BigInt::from(1));
        assert_eq!(binom(-1, 3), BigInt::from(-1));
        assert_eq!(binom(-1, 0), BigInt::from(1));
        assert_eq!(binom(4, -1), BigInt::zero());
        // binom(-3, 2) = (-3)(-4)/2
        assert_eq!(binom(-3, 2), BigInt::from(6));
    }

    #[test]
    fn pascal_rule() {
        for n in 1..=30i64 {
            for r in 0..=n {
                assert_eq!(binom(n, r), binom(n - 1, r - 1) + binom(n - 1, r));
            }
        }
    }

    #[test]
    fn negative_upper_matches_falling_factorial() {
        for n in -8i64..0 {
            for r in 0..8usize {
                assert_eq!(
                    int(0) + BigRational::from_integer(binom(n, r as i64)),
                    binom_gen(&int(n), r)
                );
            }
        }
    }

    #[test]
    fn binom_gen_values() {
        assert_eq!(binom_gen(&rational(1, 2), 2), rational(-1, 8));
        assert_eq!(binom_gen(&rational(7, 3), 0), int(1));
        assert_eq!(binom_gen(&int(4), 2), int(6));
        for x in 0..=12i64 {
            for j in 0..=12usize {
                assert_eq!(
                    binom_gen(&int(x), j),
                    BigRational::from_integer(binom(x, j as i64))
                );
            }
        }
    }

    #[test]
    fn multinom_values() {
        assert_eq!(multinom(4, &[2, 1, 1]).unwrap(), BigInt::from(12));
        assert_eq!(multinom(0, &[]).unwrap(), BigInt::one());
        assert_eq!(multinom(3, &[3]).unwrap(), BigInt::one());
        assert!(multinom(3, &[1, 1]).is_err());
    }

    #[test]
    fn rational_text_format() {
        assert_eq!(format_rational(&rational(-3, 7)), "-3/7");
        assert_eq!(format_rational(&rational(6, 3)), "2");
        assert_eq!(parse_rational(" -6/14 ").unwrap(), rational(-3, 7));
        assert_eq!(parse_rational("5").unwrap(), int(5));
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    proptest! {
        #[test]
        fn rational_add_sub_round_trip(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
            let x = rational(a, b);
            let y = rational(c, d);
            prop_assert_eq!(x.clone() + y.clone() - y, x.clone());
            prop_assert_eq!(parse_rational(&format_rational(&x)).unwrap(), x);
        }
    }
}
