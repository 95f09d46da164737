//! Binary floating point with a caller-chosen precision, backed by `dashu-float`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use dashu_float::ops::SquareRoot;
use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::{IBig, UBig};
use num_bigint::{BigInt, Sign};
use num_rational::BigRational;

type Inner = FBig<HalfEven, 2>;

/// A binary float carrying `precision` significant bits.
///
/// Results of binary operations take the larger precision of the operands.
#[derive(Clone, Debug, PartialEq, PartialOrd)]
pub struct HpFloat(Inner);

fn to_ibig(value: &BigInt) -> IBig {
    let (sign, bytes) = value.to_bytes_le();
    let magnitude = IBig::from(UBig::from_le_bytes(&bytes));
    if sign == Sign::Minus {
        -magnitude
    } else {
        magnitude
    }
}

impl HpFloat {
    pub fn zero(precision_bits: usize) -> Self {
        HpFloat(Inner::ZERO.with_precision(precision_bits).value())
    }

    pub fn from_int(value: &BigInt, precision_bits: usize) -> Self {
        HpFloat(
            Inner::from(to_ibig(value))
                .with_precision(precision_bits)
                .value(),
        )
    }

    pub fn from_i64(value: i64, precision_bits: usize) -> Self {
        HpFloat(Inner::from(value).with_precision(precision_bits).value())
    }

    /// Rounds `numer/denom` to `precision_bits` (one correctly rounded division).
    pub fn from_rational(value: &BigRational, precision_bits: usize) -> Self {
        let n = Self::from_int(value.numer(), precision_bits);
        let d = Self::from_int(value.denom(), precision_bits);
        n / d
    }

    pub fn precision(&self) -> usize {
        self.0.precision()
    }

    pub fn ln(&self) -> Self {
        HpFloat(self.0.ln())
    }

    pub fn exp(&self) -> Self {
        HpFloat(self.0.exp())
    }

    pub fn sqrt(&self) -> Self {
        HpFloat(self.0.sqrt())
    }

    pub fn abs(&self) -> Self {
        if self.0 < Inner::ZERO {
            HpFloat(-self.0.clone())
        } else {
            self.clone()
        }
    }

    /// Real `k`-th root of a positive value.
    pub fn nth_root(&self, k: u64) -> Self {
        let k = Self::from_i64(k as i64, self.precision());
        (self.ln() / k).exp()
    }

    pub fn powi(&self, exponent: i64) -> Self {
        HpFloat(self.0.powi(IBig::from(exponent)))
    }

    pub fn is_zero(&self) -> bool {
        self.0 == Inner::ZERO
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().value()
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.0
            .to_decimal()
            .value()
            .with_precision(digits.max(1))
            .value()
            .to_string()
    }

    /// Significant decimal digits that the binary precision supports.
    pub fn decimal_digits(&self) -> usize {
        ((self.precision() as f64) * std::f64::consts::LOG10_2).floor() as usize
    }

    pub fn cmp_f64(&self, other: f64) -> Option<Ordering> {
        self.to_f64().partial_cmp(&other)
    }
}

impl fmt::Display for HpFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string(self.decimal_digits()))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for HpFloat {
            type Output = HpFloat;
            fn $method(self, rhs: HpFloat) -> HpFloat {
                HpFloat($trait::$method(self.0, rhs.0))
            }
        }
        impl<'a> $trait<&'a HpFloat> for &'a HpFloat {
            type Output = HpFloat;
            fn $method(self, rhs: &'a HpFloat) -> HpFloat {
                HpFloat($trait::$method(&self.0, &rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for HpFloat {
    type Output = HpFloat;
    fn neg(self) -> HpFloat {
        HpFloat(-self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    #[test]
    fn rational_conversion_is_close() {
        let third = HpFloat::from_rational(&rat(1, 3), 128);
        assert_eq!(third.precision(), 128);
        assert!((third.to_f64() - 1.0 / 3.0).abs() < 1e-16);
        assert!(third
            .to_decimal_string(30)
            .starts_with("0.333333333333333333333333333333"));
    }

    #[test]
    fn log_of_four_matches_f64() {
        let four = HpFloat::from_i64(4, 100);
        assert!((four.ln().to_f64() - 4f64.ln()).abs() < 1e-15);
        let two = HpFloat::from_i64(2, 100);
        assert!((four.nth_root(2) - two).abs().to_f64() < 1e-28);
    }

    #[test]
    fn zero_renders_exactly() {
        assert_eq!(HpFloat::zero(64).to_decimal_string(10), "0");
        assert_eq!(HpFloat::zero(64).to_f64(), 0.0);
    }
}
