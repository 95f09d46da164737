//! Dense univariate polynomials over ℤ.

mod factor;
mod families;
mod modp;
mod parse;
mod prop4;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::exactnum::QuadSurd;

pub use factor::{
    factor, factor_with_ceiling, is_irreducible, Factorization, DEFAULT_MODULAR_FACTOR_CEILING,
};
pub use families::{family_poly, moran_poly};
pub use parse::parse_poly;
pub use prop4::{
    prop4_search, prop4_search_with, PartitionStats, Prop4Config, Prop4Outcome, Prop4Strategy,
    DEFAULT_SEARCH_CEILING,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("syntax error at position {position}: {message}")]
    SyntaxError { position: usize, message: String },
    #[error("unsupported exponent at position {position}: {message}")]
    UnsupportedExponent { position: usize, message: String },
    #[error("division by the zero polynomial")]
    DivisorZero,
    #[error("the zero polynomial has no factorization")]
    ZeroPolynomial,
    #[error("{count} modular factors exceed the recombination ceiling of {ceiling}")]
    TooManyModularFactors { count: usize, ceiling: usize },
    #[error("estimated {estimated} candidates exceed the search ceiling of {ceiling}; shrink the bounds")]
    SearchSpaceTooLarge { estimated: u128, ceiling: u128 },
    #[error("invalid search parameters: {0}")]
    BadSearchParameters(String),
}

/// Coefficients in ascending degree order; the zero polynomial is empty.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn x() -> Self {
        Self::monomial(BigInt::one(), 1)
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(c: BigInt, degree: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    /// Builds from ascending coefficients, trimming trailing zeros.
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficient of `x^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Nonnegative gcd of the coefficients; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut g = self.content();
        if self.leading().is_some_and(|c| c.is_negative()) {
            g = -g;
        }
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| c / &g).collect(),
        }
    }

    /// `p(x^k)`.
    pub fn compose_power(&self, k: usize) -> IntPoly {
        assert!(k >= 1, "compose_power needs k >= 1");
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); (self.coeffs.len() - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        IntPoly::new(coeffs)
    }

    pub fn evaluate_int(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn evaluate_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| {
                acc * x + BigRational::from_integer(c.clone())
            })
    }

    /// Exact value in `Q(√d)` where `d` is the radicand of `x`.
    pub fn evaluate_surd(&self, x: &QuadSurd) -> QuadSurd {
        self.coeffs
            .iter()
            .rev()
            .fold(x.lift(BigRational::zero()), |acc, c| {
                &(&acc * x) + &x.lift(BigRational::from_integer(c.clone()))
            })
    }

    pub fn evaluate_f64(&self, x: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Euclidean norm of the coefficient vector, rounded up.
    pub fn norm2_ceil(&self) -> BigInt {
        let sum: BigInt = self.coeffs.iter().map(|c| c * c).sum();
        let r = sum.sqrt();
        if &r * &r == sum {
            r
        } else {
            r + 1
        }
    }

    pub fn norm1(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    /// Quotient `u` with `divisor · u = self` over ℤ, or `None` when no such
    /// integer polynomial exists.
    pub fn exact_div(&self, divisor: &IntPoly) -> Result<Option<IntPoly>, PolyError> {
        let lc = divisor.leading().ok_or(PolyError::DivisorZero)?;
        if self.is_zero() {
            return Ok(Some(IntPoly::zero()));
        }
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() - 1 < dd {
            return Ok(None);
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let top = &rem[i + dd];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(lc);
            if !r.is_zero() {
                return Ok(None);
            }
            for (j, c) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= &q * c;
            }
            quot[i] = q;
        }
        if rem.iter().all(|c| c.is_zero()) {
            Ok(Some(IntPoly::new(quot)))
        } else {
            Ok(None)
        }
    }

    /// Pseudo-remainder of `self` by `divisor`: `lc^(deg a − deg b + 1)·a mod b`.
    fn pseudo_rem(&self, divisor: &IntPoly) -> IntPoly {
        let lc = divisor.leading().expect("nonzero divisor");
        let db = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        while rem.len() > db && !rem.is_empty() {
            let top = rem.pop().expect("nonempty");
            let shift = rem.len() - db;
            for c in rem.iter_mut() {
                *c *= lc;
            }
            for (j, c) in divisor.coeffs[..db].iter().enumerate() {
                rem[shift + j] -= &top * c;
            }
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        IntPoly::new(rem)
    }

    /// Lexicographic key used to order factors: degree, then coefficients
    /// from the top down.
    pub(crate) fn canonical_cmp(&self, other: &IntPoly) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

/// Primitive gcd with positive leading coefficient, via the primitive
/// remainder sequence. `gcd(p, 0)` is the primitive part of `p`.
pub fn gcd_poly(a: &IntPoly, b: &IntPoly) -> IntPoly {
    if a.is_zero() {
        return b.primitive_part();
    }
    if b.is_zero() {
        return a.primitive_part();
    }
    let (mut r0, mut r1) = if a.coeffs.len() >= b.coeffs.len() {
        (a.primitive_part(), b.primitive_part())
    } else {
        (b.primitive_part(), a.primitive_part())
    };
    while !r1.is_zero() {
        let r2 = r0.pseudo_rem(&r1).primitive_part();
        r0 = r1;
        r1 = r2;
    }
    r0.primitive_part()
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c += s;
        }
        IntPoly::new(coeffs)
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        self + &(-rhs)
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        IntPoly::new(coeffs)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for IntPoly {
            type Output = IntPoly;
            fn $method(self, rhs: IntPoly) -> IntPoly {
                $trait::$method(&self, &rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        -&self
    }
}

/// Renders like `x^4-3x^2+1`, highest degree first.
impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if c.is_negative() {
                f.write_str("-")?;
            } else if !first {
                f.write_str("+")?;
            }
            first = false;
            if i == 0 || !mag.is_one() {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

impl Serialize for IntPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for IntPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_poly(&text).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{quad_roots, rat, QuadRoots};

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn ring_operations() {
        assert_eq!(&p(&[-1, 1]) * &p(&[1, 1]), p(&[-1, 0, 1]));
        assert_eq!(&p(&[1, 2]) + &p(&[-1, -2]), IntPoly::zero());
        assert_eq!(&p(&[1, 2, 3]) - &p(&[0, 0, 3]), p(&[1, 2]));
        assert_eq!(p(&[0, 0, 0]), IntPoly::zero());
        assert_eq!(p(&[5, 3, 1]).derivative(), p(&[3, 2]));
    }

    #[test]
    fn evaluation() {
        let f = p(&[1, -3, 1]);
        assert_eq!(f.evaluate_rational(&rat(1, 1)), rat(-1, 1));
        let QuadRoots::Irrational { beta, beta_prime } = quad_roots(3, 1).unwrap() else {
            panic!("irrational roots expected");
        };
        assert!(f.evaluate_surd(&beta).is_zero());
        assert!(f.evaluate_surd(&beta_prime).is_zero());
        let g = p(&[1, -3, 0, 1]);
        assert!(!g.evaluate_surd(&beta).is_zero());
    }

    #[test]
    fn exact_division() {
        let f = p(&[1, 0, -3, 0, 1]);
        assert_eq!(f.exact_div(&p(&[-1, 1, 1])).unwrap(), Some(p(&[-1, -1, 1])));
        assert_eq!(p(&[1, -3, 1]).exact_div(&p(&[-1, 1])).unwrap(), None);
        assert_eq!(f.exact_div(&f).unwrap(), Some(IntPoly::one()));
        assert_eq!(f.exact_div(&IntPoly::zero()), Err(PolyError::DivisorZero));
        // divisible over Q but not over Z
        assert_eq!(p(&[1, 1]).exact_div(&p(&[2, 2])).unwrap(), None);
        assert_eq!(p(&[2, 2]).exact_div(&p(&[1, 1])).unwrap(), Some(p(&[2])));
    }

    #[test]
    fn gcds() {
        let f = p(&[1, 0, -3, 0, 1]);
        assert_eq!(gcd_poly(&f, &p(&[-1, -1, 1])), p(&[-1, -1, 1]));
        assert_eq!(gcd_poly(&p(&[1, -3, 1]), &p(&[1, -4, 1])), IntPoly::one());
        assert_eq!(gcd_poly(&p(&[-4, -6]), &IntPoly::zero()), p(&[2, 3]));
        let a = &p(&[3, 1]) * &p(&[-2, 5, 7]);
        let b = &p(&[3, 1]) * &p(&[1, 0, 0, 2]);
        assert_eq!(gcd_poly(&a.scale(&BigInt::from(-6)), &b), p(&[3, 1]));
    }

    #[test]
    fn display() {
        assert_eq!(p(&[1, 0, -3, 0, 1]).to_string(), "x^4-3x^2+1");
        assert_eq!(p(&[-1, -1, 1]).to_string(), "x^2-x-1");
        assert_eq!(p(&[0, -2]).to_string(), "-2x");
        assert_eq!(p(&[-1]).to_string(), "-1");
        assert_eq!(IntPoly::zero().to_string(), "0");
    }

    #[test]
    fn compose_power_matches_substitution() {
        let f = p(&[2, -5, 1]);
        assert_eq!(f.compose_power(3), p(&[2, 0, 0, -5, 0, 0, 1]));
        assert_eq!(f.compose_power(1), f);
    }
}
