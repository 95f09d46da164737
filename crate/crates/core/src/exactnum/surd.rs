//! Elements `a + b√D` of a real quadratic field with rational `a`, `b`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{ExactError, HpFloat};

/// Exact element `a + b√D`, with `D > 0` square-free.
///
/// The radicand is reduced to its square-free part on construction, so two
/// surds in the same field have identical radicands and equality is
/// componentwise. Square factors with a prime above 10⁶ are only removed when
/// the leftover cofactor is itself a perfect square.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "SurdWire")]
pub struct QuadSurd {
    #[serde(with = "super::serde_rational")]
    a: BigRational,
    #[serde(with = "super::serde_rational")]
    b: BigRational,
    #[serde(with = "super::serde_bigint")]
    radicand: BigInt,
}

#[derive(Deserialize)]
struct SurdWire {
    #[serde(with = "super::serde_rational")]
    a: BigRational,
    #[serde(with = "super::serde_rational")]
    b: BigRational,
    #[serde(with = "super::serde_bigint")]
    radicand: BigInt,
}

impl TryFrom<SurdWire> for QuadSurd {
    type Error = ExactError;
    fn try_from(w: SurdWire) -> Result<Self, ExactError> {
        QuadSurd::new(w.a, w.b, w.radicand)
    }
}

/// Roots of `x² − n·x + m` with `n² − 4m > 0`.
#[derive(Clone, Debug, PartialEq)]
pub enum QuadRoots {
    /// `beta > beta_prime`.
    Irrational {
        beta: QuadSurd,
        beta_prime: QuadSurd,
    },
    /// The discriminant is a perfect square; larger root first.
    Rational(BigRational, BigRational),
}

const SQUARE_TRIAL_LIMIT: u64 = 1_000_000;

/// Splits `d > 0` as `d = f² · core`.
fn square_split(d: &BigInt) -> (BigInt, BigInt) {
    let mut rest = d.clone();
    let mut outside = BigInt::one();
    let mut core = BigInt::one();
    let mut p: u64 = 2;
    while p <= SQUARE_TRIAL_LIMIT {
        let pb = BigInt::from(p);
        if &pb * &pb > rest {
            break;
        }
        let mut exponent = 0u32;
        while (&rest % &pb).is_zero() {
            rest /= &pb;
            exponent += 1;
        }
        if exponent > 0 {
            outside *= pb.pow(exponent / 2);
            if exponent % 2 == 1 {
                core *= &pb;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > BigInt::one() {
        let r = rest.sqrt();
        if &r * &r == rest {
            outside *= r;
        } else {
            core *= rest;
        }
    }
    (outside, core)
}

impl QuadSurd {
    /// Builds `a + b√radicand`, rejecting non-positive and perfect-square radicands.
    pub fn new(a: BigRational, b: BigRational, radicand: BigInt) -> Result<Self, ExactError> {
        if !radicand.is_positive() {
            return Err(ExactError::BadRadicand {
                radicand,
                reason: "must be positive",
            });
        }
        let (outside, core) = square_split(&radicand);
        if core.is_one() {
            return Err(ExactError::BadRadicand {
                radicand,
                reason: "is a perfect square",
            });
        }
        Ok(QuadSurd {
            a,
            b: b * BigRational::from_integer(outside),
            radicand: core,
        })
    }

    /// The rational `value` viewed inside `Q(√radicand)`.
    pub fn from_rational(value: BigRational, radicand: BigInt) -> Result<Self, ExactError> {
        Self::new(value, BigRational::zero(), radicand)
    }

    pub fn zero_in(radicand: BigInt) -> Result<Self, ExactError> {
        Self::from_rational(BigRational::zero(), radicand)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn surd_part(&self) -> &BigRational {
        &self.b
    }

    pub fn radicand(&self) -> &BigInt {
        &self.radicand
    }

    /// Builds a rational inside this element's field.
    pub fn lift(&self, value: BigRational) -> QuadSurd {
        QuadSurd {
            a: value,
            b: BigRational::zero(),
            radicand: self.radicand.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn conjugate(&self) -> QuadSurd {
        QuadSurd {
            a: self.a.clone(),
            b: -self.b.clone(),
            radicand: self.radicand.clone(),
        }
    }

    /// Field norm `a² − b²D`; zero only for the zero element.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * BigRational::from_integer(self.radicand.clone())
    }

    pub fn trace(&self) -> BigRational {
        &self.a + &self.a
    }

    pub fn inverse(&self) -> Option<QuadSurd> {
        if self.is_zero() {
            return None;
        }
        let norm = self.norm();
        let conj = self.conjugate();
        Some(QuadSurd {
            a: conj.a / &norm,
            b: conj.b / norm,
            radicand: conj.radicand,
        })
    }

    pub fn pow(&self, exponent: u32) -> QuadSurd {
        let mut result = self.lift(BigRational::one());
        let mut base = self.clone();
        let mut e = exponent;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        result
    }

    /// Exact sign of the real number `a + b√D`.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&BigRational::zero());
        let sb = self.b.cmp(&BigRational::zero());
        match (sa, sb) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (x, y) if x == y => x,
            // opposite signs: compare a² against b²D
            (sa, _) => {
                let a2 = &self.a * &self.a;
                let b2d = &self.b * &self.b * BigRational::from_integer(self.radicand.clone());
                match a2.cmp(&b2d) {
                    Ordering::Greater => sa,
                    Ordering::Less => sa.reverse(),
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    /// Approximation within `2^-(precision_bits-2)` of the true value.
    pub fn to_hp(&self, precision_bits: usize) -> Result<HpFloat, ExactError> {
        surd_to_float(self, precision_bits)
    }

    pub fn to_f64(&self) -> f64 {
        surd_to_float(self, 64)
            .map(|v| v.to_f64())
            .unwrap_or(f64::NAN)
    }

    fn radicand_for(&self, other: &QuadSurd) -> BigInt {
        if self.radicand == other.radicand || other.b.is_zero() {
            self.radicand.clone()
        } else if self.b.is_zero() {
            other.radicand.clone()
        } else {
            panic!(
                "quadratic surds from different fields: sqrt({}) and sqrt({})",
                self.radicand, other.radicand
            )
        }
    }
}

/// Roots of `x² − n·x + m`.
pub fn quad_roots(n: i64, m: i64) -> Result<QuadRoots, ExactError> {
    let n_big = BigInt::from(n);
    let disc = &n_big * &n_big - BigInt::from(4) * BigInt::from(m);
    if !disc.is_positive() {
        return Err(ExactError::NonPositiveDiscriminant {
            n,
            m,
            discriminant: disc,
        });
    }
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let root = disc.sqrt();
    if &root * &root == disc {
        let hi = BigRational::new(&n_big + &root, BigInt::from(2));
        let lo = BigRational::new(&n_big - &root, BigInt::from(2));
        return Ok(QuadRoots::Rational(hi, lo));
    }
    let beta = QuadSurd::new(BigRational::from_integer(n_big) * &half, half, disc)?;
    let beta_prime = beta.conjugate();
    Ok(QuadRoots::Irrational { beta, beta_prime })
}

/// Fixed-point evaluation of `a + b√D` with an error below `2^-(precision_bits-2)`.
///
/// `b√D` is taken from an exact integer square root scaled by `2^w`
/// (`w = precision_bits + 8`), then the rational approximant is rounded once
/// at a precision wide enough to cover its integer part.
pub fn surd_to_float(x: &QuadSurd, precision_bits: usize) -> Result<HpFloat, ExactError> {
    if precision_bits < 53 {
        return Err(ExactError::PrecisionTooLow(precision_bits));
    }
    if x.is_zero() {
        return Ok(HpFloat::zero(precision_bits));
    }
    let guard = precision_bits + 8;
    let bn = x.b.numer().abs();
    let bd = x.b.denom().clone();
    let scaled = &bn * &bn * &x.radicand * (BigInt::one() << (2 * guard));
    let root = scaled.sqrt();
    let mut surd = BigRational::new(root, bd << guard);
    if x.b.is_negative() {
        surd = -surd;
    }
    let approx = &x.a + surd;
    let int_bits = approx.abs().ceil().to_integer().bits() as usize;
    let working = guard + int_bits + 2;
    let value = HpFloat::from_rational(&approx, working);
    Ok(value)
}

impl PartialEq for QuadSurd {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a
            && self.b == other.b
            && (self.b.is_zero() || self.radicand == other.radicand)
    }
}

impl Eq for QuadSurd {}

impl PartialOrd for QuadSurd {
    /// `None` for irrational elements of different fields.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.radicand != other.radicand && !self.b.is_zero() && !other.b.is_zero() {
            return None;
        }
        Some((self - other).signum())
    }
}

impl fmt::Display for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let sign = if self.b.is_negative() { '-' } else { '+' };
        let mag = self.b.abs();
        if mag.is_one() {
            write!(f, "{}{}sqrt({})", self.a, sign, self.radicand)
        } else {
            write!(f, "{}{}({})*sqrt({})", self.a, sign, mag, self.radicand)
        }
    }
}

impl<'a> Add<&'a QuadSurd> for &'a QuadSurd {
    type Output = QuadSurd;
    fn add(self, rhs: &'a QuadSurd) -> QuadSurd {
        let radicand = self.radicand_for(rhs);
        QuadSurd {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
            radicand,
        }
    }
}

impl<'a> Sub<&'a QuadSurd> for &'a QuadSurd {
    type Output = QuadSurd;
    fn sub(self, rhs: &'a QuadSurd) -> QuadSurd {
        let radicand = self.radicand_for(rhs);
        QuadSurd {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
            radicand,
        }
    }
}

impl<'a> Mul<&'a QuadSurd> for &'a QuadSurd {
    type Output = QuadSurd;
    fn mul(self, rhs: &'a QuadSurd) -> QuadSurd {
        let radicand = self.radicand_for(rhs);
        let d = BigRational::from_integer(radicand.clone());
        QuadSurd {
            a: &self.a * &rhs.a + &self.b * &rhs.b * d,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
            radicand,
        }
    }
}

impl<'a> Div<&'a QuadSurd> for &'a QuadSurd {
    type Output = QuadSurd;
    /// Panics on division by zero.
    fn div(self, rhs: &'a QuadSurd) -> QuadSurd {
        let inv = rhs.inverse().expect("division by zero quadratic surd");
        self * &inv
    }
}

impl<'a> Mul<&'a BigRational> for &'a QuadSurd {
    type Output = QuadSurd;
    fn mul(self, rhs: &'a BigRational) -> QuadSurd {
        QuadSurd {
            a: &self.a * rhs,
            b: &self.b * rhs,
            radicand: self.radicand.clone(),
        }
    }
}

impl Neg for &QuadSurd {
    type Output = QuadSurd;
    fn neg(self) -> QuadSurd {
        QuadSurd {
            a: -self.a.clone(),
            b: -self.b.clone(),
            radicand: self.radicand.clone(),
        }
    }
}

macro_rules! owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for QuadSurd {
            type Output = QuadSurd;
            fn $method(self, rhs: QuadSurd) -> QuadSurd {
                $trait::$method(&self, &rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl Neg for QuadSurd {
    type Output = QuadSurd;
    fn neg(self) -> QuadSurd {
        -&self
    }
}
