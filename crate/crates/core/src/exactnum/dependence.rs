//! Multiplicative dependence of rationals via prime-exponent vectors.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::rational::in_open_unit_interval;
use super::ExactError;

const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;
const RHO_ITERATIONS: u64 = 1 << 20;
const RHO_CONSTANTS: u64 = 8;

/// `x = base^kx` and `y = base^ky` with `gcd(kx, ky) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dependence {
    #[serde(with = "super::serde_rational")]
    pub base: BigRational,
    pub kx: u64,
    pub ky: u64,
}

/// Prime factorization of `n ≥ 1` as `prime → exponent`.
///
/// Trial division up to 10⁶, then Brent's variant of Pollard's rho on each
/// composite cofactor. A cofactor that rho cannot split within its budget is
/// reported as [`ExactError::Unknown`].
pub fn factor_integer(n: &BigUint) -> Result<BTreeMap<BigUint, u32>, ExactError> {
    let mut factors = BTreeMap::new();
    let mut rest = n.clone();
    if rest.is_zero() {
        return Err(ExactError::Unknown {
            value: "0".into(),
            reason: "zero has no factorization",
        });
    }
    let mut p = 2u64;
    while p <= TRIAL_DIVISION_LIMIT {
        if let Some(small) = rest.to_u64() {
            if p.saturating_mul(p) > small {
                break;
            }
        }
        let pb = BigUint::from(p);
        let mut exponent = 0;
        while (&rest % &pb).is_zero() {
            rest /= &pb;
            exponent += 1;
        }
        if exponent > 0 {
            *factors.entry(pb).or_insert(0) += exponent;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !rest.is_one() {
        let mut stack = vec![rest];
        while let Some(c) = stack.pop() {
            if is_probable_prime(&c) {
                *factors.entry(c).or_insert(0) += 1;
                continue;
            }
            let d = pollard_brent(&c).ok_or_else(|| ExactError::Unknown {
                value: c.to_string(),
                reason: "composite cofactor could not be split",
            })?;
            let other = &c / &d;
            stack.push(d);
            stack.push(other);
        }
    }
    Ok(factors)
}

/// Miller–Rabin with the first twelve prime bases (deterministic below 3.3·10²⁴).
pub fn is_probable_prime(n: &BigUint) -> bool {
    const BASES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    let two = BigUint::from(2u32);
    if n < &two {
        return false;
    }
    for b in BASES {
        let b = BigUint::from(b);
        if n == &b {
            return true;
        }
        if (n % &b).is_zero() {
            return false;
        }
    }
    let n_minus_one = n - 1u32;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    'bases: for b in BASES {
        let mut x = BigUint::from(b).modpow(&d, n);
        if x.is_one() || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_one {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn pollard_brent(n: &BigUint) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    for c in 1..=RHO_CONSTANTS {
        let c = BigUint::from(c);
        let step = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r: u64 = 1;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut spent = 0u64;
        let batch = 64u64;
        while g.is_one() && spent < RHO_ITERATIONS {
            x = y.clone();
            for _ in 0..r {
                y = step(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..batch.min(r - k) {
                    y = step(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += batch;
                spent += batch;
            }
            r *= 2;
        }
        if g == *n {
            // batch overshot; back up one step at a time
            loop {
                ys = step(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if !g.is_one() && g != *n {
            return Some(g);
        }
    }
    None
}

fn exponent_vector(value: &BigRational) -> Result<BTreeMap<BigUint, i64>, ExactError> {
    let mut vector = BTreeMap::new();
    let numer = value.numer().abs().to_biguint().expect("absolute value");
    let denom = value.denom().to_biguint().expect("positive denominator");
    for (p, e) in factor_integer(&numer)? {
        *vector.entry(p).or_insert(0) += i64::from(e);
    }
    for (p, e) in factor_integer(&denom)? {
        *vector.entry(p).or_insert(0) -= i64::from(e);
    }
    vector.retain(|_, e| *e != 0);
    Ok(vector)
}

/// Finds `r` with `x = r^kx`, `y = r^ky` and coprime `kx, ky`, or `None` when
/// `x` and `y` are multiplicatively independent.
///
/// The answer exists iff the prime-exponent vectors of `x` and `y` are parallel.
pub fn multiplicative_dependence(
    x: &BigRational,
    y: &BigRational,
) -> Result<Option<Dependence>, ExactError> {
    for v in [x, y] {
        if !in_open_unit_interval(v) {
            return Err(ExactError::OutOfUnitInterval(v.to_string()));
        }
    }
    let vx = exponent_vector(x)?;
    let vy = exponent_vector(y)?;
    if vx.len() != vy.len() || vx.keys().ne(vy.keys()) {
        return Ok(None);
    }
    // values below one have a nonempty vector
    let (p0, ex0) = vx.iter().next().expect("x < 1");
    let ey0 = vy[p0];
    if (ex0.signum()) != ey0.signum() {
        return Ok(None);
    }
    let g = ex0.unsigned_abs().gcd(&ey0.unsigned_abs()) as i64;
    let kx = ex0.abs() / g;
    let ky = ey0.abs() / g;
    for (p, ex) in &vx {
        if ex * ky != vy[p] * kx {
            return Ok(None);
        }
    }
    let mut numer = BigInt::one();
    let mut denom = BigInt::one();
    for (p, ex) in &vx {
        let e = ex / kx;
        let pb = BigInt::from(p.clone());
        if e > 0 {
            numer *= Pow::pow(&pb, e as u64);
        } else {
            denom *= Pow::pow(&pb, (-e) as u64);
        }
    }
    Ok(Some(Dependence {
        base: BigRational::new(numer, denom),
        kx: kx as u64,
        ky: ky as u64,
    }))
}
