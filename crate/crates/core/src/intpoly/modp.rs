//! Polynomials over a prime field `F_p` with `p < 2^32`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::Rng;

use super::IntPoly;

/// Ascending coefficients in `[0, p)`, trailing zeros trimmed.
pub(crate) type Fp = Vec<u64>;

#[derive(Clone, Copy, Debug)]
pub(crate) struct Field {
    pub p: u64,
}

impl Field {
    pub fn new(p: u64) -> Self {
        debug_assert!(p < (1 << 32));
        Field { p }
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    #[cfg(test)]
    fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }

    pub fn inv(&self, a: u64) -> u64 {
        let (g, x, _) = ext_gcd_i128(a as i128, self.p as i128);
        assert_eq!(g, 1, "{a} is not invertible mod {}", self.p);
        x.rem_euclid(self.p as i128) as u64
    }

    pub fn reduce(&self, f: &IntPoly) -> Fp {
        let pb = BigInt::from(self.p);
        let mut out: Fp = f
            .coeffs()
            .iter()
            .map(|c| c.mod_floor(&pb).to_u64().expect("residue fits"))
            .collect();
        trim(&mut out);
        out
    }

    pub fn monic(&self, f: &Fp) -> Fp {
        let lc = *f.last().expect("nonzero polynomial");
        let inv = self.inv(lc);
        f.iter().map(|&c| self.mul(c, inv)).collect()
    }

    #[cfg(test)]
    pub fn add_poly(&self, a: &Fp, b: &Fp) -> Fp {
        let mut out = vec![0; a.len().max(b.len())];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.add(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0));
        }
        trim(&mut out);
        out
    }

    pub fn sub_poly(&self, a: &Fp, b: &Fp) -> Fp {
        let mut out = vec![0; a.len().max(b.len())];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.sub(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0));
        }
        trim(&mut out);
        out
    }

    pub fn mul_poly(&self, a: &Fp, b: &Fp) -> Fp {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut acc = vec![0u128; a.len() + b.len() - 1];
        let p = self.p as u128;
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                acc[i + j] = (acc[i + j] + x as u128 * y as u128) % p;
            }
        }
        let mut out: Fp = acc.into_iter().map(|c| c as u64).collect();
        trim(&mut out);
        out
    }

    pub fn divrem(&self, a: &Fp, b: &Fp) -> (Fp, Fp) {
        assert!(!b.is_empty(), "division by zero polynomial mod p");
        if a.len() < b.len() {
            return (Vec::new(), a.clone());
        }
        let inv = self.inv(*b.last().expect("nonzero"));
        let db = b.len() - 1;
        let mut rem = a.clone();
        let mut quot = vec![0; a.len() - db];
        for i in (0..quot.len()).rev() {
            let top = rem[i + db];
            if top == 0 {
                continue;
            }
            let q = self.mul(top, inv);
            quot[i] = q;
            for (j, &c) in b.iter().enumerate() {
                rem[i + j] = self.sub(rem[i + j], self.mul(q, c));
            }
        }
        trim(&mut rem);
        trim(&mut quot);
        (quot, rem)
    }

    pub fn rem(&self, a: &Fp, b: &Fp) -> Fp {
        self.divrem(a, b).1
    }

    /// Monic gcd (empty when both inputs are zero).
    pub fn gcd(&self, a: &Fp, b: &Fp) -> Fp {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_empty() {
            let r = self.rem(&x, &y);
            x = y;
            y = r;
        }
        if x.is_empty() {
            x
        } else {
            self.monic(&x)
        }
    }

    /// `(g, s, t)` with `s·a + t·b = g` and `g` monic.
    pub fn ext_gcd(&self, a: &Fp, b: &Fp) -> (Fp, Fp, Fp) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1): (Fp, Fp) = (vec![1], Vec::new());
        let (mut t0, mut t1): (Fp, Fp) = (Vec::new(), vec![1]);
        while !r1.is_empty() {
            let (q, r) = self.divrem(&r0, &r1);
            let s2 = self.sub_poly(&s0, &self.mul_poly(&q, &s1));
            let t2 = self.sub_poly(&t0, &self.mul_poly(&q, &t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        let inv = self.inv(*r0.last().expect("not both zero"));
        let scale = |v: &Fp| {
            let mut out: Fp = v.iter().map(|&c| self.mul(c, inv)).collect();
            trim(&mut out);
            out
        };
        (scale(&r0), scale(&s0), scale(&t0))
    }

    pub fn derivative(&self, f: &Fp) -> Fp {
        let mut out: Fp = f
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| self.mul(c, i as u64 % self.p))
            .collect();
        trim(&mut out);
        out
    }

    /// `base^e mod modulus`.
    pub fn powmod(&self, base: &Fp, e: &BigUint, modulus: &Fp) -> Fp {
        let mut result: Fp = vec![1];
        result = self.rem(&result, modulus);
        let b = self.rem(base, modulus);
        for i in (0..e.bits()).rev() {
            result = self.rem(&self.mul_poly(&result, &result), modulus);
            if e.bit(i) {
                result = self.rem(&self.mul_poly(&result, &b), modulus);
            }
        }
        result
    }

    pub fn is_squarefree(&self, f: &Fp) -> bool {
        let d = self.derivative(f);
        !d.is_empty() && self.gcd(f, &d).len() == 1
    }

    /// Distinct-degree factorization of a monic squarefree `f`:
    /// pairs `(g, d)` where `g` is the product of all irreducible factors of degree `d`.
    pub fn distinct_degree(&self, f: &Fp) -> Vec<(Fp, usize)> {
        let mut out = Vec::new();
        let mut rest = f.clone();
        let x: Fp = vec![0, 1];
        let pb = BigUint::from(self.p);
        let mut h = self.rem(&x, &rest);
        let mut d = 0;
        while rest.len() > 1 {
            d += 1;
            if 2 * d > rest.len() - 1 {
                let deg = rest.len() - 1;
                out.push((rest, deg));
                break;
            }
            h = self.powmod(&h, &pb, &rest);
            let g = self.gcd(&rest, &self.sub_poly(&h, &x));
            if g.len() > 1 {
                rest = self.divrem(&rest, &g).0;
                h = self.rem(&h, &rest);
                out.push((g, d));
            }
        }
        out
    }

    /// Cantor–Zassenhaus splitting of a monic product of irreducibles of degree `d`.
    pub fn equal_degree<R: Rng>(&self, f: &Fp, d: usize, rng: &mut R) -> Vec<Fp> {
        let n = f.len() - 1;
        if n == d {
            return vec![f.clone()];
        }
        let exponent = (BigUint::from(self.p).pow(d as u32) - 1u32) / 2u32;
        loop {
            let mut a: Fp = (0..n).map(|_| rng.gen_range(0..self.p)).collect();
            trim(&mut a);
            if a.len() < 2 {
                continue;
            }
            let mut g = self.gcd(f, &a);
            if g.len() == 1 {
                let b = self.powmod(&a, &exponent, f);
                g = self.gcd(f, &self.sub_poly(&b, &vec![1]));
            }
            if g.len() > 1 && g.len() < f.len() {
                let other = self.divrem(f, &g).0;
                let mut parts = self.equal_degree(&g, d, rng);
                parts.extend(self.equal_degree(&self.monic(&other), d, rng));
                return parts;
            }
        }
    }

    /// Complete factorization of a monic squarefree polynomial into monic irreducibles.
    pub fn factor_squarefree<R: Rng>(&self, f: &Fp, rng: &mut R) -> Vec<Fp> {
        let mut out = Vec::new();
        for (g, d) in self.distinct_degree(f) {
            out.extend(self.equal_degree(&g, d, rng));
        }
        out.sort();
        out
    }
}

pub(crate) fn trim(v: &mut Fp) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn ext_gcd_i128(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd_i128(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Small primes by trial division, for modulus selection.
pub(crate) fn is_small_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}
