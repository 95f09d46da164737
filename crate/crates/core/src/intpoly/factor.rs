//! Factorization over ℤ: squarefree reduction, factoring modulo a small
//! prime, quadratic Hensel lifting and Zassenhaus recombination.

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::modp::{is_small_prime, Field, Fp};
use super::{gcd_poly, IntPoly, PolyError};

pub const DEFAULT_MODULAR_FACTOR_CEILING: usize = 24;

/// `input = unit · content · ∏ factor^multiplicity`, with every factor
/// primitive, irreducible and of positive leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Factorization {
    pub unit: i8,
    #[serde(with = "crate::exactnum::serde_bigint")]
    pub content: BigInt,
    pub factors: Vec<(IntPoly, u32)>,
}

impl Factorization {
    pub fn reconstruct(&self) -> IntPoly {
        let mut acc = IntPoly::constant(&self.content * BigInt::from(self.unit));
        for (f, k) in &self.factors {
            for _ in 0..*k {
                acc = &acc * f;
            }
        }
        acc
    }

    /// Total number of irreducible factors counted with multiplicity.
    pub fn count_with_multiplicity(&self) -> u32 {
        self.factors.iter().map(|(_, k)| k).sum()
    }
}

pub fn factor(p: &IntPoly) -> Result<Factorization, PolyError> {
    factor_with_ceiling(p, DEFAULT_MODULAR_FACTOR_CEILING)
}

/// Like [`factor`], but with an explicit cap on the number of modular
/// factors handed to the exponential recombination step.
pub fn factor_with_ceiling(p: &IntPoly, ceiling: usize) -> Result<Factorization, PolyError> {
    let lc = p.leading().ok_or(PolyError::ZeroPolynomial)?;
    let unit: i8 = if lc.is_negative() { -1 } else { 1 };
    let content = p.content();
    let mut f = p.primitive_part();
    let mut factors = Vec::new();

    let zeros = f.coeffs().iter().take_while(|c| c.is_zero()).count();
    if zeros > 0 {
        factors.push((IntPoly::x(), zeros as u32));
        f = IntPoly::new(f.coeffs()[zeros..].to_vec());
    }

    if f.degree().unwrap_or(0) > 0 {
        let repeated = gcd_poly(&f, &f.derivative());
        let squarefree = f
            .exact_div(&repeated)?
            .expect("gcd divides its argument")
            .primitive_part();
        for g in factor_squarefree(&squarefree, ceiling)? {
            let mut multiplicity = 0;
            while let Some(q) = f.exact_div(&g)? {
                f = q;
                multiplicity += 1;
            }
            debug_assert!(multiplicity > 0);
            factors.push((g, multiplicity));
        }
        debug_assert_eq!(f.degree(), Some(0));
    }

    factors.sort_by(|a, b| a.0.canonical_cmp(&b.0));
    Ok(Factorization {
        unit,
        content,
        factors,
    })
}

/// True iff `p` is primitive and irreducible: a single factor of
/// multiplicity one and unit content.
pub fn is_irreducible(p: &IntPoly) -> Result<bool, PolyError> {
    let fz = factor(p)?;
    Ok(fz.content.is_one() && fz.factors.len() == 1 && fz.factors[0].1 == 1)
}

/// Irreducible factors of a primitive squarefree `f` with positive leading
/// coefficient and `f(0) ≠ 0`.
fn factor_squarefree(f: &IntPoly, ceiling: usize) -> Result<Vec<IntPoly>, PolyError> {
    let n = f.degree().expect("nonzero");
    if n <= 1 {
        return Ok(vec![f.clone()]);
    }
    let lc = f.leading().expect("nonzero").clone();
    let field = choose_prime(f, &lc);
    let p = field.p;
    let reduced = field.monic(&field.reduce(f));
    let mut rng = ChaCha8Rng::seed_from_u64(p ^ ((n as u64) << 32));
    let modular = field.factor_squarefree(&reduced, &mut rng);
    if modular.len() == 1 {
        return Ok(vec![f.clone()]);
    }
    if modular.len() > ceiling {
        return Err(PolyError::TooManyModularFactors {
            count: modular.len(),
            ceiling,
        });
    }

    // lc(f)·(f/lc(g))·g has coefficients below |lc|·2^n·‖f‖₂ for any factor g
    let bound = lc.abs() * (BigInt::one() << n) * f.norm2_ceil();
    let pb = BigInt::from(p);
    let mut modulus = pb.clone();
    let mut doublings = 0u32;
    while modulus <= &bound * 2 {
        modulus = &modulus * &modulus;
        doublings += 1;
    }
    let lifted = lift_tree(f, &modular, field, doublings, &modulus);
    Ok(recombine(f, lifted, &modulus))
}

fn choose_prime(f: &IntPoly, lc: &BigInt) -> Field {
    let n = f.degree().expect("nonzero");
    (5u64..)
        .filter(|&q| is_small_prime(q))
        .map(Field::new)
        .find(|fld| {
            if (lc % BigInt::from(fld.p)).is_zero() {
                return false;
            }
            let r = fld.reduce(f);
            r.len() == n + 1 && fld.is_squarefree(&r)
        })
        .expect("a squarefree prime exists")
}

fn from_fp(v: &Fp) -> IntPoly {
    IntPoly::new(v.iter().map(|&c| BigInt::from(c)).collect())
}

fn reduce(f: &IntPoly, m: &BigInt) -> IntPoly {
    IntPoly::new(f.coeffs().iter().map(|c| c.mod_floor(m)).collect())
}

fn symmetric(f: &IntPoly, m: &BigInt) -> IntPoly {
    let half = m / 2;
    IntPoly::new(
        f.coeffs()
            .iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

/// Division by a monic `h` over ℤ.
fn divrem_monic(a: &IntPoly, h: &IntPoly) -> (IntPoly, IntPoly) {
    debug_assert!(h.is_monic());
    let dh = h.degree().expect("nonzero");
    let mut rem = a.coeffs().to_vec();
    if rem.len() <= dh {
        return (IntPoly::zero(), a.clone());
    }
    let mut quot = vec![BigInt::zero(); rem.len() - dh];
    for i in (0..quot.len()).rev() {
        let q = rem[i + dh].clone();
        if q.is_zero() {
            continue;
        }
        for (j, c) in h.coeffs().iter().enumerate() {
            rem[i + j] -= &q * c;
        }
        quot[i] = q;
    }
    (IntPoly::new(quot), IntPoly::new(rem))
}

/// One quadratic Hensel step: from `f ≡ g·h`, `s·g + t·h ≡ 1 (mod m)` to the
/// same relations modulo `m²`, with `h` monic throughout.
fn hensel_step(
    f: &IntPoly,
    g: &IntPoly,
    h: &IntPoly,
    s: &IntPoly,
    t: &IntPoly,
    m: &BigInt,
) -> (IntPoly, IntPoly, IntPoly, IntPoly) {
    let m2 = m * m;
    let e = reduce(&(f - &(g * h)), &m2);
    let (q, r) = divrem_monic(&reduce(&(s * &e), &m2), h);
    let g_new = reduce(&(&(g + &(t * &e)) + &(&q * g)), &m2);
    let h_new = reduce(&(h + &r), &m2);
    let b = reduce(&(&(&(s * &g_new) + &(t * &h_new)) - &IntPoly::one()), &m2);
    let (c, d) = divrem_monic(&reduce(&(s * &b), &m2), &h_new);
    let s_new = reduce(&(s - &d), &m2);
    let t_new = reduce(&(&(t - &(t * &b)) - &(&c * &g_new)), &m2);
    (g_new, h_new, s_new, t_new)
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.mod_floor(m).extended_gcd(m);
    assert!(e.gcd.is_one(), "leading coefficient not invertible");
    e.x.mod_floor(m)
}

/// Lifts the monic modular factors of `f` to monic factors modulo
/// `p^(2^doublings) = modulus`, splitting the factor list in halves.
fn lift_tree(
    f: &IntPoly,
    parts: &[Fp],
    field: Field,
    doublings: u32,
    modulus: &BigInt,
) -> Vec<IntPoly> {
    let lc = f.leading().expect("nonzero").mod_floor(modulus);
    if parts.len() == 1 {
        let inv = mod_inverse(&lc, modulus);
        return vec![reduce(&f.scale(&inv), modulus)];
    }
    let (left, right) = parts.split_at(parts.len() / 2);
    let product = |ps: &[Fp]| ps.iter().fold(vec![1u64], |acc, q| field.mul_poly(&acc, q));
    let lc_p = (&lc % BigInt::from(field.p)).to_u64().expect("residue");
    let g0: Fp = field.mul_poly(&vec![lc_p], &product(left));
    let h0 = product(right);
    let (one, s0, t0) = field.ext_gcd(&g0, &h0);
    debug_assert_eq!(one, vec![1]);

    let (mut g, mut h, mut s, mut t) = (from_fp(&g0), from_fp(&h0), from_fp(&s0), from_fp(&t0));
    let mut m = BigInt::from(field.p);
    for _ in 0..doublings {
        let f_m2 = reduce(f, &(&m * &m));
        (g, h, s, t) = hensel_step(&f_m2, &g, &h, &s, &t, &m);
        m = &m * &m;
    }
    let mut out = lift_tree(&g, left, field, doublings, modulus);
    out.extend(lift_tree(&h, right, field, doublings, modulus));
    out
}

/// Zassenhaus recombination: tries subsets of the lifted factors in order
/// of size, testing each candidate by exact division.
fn recombine(f: &IntPoly, mut lifted: Vec<IntPoly>, modulus: &BigInt) -> Vec<IntPoly> {
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut size = 1;
    'sizes: while 2 * size <= lifted.len() {
        let lc = rest.leading().expect("nonzero").clone();
        let target_constant = &lc * rest.coeff(0);
        for subset in (0..lifted.len()).combinations(size) {
            let constant = subset.iter().fold(lc.clone(), |acc, &i| {
                (acc * lifted[i].coeff(0)).mod_floor(modulus)
            });
            let constant = symmetric(&IntPoly::constant(constant), modulus).coeff(0);
            if constant.is_zero() || !(&target_constant % &constant).is_zero() {
                continue;
            }
            let candidate = subset
                .iter()
                .fold(IntPoly::constant(lc.clone()), |acc, &i| {
                    reduce(&(&acc * &lifted[i]), modulus)
                });
            let candidate = symmetric(&candidate, modulus).primitive_part();
            if let Some(q) = rest.exact_div(&candidate).expect("nonzero candidate") {
                out.push(candidate);
                rest = q;
                for &i in subset.iter().rev() {
                    lifted.remove(i);
                }
                continue 'sizes;
            }
        }
        size += 1;
    }
    out.push(rest.primitive_part());
    out
}
