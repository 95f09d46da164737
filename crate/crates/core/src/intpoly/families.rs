use num_bigint::BigInt;
use num_traits::Zero;

use super::IntPoly;

/// `x^(2k) − n·x^k + m`.
pub fn family_poly(n: i64, m: i64, k: usize) -> IntPoly {
    assert!(k >= 1, "family_poly needs k >= 1");
    let mut coeffs = vec![BigInt::zero(); 2 * k + 1];
    coeffs[0] = BigInt::from(m);
    coeffs[k] = BigInt::from(-n);
    coeffs[2 * k] = BigInt::from(1);
    IntPoly::new(coeffs)
}

/// `x^(k_t) − Σ_i x^(k_t − k_i)` for a nondecreasing exponent list.
pub fn moran_poly(exponents: &[u64]) -> IntPoly {
    let top = *exponents.iter().max().expect("at least one exponent") as usize;
    let mut coeffs = vec![BigInt::zero(); top + 1];
    coeffs[top] += 1;
    for &k in exponents {
        assert!(k >= 1, "exponents must be positive");
        coeffs[top - k as usize] -= 1;
    }
    IntPoly::new(coeffs)
}
