use num_bigint::BigUint;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};

/// Witness `base^exponent = m` with `exponent ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerfectPower {
    #[serde(rename = "a", with = "super::serde_natural")]
    pub base: BigUint,
    #[serde(rename = "i")]
    pub exponent: u32,
}

/// Decides whether `m = a^i` for some `i ≥ 2`.
///
/// The witness uses the smallest base, which is the one with the largest
/// exponent, so exponents are tried from `⌊log₂ m⌋` downwards. `1` is
/// reported as `1²`; `0` is not a positive integer and yields `None`.
pub fn is_perfect_power(m: &BigUint) -> Option<PerfectPower> {
    if m.is_zero() {
        return None;
    }
    if m.is_one() {
        return Some(PerfectPower {
            base: BigUint::one(),
            exponent: 2,
        });
    }
    let max_exponent = (m.bits() - 1) as u32;
    (2..=max_exponent).rev().find_map(|i| {
        let root = m.nth_root(i);
        (Pow::pow(&root, i) == *m).then_some(PerfectPower {
            base: root,
            exponent: i,
        })
    })
}
