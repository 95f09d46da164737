//! Necessary-condition verdicts for Lipschitz equivalence with a dust-like
//! set, and the polynomial consistency check for a concrete candidate.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{
    is_perfect_power, multiplicative_dependence, ExactError, HpFloat, PerfectPower,
};
use crate::ifs::{dimension_with_precision, DustIfsSpec, IfsError, DEFAULT_PRECISION_BITS};
use crate::intpoly::{factor, family_poly, gcd_poly, moran_poly, IntPoly, PolyError};

pub const DEFAULT_KMAX: usize = 8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ObstructionError {
    #[error("(n, m) = ({n}, {m}) is outside the class, which needs 1 <= m <= n-2")]
    OutOfClass { n: usize, m: usize },
    #[error("kmax must be at least 2, got {0}")]
    BadKmax(usize),
    #[error("x^{} - {n}x^{k} + {m} factors although {m} is not a perfect power", 2 * k)]
    IrreducibilityViolated { n: usize, m: usize, k: usize },
    #[error("exponent {0} does not give an integer power of the common base")]
    BadExponent(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Ifs(#[from] IfsError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// `m` is not a perfect power: no dust-like set can be Lipschitz equivalent.
    Obstructed,
    /// Some `P(x^k)` with `2 ≤ k ≤ kmax` is reducible.
    NecessaryConditionMet,
    /// `m` is a perfect power but no `k ≤ kmax` gave a reducible `P(x^k)`.
    NecessaryConditionOpen,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducibleK {
    pub k: usize,
    /// Irreducible factors of `x^(2k) − n·x^k + m`, repeated by multiplicity.
    pub factors: Vec<IntPoly>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub n: usize,
    pub m: usize,
    pub kmax: usize,
    pub perfect_power: Option<PerfectPower>,
    pub reducible_ks: Vec<ReducibleK>,
    pub verdict: Verdict,
}

fn check_class(n: usize, m: usize) -> Result<(), ObstructionError> {
    if m >= 1 && n >= 3 && m <= n - 2 {
        Ok(())
    } else {
        Err(ObstructionError::OutOfClass { n, m })
    }
}

fn factor_family(
    n: usize,
    m: usize,
    ks: Vec<usize>,
) -> Result<Vec<(usize, Vec<IntPoly>)>, ObstructionError> {
    ks.into_par_iter()
        .map(|k| {
            let f = factor(&family_poly(n as i64, m as i64, k))?;
            let factors = f
                .factors
                .into_iter()
                .flat_map(|(p, e)| std::iter::repeat(p).take(e as usize))
                .collect();
            Ok((k, factors))
        })
        .collect()
}

/// Verdict for `(n, m)` with reducibility evidence for `2 ≤ k ≤ kmax`.
///
/// When `m` is not a perfect power every `P(x^k)` is irreducible; the
/// factorizer is run on `k ≤ kmax` anyway and any disagreement is reported
/// as [`ObstructionError::IrreducibilityViolated`].
pub fn theorem_verdict(
    n: usize,
    m: usize,
    kmax: usize,
) -> Result<ObstructionReport, ObstructionError> {
    check_class(n, m)?;
    if kmax < 2 {
        return Err(ObstructionError::BadKmax(kmax));
    }
    let perfect_power = is_perfect_power(&BigUint::from(m));
    let first = if perfect_power.is_none() { 1 } else { 2 };
    let factored = factor_family(n, m, (first..=kmax).collect())?;
    let reducible_ks: Vec<ReducibleK> = factored
        .into_iter()
        .filter(|(_, factors)| factors.len() > 1)
        .map(|(k, factors)| ReducibleK { k, factors })
        .collect();
    let verdict = match (&perfect_power, reducible_ks.first()) {
        (None, Some(r)) => return Err(ObstructionError::IrreducibilityViolated { n, m, k: r.k }),
        (None, None) => Verdict::Obstructed,
        (Some(_), Some(_)) => Verdict::NecessaryConditionMet,
        (Some(_), None) => Verdict::NecessaryConditionOpen,
    };
    Ok(ObstructionReport {
        n,
        m,
        kmax,
        perfect_power,
        reducible_ks,
        verdict,
    })
}

/// Which `m` to visit for each `n` in a sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MRule {
    /// Every `m` in `1..=n-2`.
    All,
    /// Only the listed values that lie in the class.
    Values(Vec<usize>),
}

/// Reports for every class member `(n, m)` with `n_min ≤ n ≤ n_max`, ordered
/// by `n` then `m`.
pub fn sweep(
    n_min: usize,
    n_max: usize,
    rule: &MRule,
    kmax: usize,
) -> Result<Vec<ObstructionReport>, ObstructionError> {
    let pairs: Vec<(usize, usize)> = (n_min.max(3)..=n_max)
        .flat_map(|n| (1..=n - 2).map(move |m| (n, m)))
        .filter(|(_, m)| match rule {
            MRule::All => true,
            MRule::Values(v) => v.contains(m),
        })
        .collect();
    pairs
        .into_par_iter()
        .map(|(n, m)| theorem_verdict(n, m, kmax))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RuledOutReason {
    /// Some ratio is multiplicatively independent of `λ`.
    IncommensurableRatios,
    /// `P̄` and `Q̄` have no common root, so the dimensions differ.
    DimensionMismatch,
    /// `P̄` and `Q̄` share a factor, but not the one vanishing at `β^(1/k)`.
    WrongFactor,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Conclusion {
    RuledOut(RuledOutReason),
    NotRuledOut,
}

/// Outcome of comparing `E` with a concrete dust-like system. The
/// polynomial fields are absent when the ratios are incommensurable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceCheck {
    pub k: Option<u64>,
    pub exponents: Option<Vec<u64>>,
    pub pbar: Option<IntPoly>,
    pub qbar: Option<IntPoly>,
    pub gcd: Option<IntPoly>,
    pub shared_root: bool,
    pub conclusion: Conclusion,
}

impl EquivalenceCheck {
    fn incommensurable() -> Self {
        EquivalenceCheck {
            k: None,
            exponents: None,
            pbar: None,
            qbar: None,
            gcd: None,
            shared_root: false,
            conclusion: Conclusion::RuledOut(RuledOutReason::IncommensurableRatios),
        }
    }
}

/// Each ratio as a rational power of `λ`, or `None` if one is independent of it.
fn exponents_of_lambda(
    lambda: &BigRational,
    dust: &DustIfsSpec,
) -> Result<Option<Vec<BigRational>>, ObstructionError> {
    let relative = |x: &BigRational| -> Result<Option<BigRational>, ObstructionError> {
        if x == lambda {
            return Ok(Some(BigRational::one()));
        }
        Ok(multiplicative_dependence(lambda, x)?
            .map(|d| BigRational::new(BigInt::from(d.ky), BigInt::from(d.kx))))
    };
    match dust {
        DustIfsSpec::ExplicitRatios { ratios } => ratios.iter().map(relative).collect(),
        DustIfsSpec::LambdaExponents { base, exponents } => {
            Ok(relative(base)?.map(|scale| exponents.iter().map(|e| e * &scale).collect()))
        }
    }
}

fn horner(p: &IntPoly, x: &HpFloat, bits: usize) -> HpFloat {
    p.coeffs().iter().rev().fold(HpFloat::zero(bits), |acc, c| {
        &(&acc * x) + &HpFloat::from_int(c, bits)
    })
}

pub fn dust_candidate_check(
    n: usize,
    m: usize,
    lambda: &BigRational,
    dust: &DustIfsSpec,
) -> Result<EquivalenceCheck, ObstructionError> {
    dust_candidate_check_with(n, m, lambda, dust, DEFAULT_PRECISION_BITS)
}

/// Writes `λ = r^k` and `r_j = r^(k_j)`, then intersects `P̄ = P(x^k)` with
/// the Moran polynomial `Q̄`. A common factor is kept only if it vanishes at
/// `β^(1/k)`, evaluated at `precision_bits`.
pub fn dust_candidate_check_with(
    n: usize,
    m: usize,
    lambda: &BigRational,
    dust: &DustIfsSpec,
    precision_bits: usize,
) -> Result<EquivalenceCheck, ObstructionError> {
    check_class(n, m)?;
    let bits = precision_bits.max(DEFAULT_PRECISION_BITS);
    let dim = dimension_with_precision(n, m, lambda, bits)?;
    dust.check()?;
    let Some(relative) = exponents_of_lambda(lambda, dust)? else {
        return Ok(EquivalenceCheck::incommensurable());
    };
    let lcm = relative
        .iter()
        .fold(BigInt::one(), |acc, e| acc.lcm(e.denom()));
    let as_u64 = |v: &BigInt| {
        v.to_u64()
            .ok_or_else(|| ObstructionError::BadExponent(v.to_string()))
    };
    let k = as_u64(&lcm)?;
    let mut exponents = relative
        .iter()
        .map(|e| as_u64(&(e * BigRational::from_integer(lcm.clone())).to_integer()))
        .collect::<Result<Vec<u64>, _>>()?;
    exponents.sort_unstable();

    let pbar = family_poly(n as i64, m as i64, k as usize);
    let qbar = moran_poly(&exponents);
    let g = gcd_poly(&pbar, &qbar);
    let constant = g.degree().map_or(true, |d| d == 0);
    let (shared_root, conclusion) = if constant {
        (
            false,
            Conclusion::RuledOut(RuledOutReason::DimensionMismatch),
        )
    } else {
        let root = dim.beta.to_hp(bits)?.nth_root(k);
        let value = horner(&g, &root, bits).abs().to_f64();
        let norm = g.norm1().to_f64().unwrap_or(f64::INFINITY);
        let shared = value < 1e-20 * (1.0 + norm);
        let conclusion = if shared {
            Conclusion::NotRuledOut
        } else {
            Conclusion::RuledOut(RuledOutReason::WrongFactor)
        };
        (shared, conclusion)
    };
    Ok(EquivalenceCheck {
        k: Some(k),
        exponents: Some(exponents),
        pbar: Some(pbar),
        qbar: Some(qbar),
        gcd: Some(g),
        shared_root,
        conclusion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn strings(ps: &[IntPoly]) -> Vec<String> {
        ps.iter().map(IntPoly::to_string).collect()
    }

    #[test]
    fn verdict_examples() {
        let r = theorem_verdict(5, 3, 6).unwrap();
        assert_eq!(r.perfect_power, None);
        assert_eq!(r.verdict, Verdict::Obstructed);
        assert!(r.reducible_ks.is_empty());

        let r = theorem_verdict(3, 1, 4).unwrap();
        assert_eq!(r.perfect_power.as_ref().map(|p| p.exponent), Some(2));
        assert_eq!(r.verdict, Verdict::NecessaryConditionMet);
        let two = r.reducible_ks.iter().find(|x| x.k == 2).unwrap();
        assert_eq!(strings(&two.factors), vec!["x^2-x-1", "x^2+x-1"]);

        assert_eq!(
            theorem_verdict(4, 2, 6).unwrap().verdict,
            Verdict::Obstructed
        );
    }

    #[test]
    fn verdict_errors() {
        assert_eq!(
            theorem_verdict(3, 2, 4),
            Err(ObstructionError::OutOfClass { n: 3, m: 2 })
        );
        assert_eq!(
            theorem_verdict(5, 0, 4),
            Err(ObstructionError::OutOfClass { n: 5, m: 0 })
        );
        assert_eq!(theorem_verdict(5, 1, 1), Err(ObstructionError::BadKmax(1)));
    }

    #[test]
    fn report_json_shape() {
        let r = theorem_verdict(3, 1, 2).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(
            v,
            serde_json::json!({
                "n": 3, "m": 1, "kmax": 2,
                "perfect_power": {"a": 1, "i": 2},
                "reducible_ks": [{"k": 2, "factors": ["x^2-x-1", "x^2+x-1"]}],
                "verdict": "NecessaryConditionMet"
            })
        );
        let back: ObstructionReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
        let obstructed = serde_json::to_value(theorem_verdict(5, 2, 3).unwrap()).unwrap();
        assert_eq!(obstructed["perfect_power"], serde_json::Value::Null);
    }

    #[test]
    fn sweep_examples() {
        let all = sweep(3, 6, &MRule::All, 8).unwrap();
        assert_eq!(all.len(), 10);
        for r in &all {
            if [2, 3].contains(&r.m) {
                assert_eq!(r.verdict, Verdict::Obstructed);
            }
        }
        let pairs: Vec<_> = all.iter().map(|r| (r.n, r.m)).collect();
        let mut sorted = pairs.clone();
        sorted.sort();
        assert_eq!(pairs, sorted);
        assert_eq!(sweep(3, 3, &MRule::All, 8).unwrap().len(), 1);
        assert!(sweep(5, 4, &MRule::All, 8).unwrap().is_empty());
        let only_ones = sweep(3, 7, &MRule::Values(vec![1]), 4).unwrap();
        assert_eq!(only_ones.len(), 5);
    }

    #[test]
    fn dust_examples() {
        let lambda = rat(1, 4);
        let half = DustIfsSpec::LambdaExponents {
            base: lambda.clone(),
            exponents: vec![rat(1, 1), rat(1, 2)],
        };
        let c = dust_candidate_check(3, 1, &lambda, &half).unwrap();
        assert_eq!(c.k, Some(2));
        assert_eq!(c.pbar.as_ref().unwrap().to_string(), "x^4-3x^2+1");
        assert_eq!(c.qbar.as_ref().unwrap().to_string(), "x^2-x-1");
        assert_eq!(c.gcd.as_ref().unwrap().to_string(), "x^2-x-1");
        assert!(c.shared_root);
        assert_eq!(c.conclusion, Conclusion::NotRuledOut);

        let halves = DustIfsSpec::ExplicitRatios {
            ratios: vec![rat(1, 2), rat(1, 2)],
        };
        let c = dust_candidate_check(3, 1, &lambda, &halves).unwrap();
        assert_eq!((c.k, c.exponents.clone()), (Some(2), Some(vec![1, 1])));
        assert_eq!(c.qbar.as_ref().unwrap().to_string(), "x-2");
        assert_eq!(c.gcd.as_ref().unwrap().to_string(), "1");
        assert_eq!(
            c.conclusion,
            Conclusion::RuledOut(RuledOutReason::DimensionMismatch)
        );

        let mixed = DustIfsSpec::ExplicitRatios {
            ratios: vec![rat(1, 4), rat(1, 6)],
        };
        let c = dust_candidate_check(3, 1, &lambda, &mixed).unwrap();
        assert_eq!(
            c.conclusion,
            Conclusion::RuledOut(RuledOutReason::IncommensurableRatios)
        );
        assert!(c.gcd.is_none());
    }

    #[test]
    fn evaluation_separates_the_factors() {
        // x^4-3x^2+1 = (x^2-x-1)(x^2+x-1); only the first vanishes at β^(1/2) = φ
        let root = crate::ifs::class_roots(3, 1)
            .unwrap()
            .0
            .to_hp(128)
            .unwrap()
            .nth_root(2);
        let first = crate::intpoly::parse_poly("x^2-x-1").unwrap();
        let second = crate::intpoly::parse_poly("x^2+x-1").unwrap();
        assert!(horner(&first, &root, 128).abs().to_f64() < 1e-30);
        assert!(horner(&second, &root, 128).abs().to_f64() > 1.0);
    }

    #[test]
    fn explicit_ratios_matching_the_example() {
        // λ = 1/16 with ratios 1/16 and 1/4 = λ^(1/2)
        let c = dust_candidate_check(
            3,
            1,
            &rat(1, 16),
            &DustIfsSpec::ExplicitRatios {
                ratios: vec![rat(1, 16), rat(1, 4)],
            },
        )
        .unwrap();
        assert_eq!(c.exponents, Some(vec![1, 2]));
        assert_eq!(c.conclusion, Conclusion::NotRuledOut);
    }

    #[test]
    fn infeasible_lambda_is_rejected() {
        let dust = DustIfsSpec::ExplicitRatios {
            ratios: vec![rat(1, 2), rat(1, 2)],
        };
        assert!(matches!(
            dust_candidate_check(3, 1, &rat(1, 2), &dust),
            Err(ObstructionError::Ifs(IfsError::Infeasible { .. }))
        ));
    }
}
