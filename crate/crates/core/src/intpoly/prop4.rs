//! Exhaustive search for nonneg-tail multiples of `x^(2q) − n·x^q + m`.
//!
//! A polynomial has the nonneg-tail form when it equals
//! `x^p − Σ_{i<p} b_i x^i` with every `b_i ≥ 0`. The search should come back
//! empty; any hit is a counterexample and is returned to the caller.

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{family_poly, IntPoly, PolyError};

pub const DEFAULT_SEARCH_CEILING: u128 = 1_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Prop4Strategy {
    /// Enumerates the nonneg-tail polynomials and divides each one.
    DividendEnum,
    /// Enumerates monic quotients `U` and inspects `U·P(x^q)`.
    QuotientEnum,
}

#[derive(Clone, Debug)]
pub struct Prop4Config {
    pub q: usize,
    pub n: i64,
    pub m: i64,
    pub max_degree: usize,
    pub coeff_bound: i64,
    pub strategy: Prop4Strategy,
    pub ceiling: u128,
}

/// Work done in one independent chunk of the search space.
///
/// For quotient enumeration a chunk fixes the quotient degree and its
/// constant term; for dividend enumeration it fixes the dividend degree and
/// `b_{p−1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionStats {
    pub degree: usize,
    pub fixed_coefficient: i64,
    pub candidates_tested: u64,
    pub hits: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prop4Outcome {
    pub counterexamples: Vec<IntPoly>,
    pub estimated_candidates: u128,
    pub candidates_tested: u64,
    pub partitions: Vec<PartitionStats>,
}

pub fn prop4_search(
    q: usize,
    n: i64,
    m: i64,
    max_degree: usize,
    coeff_bound: i64,
    strategy: Prop4Strategy,
) -> Result<Prop4Outcome, PolyError> {
    prop4_search_with(&Prop4Config {
        q,
        n,
        m,
        max_degree,
        coeff_bound,
        strategy,
        ceiling: DEFAULT_SEARCH_CEILING,
    })
}

fn geometric_sum(base: u128, from: usize, to: usize) -> u128 {
    (from..=to).fold(0u128, |acc, e| {
        acc.saturating_add(base.saturating_pow(e as u32))
    })
}

pub fn prop4_search_with(cfg: &Prop4Config) -> Result<Prop4Outcome, PolyError> {
    let bad = |msg: String| Err(PolyError::BadSearchParameters(msg));
    if cfg.q < 1 {
        return bad("q must be at least 1".into());
    }
    if cfg.m < 1 || cfg.m > cfg.n - 2 {
        return bad(format!("need 1 <= m <= n-2, got n={}, m={}", cfg.n, cfg.m));
    }
    if cfg.max_degree < 2 * cfg.q {
        return bad(format!("max_degree must be at least 2q = {}", 2 * cfg.q));
    }
    if cfg.coeff_bound < 0 {
        return bad("coeff_bound must be nonnegative".into());
    }
    let b = cfg.coeff_bound as u128;
    let estimated = match cfg.strategy {
        Prop4Strategy::QuotientEnum => geometric_sum(2 * b + 1, 0, cfg.max_degree - 2 * cfg.q),
        Prop4Strategy::DividendEnum => geometric_sum(b + 1, 2 * cfg.q, cfg.max_degree),
    };
    if estimated > cfg.ceiling {
        return Err(PolyError::SearchSpaceTooLarge {
            estimated,
            ceiling: cfg.ceiling,
        });
    }

    let results: Vec<(PartitionStats, Vec<IntPoly>)> = match cfg.strategy {
        Prop4Strategy::QuotientEnum => {
            let mut chunks = vec![(0usize, 0i64)];
            for d in 1..=cfg.max_degree - 2 * cfg.q {
                chunks.extend((-cfg.coeff_bound..=cfg.coeff_bound).map(|c0| (d, c0)));
            }
            chunks
                .into_par_iter()
                .map(|(d, c0)| quotient_chunk(cfg, d, c0))
                .collect()
        }
        Prop4Strategy::DividendEnum => {
            let chunks: Vec<(usize, i64)> = (2 * cfg.q..=cfg.max_degree)
                .flat_map(|p| (0..=cfg.coeff_bound).map(move |top| (p, top)))
                .collect();
            chunks
                .into_par_iter()
                .map(|(p, top)| dividend_chunk(cfg, p, top))
                .collect()
        }
    };

    let mut counterexamples: Vec<IntPoly> = results.iter().flat_map(|(_, h)| h.clone()).collect();
    counterexamples.sort_by(|a, b| a.canonical_cmp(b));
    counterexamples.dedup();
    let partitions: Vec<PartitionStats> = results.into_iter().map(|(s, _)| s).collect();
    Ok(Prop4Outcome {
        counterexamples,
        estimated_candidates: estimated,
        candidates_tested: partitions.iter().map(|p| p.candidates_tested).sum(),
        partitions,
    })
}

/// Coefficient `j` of `U·(x^(2q) − n x^q + m)` from quotient coefficients `c`
/// (with `c[d] = 1` already in place).
fn product_coeff(c: &[i64], j: usize, q: usize, n: i64, m: i64) -> i128 {
    let at = |i: Option<usize>| i.and_then(|i| c.get(i)).map_or(0i128, |&v| v as i128);
    m as i128 * at(Some(j)) - n as i128 * at(j.checked_sub(q)) + at(j.checked_sub(2 * q))
}

fn quotient_chunk(cfg: &Prop4Config, d: usize, c0: i64) -> (PartitionStats, Vec<IntPoly>) {
    let mut stats = PartitionStats {
        degree: d,
        fixed_coefficient: c0,
        candidates_tested: 0,
        hits: 0,
    };
    let mut hits = Vec::new();
    let mut c = vec![0i64; d + 1];
    c[d] = 1;
    if d == 0 {
        quotient_leaf(cfg, &c, &mut stats, &mut hits);
    } else {
        c[0] = c0;
        if product_coeff(&c, 0, cfg.q, cfg.n, cfg.m) <= 0 {
            quotient_dfs(cfg, &mut c, 1, &mut stats, &mut hits);
        }
    }
    stats.hits = hits.len();
    (stats, hits)
}

/// Fills `c[j..d]`. Product coefficient `j` is final once `c_0..c_j` are
/// fixed and grows with `c_j` (since `m > 0`), so the first positive value
/// ends the loop.
fn quotient_dfs(
    cfg: &Prop4Config,
    c: &mut Vec<i64>,
    j: usize,
    stats: &mut PartitionStats,
    hits: &mut Vec<IntPoly>,
) {
    let d = c.len() - 1;
    if j == d {
        quotient_leaf(cfg, c, stats, hits);
        return;
    }
    for v in -cfg.coeff_bound..=cfg.coeff_bound {
        c[j] = v;
        if product_coeff(c, j, cfg.q, cfg.n, cfg.m) > 0 {
            break;
        }
        quotient_dfs(cfg, c, j + 1, stats, hits);
    }
}

fn quotient_leaf(
    cfg: &Prop4Config,
    c: &[i64],
    stats: &mut PartitionStats,
    hits: &mut Vec<IntPoly>,
) {
    stats.candidates_tested += 1;
    let d = c.len() - 1;
    let top = d + 2 * cfg.q;
    if (d..top).all(|j| product_coeff(c, j, cfg.q, cfg.n, cfg.m) <= 0) {
        let coeffs: Vec<BigInt> = (0..=top)
            .map(|j| BigInt::from(product_coeff(c, j, cfg.q, cfg.n, cfg.m)))
            .collect();
        hits.push(IntPoly::new(coeffs));
    }
}

/// Remainder of `Q` modulo the monic sparse divisor is zero.
fn divides_i128(q_coeffs: &[i128], q: usize, n: i64, m: i64) -> Option<bool> {
    let mut r = q_coeffs.to_vec();
    for i in (2 * q..r.len()).rev() {
        let t = r[i];
        if t == 0 {
            continue;
        }
        r[i - q] = r[i - q].checked_add(t.checked_mul(n as i128)?)?;
        r[i - 2 * q] = r[i - 2 * q].checked_sub(t.checked_mul(m as i128)?)?;
        r[i] = 0;
    }
    Some(r[..2 * q].iter().all(|&v| v == 0))
}

fn dividend_chunk(cfg: &Prop4Config, p: usize, top: i64) -> (PartitionStats, Vec<IntPoly>) {
    let mut stats = PartitionStats {
        degree: p,
        fixed_coefficient: top,
        candidates_tested: 0,
        hits: 0,
    };
    let divisor = family_poly(cfg.n, cfg.m, cfg.q);
    let mut hits = Vec::new();
    let mut b = vec![0i64; p];
    b[p - 1] = top;
    loop {
        stats.candidates_tested += 1;
        let mut coeffs: Vec<i128> = b.iter().map(|&v| -(v as i128)).collect();
        coeffs.push(1);
        let divides = divides_i128(&coeffs, cfg.q, cfg.n, cfg.m).unwrap_or_else(|| {
            let poly = IntPoly::new(coeffs.iter().map(|&v| BigInt::from(v)).collect());
            poly.exact_div(&divisor).expect("nonzero divisor").is_some()
        });
        if divides {
            hits.push(IntPoly::new(
                coeffs.iter().map(|&v| BigInt::from(v)).collect(),
            ));
        }
        // odometer over b_0..b_{p-2}
        let mut i = 0;
        while i + 1 < p && b[i] == cfg.coeff_bound {
            b[i] = 0;
            i += 1;
        }
        if i + 1 >= p {
            break;
        }
        b[i] += 1;
    }
    stats.hits = hits.len();
    (stats, hits)
}
