//! The class of equicontractive self-similar sets `f_i(x) = λx + b_i` whose
//! consecutive first-level intervals either overlap in exactly `λ²`, touch,
//! or leave a gap; plus dust-like comparison systems.

mod dust;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{
    format_rational, in_open_unit_interval, quad_roots, ExactError, HpFloat, QuadRoots, QuadSurd,
};

pub use dust::{moran_dimension, moran_dimension_with, DustIfsSpec, MoranResult, MORAN_TOLERANCE};

/// Bits of working precision never dropped below in [`dimension`].
pub const MIN_WORKING_BITS: usize = 80;
pub const DEFAULT_PRECISION_BITS: usize = 128;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IfsError {
    #[error("ratio {0} is not in the open interval (0, 1)")]
    LambdaOutOfRange(String),
    #[error("need at least two offsets, got {0}")]
    TooFewMaps(usize),
    #[error("offsets are not strictly increasing at step {0}")]
    NotMonotone(usize),
    #[error("bad boundary: {0}")]
    BadBoundary(String),
    #[error("step {index} has length {step}: a positive overlap that is not exact")]
    InvalidStep { index: usize, step: String },
    #[error("(n, m) = ({n}, {m}) is outside the class, which needs 1 <= m <= n-2")]
    NotInClass { n: usize, m: usize },
    #[error("lambda = {lambda} exceeds the feasibility bound 1/beta = {bound}")]
    Infeasible { lambda: String, bound: f64 },
    #[error("slack {slack} is positive but the pattern has no gap to absorb it")]
    SlackWithoutGap { slack: String },
    #[error("bad pattern: {0}")]
    BadPattern(String),
    #[error("bad gap shares: {0}")]
    BadShares(String),
    #[error("bad dust system: {0}")]
    BadDust(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// One consecutive step `b_{i+1} − b_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    /// Exact overlap, step `λ − λ²`.
    O,
    /// Touching intervals, step `λ`.
    T,
    /// Gap, step larger than `λ`; carries the step length.
    G(BigRational),
}

impl Step {
    pub fn letter(&self) -> char {
        match self {
            Step::O => 'O',
            Step::T => 'T',
            Step::G(_) => 'G',
        }
    }
}

/// The O/T/G word of a member of the class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OverlapPattern {
    pub steps: Vec<Step>,
}

impl OverlapPattern {
    pub fn n(&self) -> usize {
        self.steps.len() + 1
    }

    pub fn m(&self) -> usize {
        self.steps.iter().filter(|s| **s == Step::O).count()
    }

    pub fn word(&self) -> String {
        self.steps.iter().map(Step::letter).collect()
    }
}

impl fmt::Display for OverlapPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.word())
    }
}

/// Letters of a pattern word before gap sizes are known.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    O,
    T,
    G,
}

pub fn parse_word(word: &str) -> Result<Vec<Letter>, IfsError> {
    word.chars()
        .map(|c| match c.to_ascii_uppercase() {
            'O' => Ok(Letter::O),
            'T' => Ok(Letter::T),
            'G' => Ok(Letter::G),
            other => Err(IfsError::BadPattern(format!("unknown letter {other:?}"))),
        })
        .collect()
}

/// `λ` together with offsets `b_1 < … < b_n`. Values returned by
/// [`validate`] and [`generate`] satisfy the class conditions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelfSimilarSpec {
    #[serde(with = "crate::exactnum::serde_rational")]
    pub lambda: BigRational,
    #[serde(with = "crate::exactnum::serde_rational_vec")]
    pub offsets: Vec<BigRational>,
}

impl SelfSimilarSpec {
    pub fn n(&self) -> usize {
        self.offsets.len()
    }

    pub fn steps(&self) -> impl Iterator<Item = BigRational> + '_ {
        self.offsets.windows(2).map(|w| &w[1] - &w[0])
    }
}

impl fmt::Display for SelfSimilarSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let offsets: Vec<String> = self.offsets.iter().map(format_rational).collect();
        write!(f, "lambda={} offsets=({})", self.lambda, offsets.join(", "))
    }
}

/// `λ − λ²`, the step of an exact overlap.
pub fn overlap_step(lambda: &BigRational) -> BigRational {
    lambda - lambda * lambda
}

/// Slack `δ = 1 − nλ + mλ²` left for gaps once O and T steps are placed.
pub fn feasibility_slack(n: usize, m: usize, lambda: &BigRational) -> BigRational {
    BigRational::one() - lambda * BigRational::from_integer(BigInt::from(n))
        + lambda * lambda * BigRational::from_integer(BigInt::from(m))
}

fn check_lambda(lambda: &BigRational) -> Result<(), IfsError> {
    if in_open_unit_interval(lambda) {
        Ok(())
    } else {
        Err(IfsError::LambdaOutOfRange(format_rational(lambda)))
    }
}

fn check_class(n: usize, m: usize) -> Result<(), IfsError> {
    if m >= 1 && n >= 3 && m <= n - 2 {
        Ok(())
    } else {
        Err(IfsError::NotInClass { n, m })
    }
}

/// Roots of `x² − nx + m` for `(n, m)` in the class. The discriminant is
/// never a square there, so the roots are always irrational.
pub fn class_roots(n: usize, m: usize) -> Result<(QuadSurd, QuadSurd), IfsError> {
    check_class(n, m)?;
    match quad_roots(n as i64, m as i64)? {
        QuadRoots::Irrational { beta, beta_prime } => Ok((beta, beta_prime)),
        QuadRoots::Rational(..) => unreachable!("square discriminant inside the class"),
    }
}

fn infeasible(n: usize, m: usize, lambda: &BigRational) -> IfsError {
    // 1/β = β′/m
    let bound = class_roots(n, m)
        .map(|(_, bp)| bp.to_f64() / m as f64)
        .unwrap_or(f64::NAN);
    IfsError::Infeasible {
        lambda: format_rational(lambda),
        bound,
    }
}

/// Classifies the steps of `offsets` and checks membership in the class.
pub fn validate(
    lambda: &BigRational,
    offsets: &[BigRational],
) -> Result<(SelfSimilarSpec, OverlapPattern), IfsError> {
    check_lambda(lambda)?;
    if offsets.len() < 2 {
        return Err(IfsError::TooFewMaps(offsets.len()));
    }
    for (i, w) in offsets.windows(2).enumerate() {
        if w[1] <= w[0] {
            return Err(IfsError::NotMonotone(i + 1));
        }
    }
    if !offsets[0].is_zero() {
        return Err(IfsError::BadBoundary(format!(
            "first offset is {}, expected 0",
            offsets[0]
        )));
    }
    let last = offsets.last().expect("nonempty");
    let right = BigRational::one() - lambda;
    if *last != right {
        return Err(IfsError::BadBoundary(format!(
            "last offset is {last}, expected 1 - lambda = {right}"
        )));
    }
    let o = overlap_step(lambda);
    let mut steps = Vec::with_capacity(offsets.len() - 1);
    for (i, w) in offsets.windows(2).enumerate() {
        let step = &w[1] - &w[0];
        let classified = if step == o {
            Step::O
        } else {
            match step.cmp(lambda) {
                Ordering::Equal => Step::T,
                Ordering::Greater => Step::G(step),
                Ordering::Less => {
                    return Err(IfsError::InvalidStep {
                        index: i + 1,
                        step: format_rational(&step),
                    })
                }
            }
        };
        steps.push(classified);
    }
    let pattern = OverlapPattern { steps };
    check_class(pattern.n(), pattern.m())?;
    Ok((
        SelfSimilarSpec {
            lambda: lambda.clone(),
            offsets: offsets.to_vec(),
        },
        pattern,
    ))
}

/// How [`generate`] picks the word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PatternSource {
    Word(String),
    /// Random word with exactly `m` O's and at least one G, plus random
    /// positive gap shares, all drawn from a seeded generator.
    Random(u64),
}

/// Relative sizes of the slack handed to each gap.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum GapShares {
    #[default]
    Equal,
    /// Positive weights, one per G in order; normalised to sum to one.
    Weights(Vec<BigRational>),
}

pub fn generate(
    n: usize,
    m: usize,
    lambda: &BigRational,
    source: &PatternSource,
) -> Result<SelfSimilarSpec, IfsError> {
    match source {
        PatternSource::Word(word) => {
            generate_with_shares(n, m, lambda, &parse_word(word)?, &GapShares::Equal)
        }
        PatternSource::Random(seed) => {
            check_class(n, m)?;
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut letters = vec![Letter::O; m];
            letters.push(Letter::G);
            letters.extend((0..n - 2 - m).map(|_| {
                if rng.gen_bool(0.5) {
                    Letter::G
                } else {
                    Letter::T
                }
            }));
            letters.shuffle(&mut rng);
            let gaps = letters.iter().filter(|l| **l == Letter::G).count();
            let weights = (0..gaps)
                .map(|_| BigRational::from_integer(BigInt::from(rng.gen_range(1..=10))))
                .collect();
            generate_with_shares(n, m, lambda, &letters, &GapShares::Weights(weights))
        }
    }
}

/// Offsets realising `letters`: O steps `λ − λ²`, T steps `λ`, and G steps
/// `λ` plus a share of the slack.
pub fn generate_with_shares(
    n: usize,
    m: usize,
    lambda: &BigRational,
    letters: &[Letter],
    shares: &GapShares,
) -> Result<SelfSimilarSpec, IfsError> {
    check_lambda(lambda)?;
    check_class(n, m)?;
    if letters.len() != n - 1 {
        return Err(IfsError::BadPattern(format!(
            "pattern has {} letters, expected n-1 = {}",
            letters.len(),
            n - 1
        )));
    }
    let os = letters.iter().filter(|l| **l == Letter::O).count();
    if os != m {
        return Err(IfsError::BadPattern(format!(
            "pattern has {os} O's, expected m = {m}"
        )));
    }
    let gaps = letters.iter().filter(|l| **l == Letter::G).count();
    let slack = feasibility_slack(n, m, lambda);
    if slack.is_negative() || (slack.is_zero() && gaps > 0) {
        return Err(infeasible(n, m, lambda));
    }
    if slack.is_positive() && gaps == 0 {
        return Err(IfsError::SlackWithoutGap {
            slack: format_rational(&slack),
        });
    }
    let weights: Vec<BigRational> = match shares {
        GapShares::Equal => vec![BigRational::one(); gaps],
        GapShares::Weights(w) => {
            if w.len() != gaps {
                return Err(IfsError::BadShares(format!(
                    "{} weights for {gaps} gaps",
                    w.len()
                )));
            }
            if w.iter().any(|x| !x.is_positive()) {
                return Err(IfsError::BadShares("weights must be positive".into()));
            }
            w.clone()
        }
    };
    let total: BigRational = weights.iter().sum();
    let o = overlap_step(lambda);
    let mut offsets = vec![BigRational::zero()];
    let mut next_gap = weights.iter();
    for letter in letters {
        let step = match letter {
            Letter::O => o.clone(),
            Letter::T => lambda.clone(),
            Letter::G => lambda + &slack * next_gap.next().expect("one weight per gap") / &total,
        };
        let last = offsets.last().expect("nonempty").clone();
        offsets.push(last + step);
    }
    debug_assert_eq!(offsets.last(), Some(&(BigRational::one() - lambda)));
    Ok(SelfSimilarSpec {
        lambda: lambda.clone(),
        offsets,
    })
}

/// `s = ln β / (−ln λ)` together with the exact `β`.
#[derive(Clone, Debug)]
pub struct DimensionResult {
    pub s: HpFloat,
    pub beta: QuadSurd,
    pub lambda: BigRational,
}

pub fn dimension(n: usize, m: usize, lambda: &BigRational) -> Result<DimensionResult, IfsError> {
    dimension_with_precision(n, m, lambda, DEFAULT_PRECISION_BITS)
}

/// As [`dimension`], at `precision_bits` (never below [`MIN_WORKING_BITS`]).
pub fn dimension_with_precision(
    n: usize,
    m: usize,
    lambda: &BigRational,
    precision_bits: usize,
) -> Result<DimensionResult, IfsError> {
    check_lambda(lambda)?;
    let (beta, _) = class_roots(n, m)?;
    if feasibility_slack(n, m, lambda).is_negative() {
        return Err(infeasible(n, m, lambda));
    }
    let bits = precision_bits.max(MIN_WORKING_BITS);
    let guard = bits + 16;
    let ln_beta = beta.to_hp(guard)?.ln();
    let ln_lambda = HpFloat::from_rational(lambda, guard).ln();
    let s = -(ln_beta / ln_lambda);
    Ok(DimensionResult {
        s,
        beta,
        lambda: lambda.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn offsets(v: &[(i64, i64)]) -> Vec<BigRational> {
        v.iter().map(|&(a, b)| rat(a, b)).collect()
    }

    #[test]
    fn validate_examples() {
        let (_, p) = validate(&rat(1, 4), &offsets(&[(0, 1), (3, 16), (3, 4)])).unwrap();
        assert_eq!((p.word(), p.n(), p.m()), ("OG".to_string(), 3, 1));
        assert_eq!(p.steps[1], Step::G(rat(9, 16)));
        assert_eq!(
            validate(&rat(1, 4), &offsets(&[(0, 1), (1, 4), (3, 4)])),
            Err(IfsError::NotInClass { n: 3, m: 0 })
        );
        assert!(matches!(
            validate(&rat(1, 4), &offsets(&[(0, 1), (1, 8), (3, 4)])),
            Err(IfsError::InvalidStep { index: 1, .. })
        ));
    }

    #[test]
    fn validate_structural_errors() {
        let l = rat(1, 4);
        assert_eq!(
            validate(&l, &offsets(&[(0, 1), (1, 2), (1, 2), (3, 4)])),
            Err(IfsError::NotMonotone(2))
        );
        assert!(matches!(
            validate(&l, &offsets(&[(1, 16), (1, 4), (3, 4)])),
            Err(IfsError::BadBoundary(_))
        ));
        assert!(matches!(
            validate(&l, &offsets(&[(0, 1), (3, 16), (1, 2)])),
            Err(IfsError::BadBoundary(_))
        ));
        assert!(matches!(
            validate(&rat(5, 4), &offsets(&[(0, 1)])),
            Err(IfsError::LambdaOutOfRange(_))
        ));
        // step strictly between λ−λ² and λ
        assert!(matches!(
            validate(&l, &offsets(&[(0, 1), (7, 32), (3, 4)])),
            Err(IfsError::InvalidStep { index: 1, .. })
        ));
    }

    #[test]
    fn generate_examples() {
        let a = generate(3, 1, &rat(1, 4), &PatternSource::Word("OG".into())).unwrap();
        assert_eq!(a.offsets, offsets(&[(0, 1), (3, 16), (3, 4)]));
        let b = generate(4, 1, &rat(1, 5), &PatternSource::Word("OTG".into())).unwrap();
        assert_eq!(b.offsets, offsets(&[(0, 1), (4, 25), (9, 25), (4, 5)]));
        match generate(3, 1, &rat(2, 5), &PatternSource::Word("OG".into())) {
            Err(IfsError::Infeasible { bound, .. }) => {
                assert!((bound - 0.381966011250105).abs() < 1e-12)
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn generate_rejects_bad_words() {
        let l = rat(1, 10);
        for word in ["OO", "OGG", "GG", "OX"] {
            assert!(
                generate(3, 1, &l, &PatternSource::Word(word.into())).is_err(),
                "{word}"
            );
        }
        assert!(matches!(
            generate(3, 1, &l, &PatternSource::Word("OT".into())),
            Err(IfsError::SlackWithoutGap { .. })
        ));
        assert!(matches!(
            generate(4, 3, &l, &PatternSource::Word("OOO".into())),
            Err(IfsError::NotInClass { .. })
        ));
    }

    #[test]
    fn weighted_shares() {
        let spec = generate_with_shares(
            4,
            1,
            &rat(1, 10),
            &parse_word("GOG").unwrap(),
            &GapShares::Weights(vec![rat(1, 1), rat(3, 1)]),
        )
        .unwrap();
        let steps: Vec<_> = spec.steps().collect();
        let slack = feasibility_slack(4, 1, &rat(1, 10));
        assert_eq!(steps[0], rat(1, 10) + &slack / rat(4, 1));
        assert_eq!(steps[2], rat(1, 10) + &slack * rat(3, 4));
    }

    #[test]
    fn random_generation_is_deterministic_and_valid() {
        for seed in 0..50 {
            let a = generate(7, 2, &rat(1, 10), &PatternSource::Random(seed)).unwrap();
            let b = generate(7, 2, &rat(1, 10), &PatternSource::Random(seed)).unwrap();
            assert_eq!(a, b);
            let (_, p) = validate(&a.lambda, &a.offsets).unwrap();
            assert_eq!((p.n(), p.m()), (7, 2));
        }
    }

    #[test]
    fn dimension_examples() {
        let d = dimension(3, 1, &rat(1, 4)).unwrap();
        assert!(d
            .s
            .to_decimal_string(20)
            .starts_with("0.6942419136306173017"));
        let e = dimension(4, 1, &rat(1, 5)).unwrap();
        let closed = (2.0 + 3f64.sqrt()).ln() / 5f64.ln();
        assert!((e.s.to_f64() - closed).abs() < 1e-14);
        assert!(e.s.to_decimal_string(10).starts_with("0.818271948"));
        assert_eq!(e.beta.to_string(), "2+sqrt(3)");
        let f = dimension(3, 1, &rat(381, 1000)).unwrap();
        assert!((f.s.to_f64() - 1.0).abs() < 0.01);
        assert!(matches!(
            dimension(3, 1, &rat(2, 5)),
            Err(IfsError::Infeasible { .. })
        ));
        assert!(matches!(
            dimension(3, 2, &rat(1, 5)),
            Err(IfsError::NotInClass { .. })
        ));
    }

    #[test]
    fn json_form() {
        let spec = generate(3, 1, &rat(1, 4), &PatternSource::Word("OG".into())).unwrap();
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(text, r#"{"lambda":"1/4","offsets":["0","3/16","3/4"]}"#);
        let back: SelfSimilarSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
    }
}
