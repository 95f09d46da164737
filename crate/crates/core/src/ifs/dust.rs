//! Dust-like comparison systems and the Moran equation `Σ r_j^s = 1`.

use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::{IfsError, DEFAULT_PRECISION_BITS};
use crate::exactnum::{format_rational, in_open_unit_interval, HpFloat};

pub const MORAN_TOLERANCE: f64 = 1e-12;
const RESIDUAL_TARGET: f64 = 1e-12;
const MAX_BISECTIONS: u32 = 400;

/// Contraction ratios of a dust-like system, given directly or as rational
/// powers of a common base.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DustIfsSpec {
    ExplicitRatios {
        #[serde(with = "crate::exactnum::serde_rational_vec")]
        ratios: Vec<BigRational>,
    },
    /// `r_j = base^(e_j)`.
    LambdaExponents {
        #[serde(with = "crate::exactnum::serde_rational")]
        base: BigRational,
        #[serde(with = "crate::exactnum::serde_rational_vec")]
        exponents: Vec<BigRational>,
    },
}

impl DustIfsSpec {
    pub fn len(&self) -> usize {
        match self {
            DustIfsSpec::ExplicitRatios { ratios } => ratios.len(),
            DustIfsSpec::LambdaExponents { exponents, .. } => exponents.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn check(&self) -> Result<(), IfsError> {
        if self.len() < 2 {
            return Err(IfsError::BadDust(format!(
                "need at least two maps, got {}",
                self.len()
            )));
        }
        match self {
            DustIfsSpec::ExplicitRatios { ratios } => {
                if let Some(bad) = ratios.iter().find(|r| !in_open_unit_interval(r)) {
                    return Err(IfsError::BadDust(format!(
                        "ratio {} is not in (0, 1)",
                        format_rational(bad)
                    )));
                }
            }
            DustIfsSpec::LambdaExponents { base, exponents } => {
                if !in_open_unit_interval(base) {
                    return Err(IfsError::BadDust(format!(
                        "base {} is not in (0, 1)",
                        format_rational(base)
                    )));
                }
                if let Some(bad) = exponents.iter().find(|e| !e.is_positive()) {
                    return Err(IfsError::BadDust(format!(
                        "exponent {} is not positive",
                        format_rational(bad)
                    )));
                }
            }
        }
        Ok(())
    }

    /// `ln r_j` for every map.
    pub fn log_ratios(&self, precision_bits: usize) -> Vec<HpFloat> {
        match self {
            DustIfsSpec::ExplicitRatios { ratios } => ratios
                .iter()
                .map(|r| HpFloat::from_rational(r, precision_bits).ln())
                .collect(),
            DustIfsSpec::LambdaExponents { base, exponents } => {
                let ln_base = HpFloat::from_rational(base, precision_bits).ln();
                exponents
                    .iter()
                    .map(|e| &HpFloat::from_rational(e, precision_bits) * &ln_base)
                    .collect()
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct MoranResult {
    pub s: HpFloat,
    /// `|Σ r_j^s − 1|` at the returned `s`.
    pub residual: f64,
    pub iterations: u32,
}

pub fn moran_dimension(dust: &DustIfsSpec) -> Result<MoranResult, IfsError> {
    moran_dimension_with(dust, DEFAULT_PRECISION_BITS)
}

/// Bisection on the decreasing map `s ↦ Σ r_j^s`, stopped once the bracket
/// is narrower than [`MORAN_TOLERANCE`] and the residual is small.
pub fn moran_dimension_with(
    dust: &DustIfsSpec,
    precision_bits: usize,
) -> Result<MoranResult, IfsError> {
    dust.check()?;
    let bits = precision_bits.max(64);
    let logs = dust.log_ratios(bits);
    let one = HpFloat::from_i64(1, bits);
    let excess = |s: &HpFloat| -> HpFloat {
        let mut sum = HpFloat::zero(bits);
        for l in &logs {
            sum = sum + (s * l).exp();
        }
        sum - one.clone()
    };
    let mut lo = HpFloat::zero(bits);
    let mut hi = HpFloat::from_i64(1, bits);
    while excess(&hi) > HpFloat::zero(bits) {
        lo = hi.clone();
        hi = &hi * &HpFloat::from_i64(2, bits);
    }
    let half = HpFloat::from_rational(&BigRational::new(1.into(), 2.into()), bits);
    let mut iterations = 0;
    loop {
        let mid = &(&lo + &hi) * &half;
        let f = excess(&mid);
        let narrow = (&hi - &lo).to_f64() < MORAN_TOLERANCE;
        if (narrow && f.abs().to_f64() < RESIDUAL_TARGET)
            || f.is_zero()
            || iterations >= MAX_BISECTIONS
        {
            return Ok(MoranResult {
                s: mid,
                residual: f.abs().to_f64(),
                iterations,
            });
        }
        if f > HpFloat::zero(bits) {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
}

impl DustIfsSpec {
    /// The explicit ratio list, when the system was given that way.
    pub fn ratios(&self) -> Option<&[BigRational]> {
        match self {
            DustIfsSpec::ExplicitRatios { ratios } => Some(ratios),
            DustIfsSpec::LambdaExponents { .. } => None,
        }
    }
}
