//! Numerical cross-checks: exact covers by level-`L` cylinders, their
//! growth, and box-counting estimates of the dimension.

mod plot;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{format_rational, in_open_unit_interval};
use crate::ifs::{overlap_step, SelfSimilarSpec};

pub use plot::{cover_table, emit_csv, emit_svg, growth_table, Table};

/// Largest number of cylinder offsets generated for one level before deduplication.
pub const DEFAULT_COVER_CEILING: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumlabError {
    #[error(
        "depth {depth} needs {generated} offsets before deduplication, above the ceiling {ceiling}"
    )]
    TooDeep {
        depth: usize,
        generated: u64,
        ceiling: u64,
    },
    #[error("a fit needs at least two grid levels, got {0}")]
    DegenerateFit(usize),
    #[error("cover depth {depth} must exceed the finest grid level {grid_levels}")]
    DepthTooShallow { depth: usize, grid_levels: usize },
    #[error("bad system: {0}")]
    BadSpec(String),
}

/// The intervals `[c, c + length]` of one level, by left endpoint. Offsets
/// are kept as strictly increasing numerators over one common denominator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "CoverWire", from = "CoverWire")]
pub struct CoverLevel {
    pub depth: usize,
    pub length: BigRational,
    pub denominator: BigInt,
    pub numerators: Vec<BigInt>,
}

impl CoverLevel {
    pub fn count(&self) -> usize {
        self.numerators.len()
    }

    pub fn offset(&self, i: usize) -> BigRational {
        BigRational::new(self.numerators[i].clone(), self.denominator.clone())
    }

    pub fn offsets(&self) -> Vec<BigRational> {
        (0..self.count()).map(|i| self.offset(i)).collect()
    }
}

#[derive(Clone, Serialize, Deserialize)]
struct CoverWire {
    depth: usize,
    #[serde(with = "crate::exactnum::serde_rational")]
    length: BigRational,
    #[serde(with = "crate::exactnum::serde_rational_vec")]
    offsets: Vec<BigRational>,
    count: usize,
}

impl From<CoverLevel> for CoverWire {
    fn from(c: CoverLevel) -> Self {
        CoverWire {
            depth: c.depth,
            offsets: c.offsets(),
            count: c.count(),
            length: c.length,
        }
    }
}

impl From<CoverWire> for CoverLevel {
    fn from(w: CoverWire) -> Self {
        let denominator = w
            .offsets
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let numerators = w
            .offsets
            .iter()
            .map(|c| c.numer() * (&denominator / c.denom()))
            .collect();
        CoverLevel {
            depth: w.depth,
            length: w.length,
            denominator,
            numerators,
        }
    }
}

fn check_spec(spec: &SelfSimilarSpec) -> Result<(), NumlabError> {
    if !in_open_unit_interval(&spec.lambda) {
        return Err(NumlabError::BadSpec(format!(
            "ratio {} is not in (0, 1)",
            format_rational(&spec.lambda)
        )));
    }
    if spec.offsets.is_empty() {
        return Err(NumlabError::BadSpec("no maps".to_string()));
    }
    Ok(())
}

/// Exact level-by-level construction. With `b_i = c_i/D` and `λ = p/q`, a
/// depth-`L` offset is `N/(D·q^L)` and its images are `(c_i·q^(L+1) + p·N)/(D·q^(L+1))`.
struct CoverBuilder {
    scaled_offsets: Vec<BigInt>,
    p: BigInt,
    q: BigInt,
    q_power: BigInt,
    level: CoverLevel,
}

impl CoverBuilder {
    fn new(spec: &SelfSimilarSpec) -> Self {
        let d = spec
            .offsets
            .iter()
            .fold(BigInt::one(), |acc, b| acc.lcm(b.denom()));
        CoverBuilder {
            scaled_offsets: spec
                .offsets
                .iter()
                .map(|b| b.numer() * (&d / b.denom()))
                .collect(),
            p: spec.lambda.numer().clone(),
            q: spec.lambda.denom().clone(),
            q_power: BigInt::one(),
            level: CoverLevel {
                depth: 0,
                length: BigRational::one(),
                denominator: d,
                numerators: vec![BigInt::zero()],
            },
        }
    }

    fn step(&mut self) {
        self.q_power *= &self.q;
        let (p, qp, prev) = (&self.p, &self.q_power, &self.level.numerators);
        let mut next: Vec<BigInt> = self
            .scaled_offsets
            .par_iter()
            .flat_map_iter(|c| {
                let shift = c * qp;
                prev.iter().map(move |n| &shift + p * n)
            })
            .collect();
        next.par_sort_unstable();
        next.dedup();
        let level = &mut self.level;
        level.depth += 1;
        level.length = &level.length * BigRational::new(self.p.clone(), self.q.clone());
        level.denominator *= &self.q;
        level.numerators = next;
    }
}

fn build_covers(
    spec: &SelfSimilarSpec,
    max_depth: usize,
    ceiling: u64,
    keep_all: bool,
) -> Result<Vec<CoverLevel>, NumlabError> {
    check_spec(spec)?;
    let mut builder = CoverBuilder::new(spec);
    let mut levels = Vec::new();
    for depth in 1..=max_depth {
        if keep_all {
            levels.push(builder.level.clone());
        }
        let generated = builder.level.count() as u64 * spec.offsets.len() as u64;
        if generated > ceiling {
            return Err(NumlabError::TooDeep {
                depth,
                generated,
                ceiling,
            });
        }
        builder.step();
    }
    levels.push(builder.level);
    Ok(levels)
}

/// Covers for every depth `0..=max_depth`, deduplicated exactly.
pub fn covers(spec: &SelfSimilarSpec, max_depth: usize) -> Result<Vec<CoverLevel>, NumlabError> {
    covers_with_ceiling(spec, max_depth, DEFAULT_COVER_CEILING)
}

pub fn covers_with_ceiling(
    spec: &SelfSimilarSpec,
    max_depth: usize,
    ceiling: u64,
) -> Result<Vec<CoverLevel>, NumlabError> {
    build_covers(spec, max_depth, ceiling, true)
}

/// Offsets of all level-`depth` cylinders `f_{i_1} ∘ … ∘ f_{i_depth}([0, 1])`.
pub fn cover(spec: &SelfSimilarSpec, depth: usize) -> Result<CoverLevel, NumlabError> {
    Ok(build_covers(spec, depth, DEFAULT_COVER_CEILING, false)?
        .pop()
        .expect("the final level is always kept"))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthResult {
    /// `N_0, …, N_max_depth`.
    pub counts: Vec<u64>,
    /// Least-squares slope of `ln N_L` against `L`, fitted from `L = 1`
    /// when at least two such depths exist; absent for depth 0.
    pub slope: Option<f64>,
    pub n: usize,
    /// Exact-overlap steps in the system.
    pub m: usize,
    /// Whether `N_{L+2} = n·N_{L+1} − m·N_L` at every measured `L`.
    pub recurrence_holds: bool,
    pub recurrence_checks: usize,
}

fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let len = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / len;
    let my = points.iter().map(|p| p.1).sum::<f64>() / len;
    let sxy: f64 = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = points.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn overlap_count(spec: &SelfSimilarSpec) -> usize {
    let o = overlap_step(&spec.lambda);
    spec.offsets
        .windows(2)
        .filter(|w| &w[1] - &w[0] == o)
        .count()
}

pub fn cylinder_growth(
    spec: &SelfSimilarSpec,
    max_depth: usize,
) -> Result<GrowthResult, NumlabError> {
    let counts: Vec<u64> = covers(spec, max_depth)?
        .iter()
        .map(|c| c.count() as u64)
        .collect();
    let n = spec.offsets.len();
    let m = overlap_count(spec);
    let start = if counts.len() >= 3 { 1 } else { 0 };
    let points: Vec<(f64, f64)> = counts
        .iter()
        .enumerate()
        .skip(start)
        .map(|(l, &c)| (l as f64, (c as f64).ln()))
        .collect();
    let slope = (points.len() >= 2).then(|| least_squares_slope(&points));
    let checks: Vec<bool> = counts
        .windows(3)
        .map(|w| i128::from(w[2]) == n as i128 * i128::from(w[1]) - m as i128 * i128::from(w[0]))
        .collect();
    Ok(GrowthResult {
        counts,
        slope,
        n,
        m,
        recurrence_holds: checks.iter().all(|&c| c),
        recurrence_checks: checks.len(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxScale {
    /// Cells have side `λ^level`.
    pub level: usize,
    pub count: u64,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxCountResult {
    pub estimate: f64,
    pub depth: usize,
    pub scales: Vec<BoxScale>,
}

/// Cells `[jλ^level, (j+1)λ^level)` met by the half-open intervals of `cover`.
fn occupied_cells(cover: &CoverLevel, lambda: &BigRational, level: usize) -> u64 {
    // offset N/den and length λ^depth scaled to cell units: N·q^level / (den·p^level)
    let scale = Pow::pow(lambda.denom(), level);
    let divisor = &cover.denominator * Pow::pow(lambda.numer(), level);
    let length =
        (&cover.length * BigRational::from_integer(cover.denominator.clone())).to_integer();
    let mut count = 0u64;
    let mut last: Option<BigInt> = None;
    for n in &cover.numerators {
        let first = (n * &scale).div_floor(&divisor);
        let end = ((n + &length) * &scale).div_ceil(&divisor) - 1;
        let from = match &last {
            Some(l) if *l >= first => l + 1,
            _ => first,
        };
        if from <= end {
            count += (&end - &from + BigInt::one())
                .to_u64()
                .expect("cell count fits in u64");
            last = Some(end);
        }
    }
    count
}

/// Slope of `ln(count)` against `−level·ln λ` over grids of side `λ^level`,
/// `level = 1..=grid_levels`, using the depth-`depth` cover.
pub fn box_count_dimension(
    spec: &SelfSimilarSpec,
    depth: usize,
    grid_levels: usize,
) -> Result<BoxCountResult, NumlabError> {
    if grid_levels < 2 {
        return Err(NumlabError::DegenerateFit(grid_levels));
    }
    if depth <= grid_levels {
        return Err(NumlabError::DepthTooShallow { depth, grid_levels });
    }
    let level = cover(spec, depth)?;
    let ln_inv = -spec.lambda.to_f64().expect("ratio in (0, 1)").ln();
    let counts: Vec<(usize, u64)> = (1..=grid_levels)
        .map(|j| (j, occupied_cells(&level, &spec.lambda, j)))
        .collect();
    let points: Vec<(f64, f64)> = counts
        .iter()
        .map(|&(j, c)| (j as f64 * ln_inv, (c as f64).ln()))
        .collect();
    let estimate = least_squares_slope(&points);
    let len = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / len;
    let my = points.iter().map(|p| p.1).sum::<f64>() / len;
    let scales = counts
        .iter()
        .zip(&points)
        .map(|(&(level, count), (x, y))| BoxScale {
            level,
            count,
            residual: y - (my + estimate * (x - mx)),
        })
        .collect();
    Ok(BoxCountResult {
        estimate,
        depth,
        scales,
    })
}
