//! Perron root of the adjacency matrix, numerically and exactly.

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use super::GraphError;
use crate::exactnum::{quad_roots, HpFloat, QuadRoots, QuadSurd};
use num_bigint::BigInt;
use num_rational::BigRational;

pub const RAYLEIGH_TOLERANCE: f64 = 1e-13;
pub const MAX_POWER_ITERATIONS: u64 = 100_000;

#[derive(Clone, Debug)]
pub struct SpectralResult {
    pub rho: HpFloat,
    /// Power-iteration steps summed over the components examined.
    pub iterations: u64,
}

pub fn spectral_radius(a: &[Vec<u64>]) -> Result<SpectralResult, GraphError> {
    spectral_radius_with(a, 128)
}

/// Power iteration on `A + I` (aperiodic, same Perron vector) over every
/// strongly connected component; the largest component root wins. Stops once
/// both the normalised iterate and the Rayleigh quotient have settled.
pub fn spectral_radius_with(
    a: &[Vec<u64>],
    precision_bits: usize,
) -> Result<SpectralResult, GraphError> {
    let size = a.len();
    if a.iter().any(|row| row.len() != size) {
        return Err(GraphError::NotSquare);
    }
    let mut g = DiGraph::<usize, ()>::new();
    let nodes: Vec<_> = (0..size).map(|i| g.add_node(i)).collect();
    for (u, row) in a.iter().enumerate() {
        for (v, &x) in row.iter().enumerate() {
            if x > 0 {
                g.add_edge(nodes[u], nodes[v], ());
            }
        }
    }
    let mut components: Vec<Vec<usize>> = tarjan_scc(&g)
        .into_iter()
        .map(|c| {
            let mut ids: Vec<usize> = c.into_iter().map(|n| g[n]).collect();
            ids.sort_unstable();
            ids
        })
        .collect();
    components.sort();

    let mut best = HpFloat::zero(precision_bits);
    let mut iterations = 0;
    for comp in components {
        let cyclic = comp.len() > 1 || a[comp[0]][comp[0]] > 0;
        if !cyclic {
            continue;
        }
        let (rho, steps) = power_iteration(a, &comp, precision_bits)?;
        iterations += steps;
        if rho > best {
            best = rho;
        }
    }
    Ok(SpectralResult {
        rho: best,
        iterations,
    })
}

fn power_iteration(
    a: &[Vec<u64>],
    comp: &[usize],
    bits: usize,
) -> Result<(HpFloat, u64), GraphError> {
    let k = comp.len();
    let entry = |i: usize, j: usize| -> HpFloat {
        let shift = u64::from(i == j);
        HpFloat::from_int(&BigInt::from(a[comp[i]][comp[j]] + shift), bits)
    };
    let b: Vec<Vec<HpFloat>> = (0..k)
        .map(|i| (0..k).map(|j| entry(i, j)).collect())
        .collect();
    let mut x: Vec<HpFloat> = vec![HpFloat::from_i64(1, bits); k];
    let mut previous: Option<HpFloat> = None;
    for step in 1..=MAX_POWER_ITERATIONS {
        let y: Vec<HpFloat> = b
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&x)
                    .fold(HpFloat::zero(bits), |acc, (bij, xj)| acc + bij * xj)
            })
            .collect();
        let dot = |p: &[HpFloat], q: &[HpFloat]| {
            p.iter()
                .zip(q)
                .fold(HpFloat::zero(bits), |acc, (pi, qi)| acc + pi * qi)
        };
        let rq = dot(&x, &y) / dot(&x, &x);
        let norm = y
            .iter()
            .map(HpFloat::abs)
            .fold(HpFloat::zero(bits), |m, v| if v > m { v } else { m });
        let next: Vec<HpFloat> = y.iter().map(|v| v / &norm).collect();
        let drift = next
            .iter()
            .zip(&x)
            .map(|(p, q)| (p - q).abs().to_f64())
            .fold(0.0, f64::max);
        x = next;
        if let Some(prev) = &previous {
            let scale = rq.to_f64().max(1.0);
            if drift < RAYLEIGH_TOLERANCE
                && (&rq - prev).abs().to_f64() < RAYLEIGH_TOLERANCE * scale
            {
                return Ok((rq - HpFloat::from_i64(1, bits), step));
            }
        }
        previous = Some(rq);
    }
    Err(GraphError::NoConvergence {
        iterations: MAX_POWER_ITERATIONS,
        last: previous.map_or(f64::NAN, |p| p.to_f64() - 1.0),
    })
}

/// Exact test of `det(A − βI) = 0` in `Q(√(n² − 4m))` by fraction-free
/// (Bareiss) elimination.
pub fn verify_beta_eigen(a: &[Vec<u64>], n: i64, m: i64) -> Result<bool, GraphError> {
    let size = a.len();
    if a.iter().any(|row| row.len() != size) {
        return Err(GraphError::NotSquare);
    }
    let beta = match quad_roots(n, m)? {
        QuadRoots::Irrational { beta, .. } => beta,
        QuadRoots::Rational(..) => {
            return Err(GraphError::Exact(
                crate::exactnum::ExactError::BadRadicand {
                    radicand: BigInt::from(n * n - 4 * m),
                    reason: "is a perfect square",
                },
            ))
        }
    };
    if size == 0 {
        return Ok(false);
    }
    let lift = |v: u64| beta.lift(BigRational::from_integer(BigInt::from(v)));
    let mut mat: Vec<Vec<QuadSurd>> = (0..size)
        .map(|i| {
            (0..size)
                .map(|j| {
                    let e = lift(a[i][j]);
                    if i == j {
                        &e - &beta
                    } else {
                        e
                    }
                })
                .collect()
        })
        .collect();
    let mut prev = lift(1);
    for k in 0..size {
        if mat[k][k].is_zero() {
            match (k + 1..size).find(|&r| !mat[r][k].is_zero()) {
                Some(r) => mat.swap(k, r),
                None => return Ok(true),
            }
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let num = &(&mat[i][j] * &mat[k][k]) - &(&mat[i][k] * &mat[k][j]);
                mat[i][j] = &num / &prev;
            }
        }
        prev = mat[k][k].clone();
    }
    Ok(mat[size - 1][size - 1].is_zero())
}
