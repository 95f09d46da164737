//! Acceptance suite. Each criterion prints one `PASS` or `FAIL` line; the
//! process exits nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Signed;
use overlapkit::exactnum::{is_perfect_power, rat};
use overlapkit::graphdir::{
    build_graph, default_vertex_ceiling, spectral_radius, verify_beta_eigen, GraphError, Policy,
};
use overlapkit::ifs::{
    class_roots, dimension, feasibility_slack, generate, moran_dimension, DustIfsSpec,
    PatternSource, SelfSimilarSpec,
};
use overlapkit::intpoly::{family_poly, is_irreducible, prop4_search, IntPoly, Prop4Strategy};
use overlapkit::numlab::{box_count_dimension, cover, cylinder_growth};
use overlapkit::obstruction::{dust_candidate_check, theorem_verdict, Conclusion, Verdict};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const PAIRS: [(usize, usize); 7] = [(3, 1), (4, 1), (4, 2), (5, 1), (5, 2), (5, 3), (6, 4)];
const SWEEP_SIZE: usize = 140;

fn spec(lambda: BigRational, offsets: &[(i64, i64)]) -> SelfSimilarSpec {
    SelfSimilarSpec {
        lambda,
        offsets: offsets.iter().map(|&(p, q)| rat(p, q)).collect(),
    }
}

fn spec31() -> SelfSimilarSpec {
    spec(rat(1, 4), &[(0, 1), (3, 16), (3, 4)])
}

fn within(start: Instant, limit: Duration) {
    let elapsed = start.elapsed();
    assert!(elapsed < limit, "took {elapsed:?}, limit {limit:?}");
}

fn sweep() -> Vec<(usize, usize, SelfSimilarSpec)> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    (0..SWEEP_SIZE)
        .map(|i| {
            let (n, m) = PAIRS[i % PAIRS.len()];
            let lambda = loop {
                let den = rng.gen_range(4i64..=80);
                let lambda = rat(rng.gen_range(1..den / 2), den);
                if !feasibility_slack(n, m, &lambda).is_negative() {
                    break lambda;
                }
            };
            let s = generate(n, m, &lambda, &PatternSource::Random(rng.gen())).unwrap();
            (n, m, s)
        })
        .collect()
}

fn run_cli(args: &[&str]) -> Value {
    let out = Command::new(env!("CARGO_BIN_EXE_overlapkit"))
        .args(args)
        .output()
        .expect("binary runs");
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("JSON report")
}

fn example_reproduction() {
    let start = Instant::now();
    let factored = run_cli(&["factor", "--poly", "x^4-3x^2+1"]);
    assert_eq!(
        factored["factors"],
        serde_json::json!(["x^2-x-1", "x^2+x-1"])
    );
    assert_eq!(factored["multiplicities"], serde_json::json!([1, 1]));
    let report = run_cli(&["obstruct", "--n", "3", "--m", "1"]);
    assert_eq!(report["perfect_power"], serde_json::json!({"a": 1, "i": 2}));
    let k2 = report["reducible_ks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["k"] == 2)
        .expect("k = 2 is reducible");
    assert_eq!(k2["factors"], serde_json::json!(["x^2-x-1", "x^2+x-1"]));
    within(start, Duration::from_secs(1));
}

fn obstructed_verdicts() {
    let start = Instant::now();
    let listed = [2u64, 3, 5, 6, 7, 10];
    for n in 3..=12usize {
        for m in 1..=n - 2 {
            let report = theorem_verdict(n, m, 8).unwrap();
            let obstructed = report.verdict == Verdict::Obstructed;
            assert_eq!(
                obstructed,
                listed.contains(&(m as u64)),
                "(n, m) = ({n}, {m})"
            );
            assert_eq!(obstructed, is_perfect_power(&BigUint::from(m)).is_none());
        }
    }
    within(start, Duration::from_secs(30));
}

fn irreducibility_cross_check() {
    let start = Instant::now();
    let mut checked = 0;
    for m in (2..=100u64).filter(|&m| is_perfect_power(&BigUint::from(m)).is_none()) {
        for n in m + 2..=12 {
            for k in 1..=6 {
                let p = family_poly(n as i64, m as i64, k);
                assert!(is_irreducible(&p).unwrap(), "{p} factors");
                checked += 1;
            }
        }
    }
    assert!(checked > 0);
    within(start, Duration::from_secs(300));
}

fn dimension_identity() {
    let start = Instant::now();
    let canonical = [
        (spec31(), vec![vec![1, 1], vec![1, 2]]),
        (
            spec(rat(1, 5), &[(0, 1), (4, 25), (9, 25), (4, 5)]),
            vec![vec![2, 1], vec![3, 2]],
        ),
    ];
    for (s, expected) in &canonical {
        let gs = build_graph(s, Policy::CutAtTouch, default_vertex_ceiling(s)).unwrap();
        assert_eq!(&gs.adjacency, expected, "{s}");
    }
    for (n, m, s) in sweep() {
        let beta = class_roots(n, m).unwrap().0.to_f64();
        for policy in [Policy::CutAtTouch, Policy::KeepTouch] {
            let gs = build_graph(&s, policy, default_vertex_ceiling(&s)).unwrap();
            if policy == Policy::CutAtTouch {
                assert!(gs.vertices.iter().all(|v| v.k <= m + 1), "{s}");
            }
            assert!(
                verify_beta_eigen(&gs.adjacency, n as i64, m as i64).unwrap(),
                "{s}"
            );
            let rho = spectral_radius(&gs.adjacency).unwrap().rho.to_f64();
            assert!(
                (rho - beta).abs() < 1e-9 * beta,
                "{s} {policy:?}: {rho} vs {beta}"
            );
        }
    }
    within(start, Duration::from_secs(60));
}

fn row_identities() {
    let mut violations = 0;
    for (n, m, s) in sweep() {
        let gs = build_graph(&s, Policy::CutAtTouch, default_vertex_ceiling(&s)).unwrap();
        for (u, row) in gs.adjacency.iter().enumerate() {
            let ku = gs.vertices[u].k as u64;
            let size: u64 = row
                .iter()
                .zip(&gs.vertices)
                .map(|(a, v)| a * v.k as u64)
                .sum();
            let overlaps: u64 = row
                .iter()
                .zip(&gs.vertices)
                .map(|(a, v)| a * (v.k as u64 - 1))
                .sum();
            if size != ku * (n as u64 - 1) + 1 || overlaps != ku * m as u64 {
                violations += 1;
            }
        }
    }
    assert_eq!(violations, 0);
}

fn nonneg_tail_search() {
    let start = Instant::now();
    let pairs = [(3i64, 1i64), (4, 1), (4, 2)];
    for q in 1..=3usize {
        for &(n, m) in &pairs {
            for max_degree in 2 * q..=8 {
                let hit =
                    prop4_search(q, n, m, max_degree, 10, Prop4Strategy::QuotientEnum).unwrap();
                assert!(
                    hit.counterexamples.is_empty(),
                    "q={q} ({n},{m}) deg {max_degree}"
                );
                if max_degree <= 5 {
                    let other =
                        prop4_search(q, n, m, max_degree, 4, Prop4Strategy::DividendEnum).unwrap();
                    let same =
                        prop4_search(q, n, m, max_degree, 4, Prop4Strategy::QuotientEnum).unwrap();
                    assert_eq!(other.counterexamples, same.counterexamples);
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let zero = BigInt::from(0);
    for i in 0..10_000 {
        let (n, m) = pairs[i % pairs.len()];
        let q = rng.gen_range(1..=3);
        let d = rng.gen_range(0..=8);
        let mut c: Vec<i64> = (0..d).map(|_| rng.gen_range(-20..=20)).collect();
        c.push(1);
        let product = &family_poly(n, m, q) * &IntPoly::from_i64s(&c);
        let top = product.degree().unwrap();
        assert!(
            product.coeffs()[..top].iter().any(|v| v > &zero),
            "{product}"
        );
    }
    within(start, Duration::from_secs(300));
}

fn half_exponent_dust() {
    let golden = IntPoly::from_i64s(&[-1, -1, 1]);
    for lambda in [rat(1, 4), rat(1, 5), rat(1, 10)] {
        let dust = DustIfsSpec::LambdaExponents {
            base: lambda.clone(),
            exponents: vec![rat(1, 1), rat(1, 2)],
        };
        let check = dust_candidate_check(3, 1, &lambda, &dust).unwrap();
        assert_eq!(check.conclusion, Conclusion::NotRuledOut, "λ = {lambda}");
        assert_eq!(check.gcd.as_ref(), Some(&golden));
        let s = dimension(3, 1, &lambda).unwrap().s.to_f64();
        let moran = moran_dimension(&dust).unwrap().s.to_f64();
        assert!((s - moran).abs() < 1e-9, "{s} vs {moran}");
    }
}

fn numeric_dimension() {
    let start = Instant::now();
    let s = dimension(3, 1, &rat(1, 4)).unwrap().s.to_f64();
    assert!((s - 0.6942419136).abs() < 1e-9, "{s}");
    let growth = cylinder_growth(&spec31(), 4).unwrap();
    assert_eq!(growth.counts, vec![1, 3, 8, 21, 55]);
    for (depth, &count) in growth.counts.iter().enumerate() {
        assert_eq!(count, affine_oracle(&spec31(), depth));
    }
    let boxed = box_count_dimension(&spec31(), 10, 6).unwrap();
    assert!((boxed.estimate - 0.6942).abs() < 0.05, "{}", boxed.estimate);
    within(start, Duration::from_secs(60));
}

/// Composes maps as (ratio, offset) pairs and counts distinct offsets.
fn affine_oracle(s: &SelfSimilarSpec, depth: usize) -> u64 {
    let mut maps = vec![(rat(1, 1), rat(0, 1))];
    for _ in 0..depth {
        maps = maps
            .iter()
            .flat_map(|(r, c)| s.offsets.iter().map(move |b| (r * &s.lambda, c + r * b)))
            .collect();
    }
    let mut offsets: Vec<BigRational> = maps.into_iter().map(|(_, c)| c).collect();
    offsets.sort();
    offsets.dedup();
    offsets.len() as u64
}

/// Body of the item starting at `signature`, by brace matching.
fn item_body<'a>(source: &'a str, signature: &str) -> &'a str {
    let start = source
        .find(signature)
        .unwrap_or_else(|| panic!("{signature} not found"));
    let open = start + source[start..].find('{').unwrap();
    let mut depth = 0;
    for (i, ch) in source[open..].char_indices() {
        match ch {
            '{' => depth += 1,
            '}' => {
                depth -= 1;
                if depth == 0 {
                    return &source[start..=open + i];
                }
            }
            _ => {}
        }
    }
    panic!("{signature} is unterminated")
}

fn exactness_hygiene() {
    let src = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/src");
    let read = |p: &str| std::fs::read_to_string(src.join(p)).unwrap();
    let (ifs, graph, numlab) = (
        read("ifs/mod.rs"),
        read("graphdir/mod.rs"),
        read("numlab/mod.rs"),
    );
    let exact_paths = [
        item_body(&ifs, "pub fn validate("),
        item_body(&graph, "pub fn expand("),
        item_body(&numlab, "impl CoverBuilder"),
        item_body(&numlab, "fn build_covers("),
    ];
    for body in exact_paths {
        for token in ["f64", "f32", "HpFloat", "EPS"] {
            assert!(!body.contains(token), "float token {token} in\n{body}");
        }
    }
    let mut gaps = 0;
    for (_, _, s) in sweep() {
        for policy in [Policy::CutAtTouch, Policy::KeepTouch] {
            match build_graph(&s, policy, default_vertex_ceiling(&s)) {
                Err(GraphError::UnexpectedChildGap { .. }) => gaps += 1,
                other => {
                    other.unwrap();
                }
            }
        }
        cover(&s, 3).unwrap();
    }
    assert_eq!(gaps, 0);
}

fn main() {
    let criteria: [(&str, fn()); 9] = [
        (
            "1 worked example: factor and obstruct (3,1)",
            example_reproduction,
        ),
        ("2 verdict list for n <= 12", obstructed_verdicts),
        (
            "3 irreducibility for non-perfect-power m, k <= 6",
            irreducibility_cross_check,
        ),
        (
            "4 Perron root equals beta under both policies",
            dimension_identity,
        ),
        ("5 row identities under cut-touch", row_identities),
        (
            "6 nonneg-tail search and random products",
            nonneg_tail_search,
        ),
        ("7 half-exponent dust is not ruled out", half_exponent_dust),
        (
            "8 numeric dimension, counts and box counting",
            numeric_dimension,
        ),
        ("9 exact paths and gap closure", exactness_hygiene),
    ];
    std::panic::set_hook(Box::new(|info| eprintln!("  {info}")));
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let ok = catch_unwind(AssertUnwindSafe(check)).is_ok();
        let status = if ok { "PASS" } else { "FAIL" };
        println!("{status} criterion {name} ({:.2?})", start.elapsed());
        failed += usize::from(!ok);
    }
    if failed > 0 {
        eprintln!("{failed} criteria failed");
        std::process::exit(1);
    }
}
