use num_bigint::BigUint;
use num_traits::Signed;
use overlapkit::exactnum::{is_perfect_power, rat};
use overlapkit::ifs::{dimension, feasibility_slack, moran_dimension, DustIfsSpec};
use overlapkit::intpoly::{family_poly, IntPoly};
use overlapkit::obstruction::{
    dust_candidate_check, sweep, theorem_verdict, Conclusion, MRule, Verdict,
};

#[test]
fn obstructed_exactly_for_non_perfect_powers() {
    let reports = sweep(3, 12, &MRule::All, 8).unwrap();
    assert_eq!(reports.len(), (3..=12).map(|n| n - 2).sum::<usize>());
    for r in &reports {
        let power = is_perfect_power(&BigUint::from(r.m));
        assert_eq!(
            r.verdict == Verdict::Obstructed,
            power.is_none(),
            "({}, {})",
            r.n,
            r.m
        );
        assert_eq!(r.perfect_power, power);
        if r.verdict == Verdict::Obstructed {
            assert!(r.reducible_ks.is_empty());
        }
    }
}

#[test]
fn reported_factors_rebuild_the_family_polynomial() {
    for r in sweep(3, 12, &MRule::Values(vec![1, 4, 8, 9]), 8).unwrap() {
        for red in &r.reducible_ks {
            assert!((2..=r.kmax).contains(&red.k));
            assert!(red.factors.len() >= 2);
            let product = red.factors.iter().fold(IntPoly::one(), |acc, f| &acc * f);
            assert_eq!(product, family_poly(r.n as i64, r.m as i64, red.k));
        }
    }
}

#[test]
fn larger_kmax_only_adds_evidence() {
    for (n, m) in [(3, 1), (6, 4), (10, 8), (11, 9), (7, 2), (6, 1)] {
        let mut previous: Option<Vec<usize>> = None;
        let mut verdicts = Vec::new();
        for kmax in 2..=8 {
            let r = theorem_verdict(n, m, kmax).unwrap();
            let ks: Vec<usize> = r.reducible_ks.iter().map(|x| x.k).collect();
            if let Some(prev) = &previous {
                assert!(
                    prev.iter().all(|k| ks.contains(k)),
                    "({n}, {m}) kmax {kmax}"
                );
            }
            previous = Some(ks);
            verdicts.push(r.verdict);
        }
        if verdicts[0] == Verdict::Obstructed {
            assert!(verdicts.iter().all(|v| *v == Verdict::Obstructed));
        }
        if let Some(i) = verdicts
            .iter()
            .position(|v| *v == Verdict::NecessaryConditionMet)
        {
            assert!(verdicts[i..]
                .iter()
                .all(|v| *v == Verdict::NecessaryConditionMet));
        }
    }
}

#[test]
fn half_exponent_dust_matches_for_every_feasible_lambda() {
    let mut checked = 0;
    for den in 4..=40i64 {
        for num in 1..den {
            let lambda = rat(num, den);
            if feasibility_slack(3, 1, &lambda).is_negative() || *lambda.numer() != num.into() {
                continue;
            }
            let dust = DustIfsSpec::LambdaExponents {
                base: lambda.clone(),
                exponents: vec![rat(1, 1), rat(1, 2)],
            };
            let c = dust_candidate_check(3, 1, &lambda, &dust).unwrap();
            assert_eq!(c.conclusion, Conclusion::NotRuledOut, "lambda {lambda}");
            assert_eq!(c.gcd.unwrap().to_string(), "x^2-x-1");
            let moran = moran_dimension(&dust).unwrap().s.to_f64();
            let s = dimension(3, 1, &lambda).unwrap().s.to_f64();
            assert!((moran - s).abs() < 1e-9, "lambda {lambda}: {moran} vs {s}");
            checked += 1;
        }
    }
    assert!(checked > 100);
}

#[test]
fn not_ruled_out_implies_equal_dimensions() {
    let candidates: Vec<Vec<(i64, i64)>> = vec![
        vec![(1, 1), (1, 2)],
        vec![(1, 2), (1, 1)],
        vec![(1, 1), (1, 1)],
        vec![(1, 2), (1, 2), (1, 2)],
        vec![(1, 1), (1, 1), (1, 1)],
        vec![(1, 3), (2, 3), (1, 1)],
        vec![(1, 1), (3, 2), (1, 2)],
    ];
    for (n, m, lambda) in [
        (3, 1, rat(1, 4)),
        (4, 1, rat(1, 5)),
        (4, 2, rat(1, 4)),
        (5, 3, rat(1, 5)),
    ] {
        for exps in &candidates {
            let dust = DustIfsSpec::LambdaExponents {
                base: lambda.clone(),
                exponents: exps.iter().map(|&(a, b)| rat(a, b)).collect(),
            };
            let c = dust_candidate_check(n, m, &lambda, &dust).unwrap();
            if c.conclusion == Conclusion::NotRuledOut {
                let moran = moran_dimension(&dust).unwrap().s.to_f64();
                let s = dimension(n, m, &lambda).unwrap().s.to_f64();
                assert!((moran - s).abs() < 1e-9, "({n},{m}) {exps:?}");
            }
            if c.shared_root {
                assert!(c.gcd.unwrap().degree().unwrap() > 0);
            }
        }
    }
}
