use std::path::Path;

use num_rational::BigRational;
use overlapkit::exactnum::{HpFloat, QuadSurd};
use overlapkit::graphdir::{
    build_graph, default_vertex_ceiling, emit_dot, spectral_radius_with, verify_beta_eigen,
    GraphSystem, Policy, RAYLEIGH_TOLERANCE,
};
use overlapkit::ifs::{
    dimension_with_precision, generate, moran_dimension_with, validate, DustIfsSpec, PatternSource,
    SelfSimilarSpec,
};
use overlapkit::intpoly::{
    factor, parse_poly, prop4_search_with, IntPoly, Prop4Config, Prop4Outcome, Prop4Strategy,
    DEFAULT_SEARCH_CEILING,
};
use overlapkit::numlab::{
    box_count_dimension, cover_table, covers, cylinder_growth, emit_csv, emit_svg, growth_table,
    BoxCountResult, GrowthResult, NumlabError,
};
use overlapkit::obstruction::{
    dust_candidate_check_with, sweep, theorem_verdict, EquivalenceCheck, MRule, ObstructionReport,
};
use serde::{Deserialize, Serialize};

use crate::args::{Command, Rationals, SpecArgs};
use crate::output::write_atomic;
use crate::{CliError, Settings};

/// A finished command: its report and the exit code it asks for.
pub struct Outcome {
    pub report: serde_json::Value,
    pub exit_code: i32,
}

fn ok<T: Serialize>(wire: &T) -> Result<Outcome, CliError> {
    Ok(Outcome {
        report: serde_json::to_value(wire).expect("reports serialize"),
        exit_code: 0,
    })
}

fn decimal(value: &HpFloat, bits: usize) -> String {
    value.to_decimal_string(((bits as f64) * std::f64::consts::LOG10_2).floor() as usize)
}

fn surd_decimal(value: &QuadSurd, bits: usize) -> Result<String, CliError> {
    Ok(decimal(
        &value.to_hp(bits + 16).map_err(overlapkit::Error::from)?,
        bits,
    ))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DimensionOut {
    pub n: usize,
    pub m: usize,
    #[serde(with = "overlapkit::exactnum::serde_rational")]
    pub lambda: BigRational,
    pub beta: QuadSurd,
    pub beta_decimal: String,
    pub s: String,
    pub precision_bits: usize,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ValidateOut {
    pub n: usize,
    pub m: usize,
    pub pattern: String,
    #[serde(with = "overlapkit::exactnum::serde_rational")]
    pub lambda: BigRational,
    #[serde(with = "overlapkit::exactnum::serde_rational_vec")]
    pub offsets: Vec<BigRational>,
    #[serde(with = "overlapkit::exactnum::serde_rational_vec")]
    pub steps: Vec<BigRational>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct GenerateOut {
    pub n: usize,
    pub m: usize,
    pub pattern: String,
    pub seed: Option<u64>,
    #[serde(flatten)]
    pub spec: SelfSimilarSpec,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct GraphOut {
    pub n: usize,
    pub m: usize,
    pub pattern: String,
    pub vertex_count: usize,
    pub graph: GraphSystem,
    /// Perron root, accurate to the stated relative tolerance.
    pub rho: String,
    pub rho_tolerance: f64,
    pub power_iterations: u64,
    pub beta: String,
    pub beta_is_eigenvalue: bool,
    pub note: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FactorOut {
    pub input: IntPoly,
    pub unit: i8,
    pub content: String,
    pub factors: Vec<IntPoly>,
    pub multiplicities: Vec<u32>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SweepOut {
    pub nmin: usize,
    pub nmax: usize,
    pub kmax: usize,
    pub reports: Vec<ObstructionReport>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MoranOut {
    pub dust: DustIfsSpec,
    pub s: String,
    pub residual: f64,
    pub iterations: u32,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Prop4Out {
    pub q: usize,
    pub n: i64,
    pub m: i64,
    pub max_degree: usize,
    pub coeff_bound: i64,
    pub strategy: Prop4Strategy,
    pub outcome: Prop4Outcome,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RenderOut {
    pub depth: usize,
    pub counts: Vec<usize>,
    pub svg: String,
    pub csv: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct GrowthOut {
    #[serde(flatten)]
    pub growth: GrowthResult,
    pub csv: Option<String>,
}

fn touch_note(policy: Policy) -> String {
    match policy {
        Policy::CutAtTouch => "pieces cut at a touching point share that single point, so the \
            decomposition is disjoint only up to finitely many points; keep-touch gives \
            strictly separated pieces"
            .to_string(),
        Policy::KeepTouch => "touching copies stay together, so distinct pieces are separated \
            by positive gaps"
            .to_string(),
    }
}

fn checked_spec(args: &SpecArgs) -> Result<SelfSimilarSpec, CliError> {
    if args.allow_non_class {
        let spec = SelfSimilarSpec {
            lambda: args.lambda.clone(),
            offsets: args.b.0.clone(),
        };
        if spec.offsets.windows(2).any(|w| w[0] >= w[1]) {
            return Err(NumlabError::BadSpec("offsets must be strictly increasing".into()).into());
        }
        return Ok(spec);
    }
    Ok(validate(&args.lambda, &args.b.0)?.0)
}

fn dust_of(
    ratios: &Option<Rationals>,
    exponents: &Option<Rationals>,
    base: BigRational,
) -> DustIfsSpec {
    match (ratios, exponents) {
        (Some(r), _) => DustIfsSpec::ExplicitRatios {
            ratios: r.0.clone(),
        },
        (None, Some(e)) => DustIfsSpec::LambdaExponents {
            base,
            exponents: e.0.clone(),
        },
        (None, None) => unreachable!("clap requires one of the two"),
    }
}

fn write_file(path: &Path, text: &str) -> Result<String, CliError> {
    write_atomic(path, text)?;
    Ok(path.display().to_string())
}

pub fn run(command: &Command, settings: &Settings) -> Result<Outcome, CliError> {
    let bits = settings.precision_bits;
    match command {
        Command::Dimension(c) => {
            let d = dimension_with_precision(c.n, c.m, &c.lambda, bits)?;
            ok(&DimensionOut {
                n: c.n,
                m: c.m,
                lambda: d.lambda.clone(),
                beta_decimal: surd_decimal(&d.beta, bits)?,
                beta: d.beta,
                s: decimal(&d.s, bits),
                precision_bits: bits,
            })
        }
        Command::Validate { lambda, b } => {
            let (spec, pattern) = validate(lambda, &b.0)?;
            ok(&ValidateOut {
                n: pattern.n(),
                m: pattern.m(),
                pattern: pattern.word(),
                steps: spec.steps().collect(),
                lambda: spec.lambda,
                offsets: spec.offsets,
            })
        }
        Command::Generate { class, pattern } => {
            let source = match pattern {
                Some(word) => PatternSource::Word(word.clone()),
                None => PatternSource::Random(settings.seed),
            };
            let spec = generate(class.n, class.m, &class.lambda, &source)?;
            let (_, found) = validate(&spec.lambda, &spec.offsets)?;
            ok(&GenerateOut {
                n: class.n,
                m: class.m,
                pattern: found.word(),
                seed: pattern.is_none().then_some(settings.seed),
                spec,
            })
        }
        Command::Graph {
            spec,
            policy,
            dot,
            vertex_ceiling,
        } => {
            let (spec, pattern) = validate(&spec.lambda, &spec.b.0)?;
            let policy = Policy::from(*policy);
            let ceiling = vertex_ceiling.unwrap_or_else(|| default_vertex_ceiling(&spec));
            let graph = build_graph(&spec, policy, ceiling)?;
            let spectral = spectral_radius_with(&graph.adjacency, bits)?;
            let (n, m) = (pattern.n(), pattern.m());
            let beta_is_eigenvalue = verify_beta_eigen(&graph.adjacency, n as i64, m as i64)?;
            let (beta, _) = overlapkit::ifs::class_roots(n, m)?;
            if let Some(path) = dot {
                write_file(path, &emit_dot(&graph))?;
            }
            ok(&GraphOut {
                n,
                m,
                pattern: pattern.word(),
                vertex_count: graph.vertices.len(),
                rho: spectral.rho.to_decimal_string(13),
                rho_tolerance: RAYLEIGH_TOLERANCE,
                power_iterations: spectral.iterations,
                beta: surd_decimal(&beta, bits)?,
                beta_is_eigenvalue,
                note: touch_note(policy),
                graph,
            })
        }
        Command::Factor { poly } => {
            let p = parse_poly(poly)?;
            let f = factor(&p)?;
            ok(&FactorOut {
                input: p,
                unit: f.unit,
                content: f.content.to_string(),
                multiplicities: f.factors.iter().map(|(_, e)| *e).collect(),
                factors: f.factors.into_iter().map(|(g, _)| g).collect(),
            })
        }
        Command::Obstruct { n, m, kmax } => ok(&theorem_verdict(*n, *m, *kmax)?),
        Command::ObstructSweep {
            nmin,
            nmax,
            kmax,
            m,
        } => {
            let rule = match m {
                Some(values) => MRule::Values(values.clone()),
                None => MRule::All,
            };
            if *kmax < 2 {
                return Err(overlapkit::obstruction::ObstructionError::BadKmax(*kmax).into());
            }
            ok(&SweepOut {
                nmin: *nmin,
                nmax: *nmax,
                kmax: *kmax,
                reports: sweep(*nmin, *nmax, &rule, *kmax)?,
            })
        }
        Command::DustCheck {
            class,
            ratios,
            exponents,
        } => {
            let dust = dust_of(ratios, exponents, class.lambda.clone());
            let check: EquivalenceCheck =
                dust_candidate_check_with(class.n, class.m, &class.lambda, &dust, bits)?;
            ok(&check)
        }
        Command::Moran {
            ratios,
            exponents,
            base,
        } => {
            let dust = dust_of(ratios, exponents, base.clone().unwrap_or_default());
            let r = moran_dimension_with(&dust, bits)?;
            ok(&MoranOut {
                s: r.s.to_decimal_string(12),
                residual: r.residual,
                iterations: r.iterations,
                dust,
            })
        }
        Command::Prop4 {
            q,
            n,
            m,
            max_degree,
            coeff_bound,
            strategy,
            ceiling,
        } => {
            let strategy = Prop4Strategy::from(*strategy);
            let outcome = prop4_search_with(&Prop4Config {
                q: *q,
                n: *n,
                m: *m,
                max_degree: *max_degree,
                coeff_bound: *coeff_bound,
                strategy,
                ceiling: ceiling.unwrap_or(DEFAULT_SEARCH_CEILING),
            })?;
            let hits = !outcome.counterexamples.is_empty();
            let mut out = ok(&Prop4Out {
                q: *q,
                n: *n,
                m: *m,
                max_degree: *max_degree,
                coeff_bound: *coeff_bound,
                strategy,
                outcome,
            })?;
            if hits {
                out.exit_code = 3;
            }
            Ok(out)
        }
        Command::Render {
            spec,
            depth,
            svg,
            csv,
        } => {
            let spec = checked_spec(spec)?;
            let levels = covers(&spec, *depth)?;
            let svg = write_file(svg, &emit_svg(&levels))?;
            let csv = match csv {
                Some(path) => Some(write_file(path, &emit_csv(&cover_table(&levels)))?),
                None => None,
            };
            ok(&RenderOut {
                depth: *depth,
                counts: levels.iter().map(|l| l.count()).collect(),
                svg,
                csv,
            })
        }
        Command::Growth { spec, depth, csv } => {
            let spec = checked_spec(spec)?;
            let growth = cylinder_growth(&spec, *depth)?;
            let csv = match csv {
                Some(path) => Some(write_file(path, &emit_csv(&growth_table(&growth)))?),
                None => None,
            };
            ok(&GrowthOut { growth, csv })
        }
        Command::Boxdim {
            spec,
            depth,
            grid_levels,
        } => {
            let spec = checked_spec(spec)?;
            let r: BoxCountResult = box_count_dimension(&spec, *depth, *grid_levels)?;
            ok(&r)
        }
    }
}

#[cfg(test)]
mod tests {
    use clap::Parser;
    use serde::de::DeserializeOwned;

    use super::*;
    use crate::args::Cli;
    use crate::output;

    fn report(argv: &[&str]) -> serde_json::Value {
        let cli =
            Cli::try_parse_from(std::iter::once("overlapkit").chain(argv.iter().copied())).unwrap();
        let settings = Settings {
            precision_bits: cli.precision_bits,
            seed: cli.seed,
        };
        run(&cli.command, &settings).unwrap().report
    }

    fn round_trips<T: Serialize + DeserializeOwned>(argv: &[&str]) {
        let text = output::json(&report(argv));
        let typed: T = serde_json::from_str(&text).unwrap();
        let again = output::json(&serde_json::to_value(&typed).unwrap());
        assert_eq!(again, text, "{argv:?}");
    }

    #[test]
    fn reports_round_trip_through_their_types() {
        round_trips::<DimensionOut>(&["dimension", "--lambda", "1/4", "--n", "3", "--m", "1"]);
        round_trips::<ValidateOut>(&["validate", "--lambda", "1/5", "--b", "0,4/25,9/25,4/5"]);
        round_trips::<GenerateOut>(&[
            "generate", "--n", "5", "--m", "2", "--lambda", "1/9", "--seed", "4",
        ]);
        round_trips::<GraphOut>(&[
            "graph",
            "--lambda",
            "1/5",
            "--b",
            "0,4/25,9/25,4/5",
            "--policy",
            "keep-touch",
        ]);
        round_trips::<FactorOut>(&["factor", "--poly", "2x^5-2x"]);
        round_trips::<ObstructionReport>(&["obstruct", "--n", "11", "--m", "9"]);
        round_trips::<SweepOut>(&["obstruct-sweep", "--nmax", "6"]);
        round_trips::<EquivalenceCheck>(&[
            "dust-check",
            "--n",
            "3",
            "--m",
            "1",
            "--lambda",
            "1/4",
            "--ratios",
            "1/2,1/2",
        ]);
        round_trips::<EquivalenceCheck>(&[
            "dust-check",
            "--n",
            "3",
            "--m",
            "1",
            "--lambda",
            "1/4",
            "--ratios",
            "1/4,1/6",
        ]);
        round_trips::<MoranOut>(&["moran", "--ratios", "1/3,1/3"]);
        round_trips::<MoranOut>(&["moran", "--base", "1/4", "--exponents", "1,1/2"]);
        round_trips::<Prop4Out>(&[
            "prop4",
            "--q",
            "1",
            "--n",
            "3",
            "--m",
            "1",
            "--max-degree",
            "4",
            "--coeff-bound",
            "3",
        ]);
        round_trips::<GrowthOut>(&[
            "growth",
            "--lambda",
            "1/4",
            "--b",
            "0,3/16,3/4",
            "--depth",
            "4",
        ]);
        round_trips::<BoxCountResult>(&[
            "boxdim",
            "--lambda",
            "1/3",
            "--b",
            "0,2/3",
            "--depth",
            "8",
            "--grid-levels",
            "4",
            "--allow-non-class",
        ]);
    }

    #[test]
    fn factor_report_lists_factors_and_multiplicities() {
        let v = report(&["factor", "--poly", "x^3-x^2"]);
        assert_eq!(v["factors"], serde_json::json!(["x-1", "x"]));
        assert_eq!(v["multiplicities"], serde_json::json!([1, 2]));
    }

    #[test]
    fn generated_pattern_and_seed_are_reported() {
        let v = report(&[
            "generate",
            "--n",
            "4",
            "--m",
            "1",
            "--lambda",
            "1/5",
            "--pattern",
            "OTG",
        ]);
        assert_eq!(
            v["offsets"],
            serde_json::json!(["0", "4/25", "9/25", "4/5"])
        );
        assert_eq!(v["seed"], serde_json::Value::Null);
        let r = report(&[
            "generate", "--n", "6", "--m", "2", "--lambda", "1/10", "--seed", "9",
        ]);
        assert_eq!(r["seed"], serde_json::json!(9));
        assert_eq!(r["pattern"].as_str().unwrap().matches('O').count(), 2);
    }
}
