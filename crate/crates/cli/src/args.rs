use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use overlapkit::exactnum::{parse_rational, parse_rational_list};
use overlapkit::graphdir::Policy;
use overlapkit::intpoly::Prop4Strategy;

fn rational(text: &str) -> Result<BigRational, String> {
    parse_rational(text).map_err(|e| e.to_string())
}

/// A comma-separated list of rationals given as one flag value.
#[derive(Clone, Debug, PartialEq)]
pub struct Rationals(pub Vec<BigRational>);

fn rational_list(text: &str) -> Result<Rationals, String> {
    parse_rational_list(text)
        .map(Rationals)
        .map_err(|e| e.to_string())
}

#[derive(Parser, Debug)]
#[command(
    name = "overlapkit",
    version,
    about = "Self-similar sets with exact overlaps"
)]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(
        long,
        global = true,
        env = "OVERLAPKIT_PRECISION_BITS",
        default_value_t = 128
    )]
    pub precision_bits: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    CutTouch,
    KeepTouch,
}

impl From<PolicyArg> for Policy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::CutTouch => Policy::CutAtTouch,
            PolicyArg::KeepTouch => Policy::KeepTouch,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Quotient,
    Dividend,
}

impl From<StrategyArg> for Prop4Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Quotient => Prop4Strategy::QuotientEnum,
            StrategyArg::Dividend => Prop4Strategy::DividendEnum,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct ClassArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long, value_parser = rational)]
    pub lambda: BigRational,
}

#[derive(Args, Debug, Clone)]
pub struct SpecArgs {
    #[arg(long, value_parser = rational)]
    pub lambda: BigRational,
    /// Comma-separated offsets `b_1, …, b_n`.
    #[arg(long, value_parser = rational_list, allow_hyphen_values = true)]
    pub b: Rationals,
    /// Accept any system with ratio in (0, 1), not only class members.
    #[arg(long)]
    pub allow_non_class: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Hausdorff dimension ln β / (−ln λ).
    Dimension(ClassArgs),
    /// Classify the steps of a system and report its (n, m).
    Validate {
        #[arg(long, value_parser = rational)]
        lambda: BigRational,
        #[arg(long, value_parser = rational_list, allow_hyphen_values = true)]
        b: Rationals,
    },
    /// Build offsets for a step pattern, or a random pattern from --seed.
    Generate {
        #[command(flatten)]
        class: ClassArgs,
        /// Word over O, T, G of length n−1.
        #[arg(long)]
        pattern: Option<String>,
    },
    /// Graph-directed decomposition, Perron root and exact β-eigen check.
    Graph {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, value_enum, default_value_t = PolicyArg::CutTouch)]
        policy: PolicyArg,
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Defaults to 10·n.
        #[arg(long)]
        vertex_ceiling: Option<usize>,
    },
    /// Factor an integer polynomial.
    Factor {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
    },
    /// Verdict for one (n, m).
    Obstruct {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 8)]
        kmax: usize,
    },
    /// Verdicts for every class member with n ≤ nmax.
    ObstructSweep {
        #[arg(long, default_value_t = 3)]
        nmin: usize,
        #[arg(long)]
        nmax: usize,
        #[arg(long, default_value_t = 8)]
        kmax: usize,
        /// Restrict to these m (comma-separated).
        #[arg(long, value_delimiter = ',')]
        m: Option<Vec<usize>>,
    },
    /// Compare a member with a dust-like system.
    #[command(group(ArgGroup::new("dust").required(true).args(["ratios", "exponents"])))]
    DustCheck {
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long, value_parser = rational_list)]
        ratios: Option<Rationals>,
        /// Exponents of λ.
        #[arg(long, value_parser = rational_list)]
        exponents: Option<Rationals>,
    },
    /// Solve the Moran equation Σ r_j^s = 1.
    #[command(group(ArgGroup::new("dust").required(true).args(["ratios", "exponents"])))]
    Moran {
        #[arg(long, value_parser = rational_list)]
        ratios: Option<Rationals>,
        #[arg(long, value_parser = rational_list, requires = "base")]
        exponents: Option<Rationals>,
        #[arg(long, value_parser = rational)]
        base: Option<BigRational>,
    },
    /// Search for nonneg-tail multiples of x^(2q) − n·x^q + m.
    Prop4 {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        n: i64,
        #[arg(long)]
        m: i64,
        #[arg(long)]
        max_degree: usize,
        #[arg(long)]
        coeff_bound: i64,
        #[arg(long, value_enum, default_value_t = StrategyArg::Quotient)]
        strategy: StrategyArg,
        #[arg(long)]
        ceiling: Option<u128>,
    },
    /// Draw the covers of depth 0..=L as SVG, optionally with a CSV table.
    Render {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        svg: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Cylinder counts N_0..N_L and their growth rate.
    Growth {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Box-counting dimension estimate on grids of side λ^j.
    Boxdim {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        grid_levels: usize,
    },
}
