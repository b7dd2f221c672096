//! `bhcount`: Bateman-Horn constants, polynomial prime counts, reference
//! tables, Ulam spirals and prime-rich quadratics from the command line.

mod commands;
mod numbers;
mod output;
mod tables;

use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

use crate::numbers::parse_count;
use crate::output::Format;
use crate::tables::TableId;

/// Default scale caps; larger requests need `--allow-large`.
pub const MAX_X: u64 = 1_000_000_000;
pub const MAX_PRIME_BOUND: u64 = 100_000_000;
/// Environment variable holding the memory budget in bytes.
pub const MEMORY_ENV: &str = "BHCOUNT_MEMORY_BYTES";

#[derive(Debug, Parser)]
#[command(
    name = "bhcount",
    version,
    about = "Bateman-Horn constants and prime counts for polynomial families"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Worker threads (results do not depend on this).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Lift the default caps x <= 1e9 and prime bound <= 1e8.
    #[arg(long, global = true)]
    pub allow_large: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a Bateman-Horn constant.
    Constant(ConstantArgs),
    /// Count primes produced by a family, pairs, chains or progressions.
    Count(CountArgs),
    /// Regenerate a reference table, optionally diffing against golden values.
    Tables(TablesArgs),
    /// Render an Ulam spiral and report on quadratic rays.
    Ulam(UlamArgs),
    /// Build t^2+t+k with k chosen by the Chinese remainder theorem.
    Euler(EulerArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Form {
    /// Euler product over the primes up to the bound.
    Bh,
    /// Arithmetic progression a t + b.
    Ap,
    /// Prime pairs {t, t+k}.
    Ck,
    /// Quadratic a t^2 + b t + c.
    Hlf,
    /// Progressions {t, t+a, ..., t+(k-1)a} with a the k-th primorial.
    Greentao,
}

#[derive(Debug, Args)]
pub struct ConstantArgs {
    /// Comma-separated family, e.g. "t^2+1" or "t, t+2".
    #[arg(short = 'f', long)]
    pub family: Option<String>,
    #[arg(long, value_enum, default_value_t = Form::Bh)]
    pub form: Form,
    /// Prime bound for the product.
    #[arg(long, value_parser = parse_count, default_value = "1e7")]
    pub bound: u64,
    /// Prime bounds at which to record partial products (default: powers of ten).
    #[arg(long, value_delimiter = ',', value_parser = parse_count, conflicts_with = "prime_counts")]
    pub checkpoints: Option<Vec<u64>>,
    /// Record partial products after this many primes instead.
    #[arg(long, value_delimiter = ',', value_parser = parse_count)]
    pub prime_counts: Option<Vec<u64>>,
    /// Evaluate the product even for an inadmissible family.
    #[arg(long)]
    pub allow_inadmissible: bool,
    #[arg(short = 'a', long)]
    pub modulus: Option<u64>,
    #[arg(short = 'b', long, allow_hyphen_values = true)]
    pub residue: Option<i64>,
    #[arg(short = 'k')]
    pub k: Option<u64>,
    /// Coefficients a,b,c of a t^2 + b t + c.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub coeffs: Option<Vec<i64>>,
    /// Common difference for --form greentao instead of the primorial.
    #[arg(long)]
    pub step: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ChainArg {
    First,
    Second,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("mode").required(true).multiple(false)
    .args(["family", "pairs", "chains", "ap", "landau", "sophie", "brun", "illiac"])))]
pub struct CountArgs {
    #[arg(short = 'f', long)]
    pub family: Option<String>,
    /// Prime pairs p, p+k.
    #[arg(long)]
    pub pairs: bool,
    /// Cunningham chains of the given kind.
    #[arg(long, value_enum)]
    pub chains: Option<ChainArg>,
    /// Primes p ≡ B (mod A), given as A,B.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub ap: Option<Vec<i64>>,
    /// Primes of the form n^2+1 up to x.
    #[arg(long)]
    pub landau: bool,
    /// Sophie Germain primes.
    #[arg(long)]
    pub sophie: bool,
    /// Partial Brun sum over twin primes.
    #[arg(long)]
    pub brun: bool,
    /// Primes p <= 112999 with p^2+p+1 prime.
    #[arg(long)]
    pub illiac: bool,
    #[arg(short = 'x', value_parser = parse_count)]
    pub x: Option<u64>,
    /// Count among the first N primes (pairs only).
    #[arg(long, value_parser = parse_count, conflicts_with = "x")]
    pub first_primes: Option<u64>,
    /// Gap for --pairs.
    #[arg(short = 'k', default_value_t = 2)]
    pub k: u64,
    /// Search bound for --chains.
    #[arg(long, value_parser = parse_count)]
    pub bound: Option<u64>,
    #[arg(long, default_value_t = 2)]
    pub min_len: usize,
    /// Add the Bateman-Horn prediction and ratio.
    #[arg(long)]
    pub predict: bool,
    /// Prime bound for the constant used by --predict.
    #[arg(long, value_parser = parse_count, default_value = "1e7")]
    pub constant_bound: u64,
    #[arg(long)]
    pub allow_inadmissible: bool,
}

#[derive(Debug, Args)]
pub struct TablesArgs {
    #[arg(long, value_enum)]
    pub id: TableId,
    /// Largest x (logint, disagree).
    #[arg(long, value_parser = parse_count)]
    pub max: Option<u64>,
    /// Largest exponent n (divergezero, pis).
    #[arg(long)]
    pub max_n: Option<u32>,
    /// Largest k (ck).
    #[arg(long, default_value_t = 150)]
    pub through: u64,
    /// Also write the table as CSV to this path.
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
    /// Compare with a golden CSV (the bundled one when no path is given); exit 4 on mismatch.
    #[arg(long, num_args = 0..=1, default_missing_value = "")]
    pub diff: Option<String>,
    /// Significant digits for comparing decimal cells.
    #[arg(long, default_value_t = 5)]
    pub sig_digits: u32,
}

#[derive(Debug, Args)]
pub struct UlamArgs {
    /// Raster side length (odd).
    #[arg(long)]
    pub side: Option<usize>,
    /// PGM output path.
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
    /// Anchor value of a ray; pair each with --dir.
    #[arg(long)]
    pub ray: Vec<u64>,
    #[arg(long)]
    pub dir: Vec<bhcount::ulam::Direction>,
    /// Spiral steps to skip before fitting.
    #[arg(long, default_value_t = 0)]
    pub skip: u64,
    /// Print fitted quadratics, prime counts and constants for the rays.
    #[arg(long)]
    pub report: bool,
    /// Ray values examined by --report.
    #[arg(long, default_value_t = 1000)]
    pub count: usize,
    /// Draw the rays on the raster.
    #[arg(long)]
    pub overlay: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    LeastPrimitiveRoot,
    LeastNonresidue,
    /// Least primitive roots for 3..541 and 260 for 547, as in the published
    /// 100-prime value (use with --first-odd-primes 100).
    PublishedK100,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("selection").multiple(false).args(["primes_through", "first_odd_primes"])))]
pub struct EulerArgs {
    /// Use every odd prime up to N.
    #[arg(long, value_parser = parse_count)]
    pub primes_through: Option<u64>,
    /// Use the first N odd primes.
    #[arg(long, value_parser = parse_count)]
    pub first_odd_primes: Option<u64>,
    #[arg(long, value_enum, default_value_t = RuleArg::LeastPrimitiveRoot)]
    pub rule: RuleArg,
    /// Explicit nonresidues, one per prime.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        conflicts_with = "rule"
    )]
    pub residues: Option<Vec<i64>>,
    /// Report the representative of least absolute value.
    #[arg(long)]
    pub least_absolute: bool,
    /// Count n = 0, 1, ... with n^2+n+K prime; K defaults to the constructed k.
    #[arg(long, num_args = 0..=1, default_missing_value = "")]
    pub streak: Option<String>,
    /// Also evaluate the Bateman-Horn constant at this prime bound.
    #[arg(long, value_parser = parse_count)]
    pub constant_bound: Option<u64>,
}

#[derive(Debug)]
pub enum CliError {
    Core(bhcount::Error),
    Usage(String),
    Io(String),
    /// Generated output disagrees with a golden file.
    Mismatch(String),
}

impl From<bhcount::Error> for CliError {
    fn from(e: bhcount::Error) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(m) | CliError::Io(m) | CliError::Mismatch(m) => f.write_str(m),
        }
    }
}

impl CliError {
    /// 1 usage or parse, 2 inadmissible input, 3 resource budget, 4 golden mismatch.
    pub fn exit_code(&self) -> u8 {
        use bhcount::Error as E;
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Mismatch(_) => 4,
            CliError::Core(e) => match e {
                E::Capacity { .. } | E::Range(_) => 3,
                E::Inadmissible(_)
                | E::VanishesModulo(_)
                | E::Quadratic(_)
                | E::NotNonresidue(..)
                | E::DuplicateMember(_)
                | E::ZeroPolynomial
                | E::ConstantPolynomial => 2,
                E::Domain(_)
                | E::Degree { .. }
                | E::Parse { .. }
                | E::NotQuadratic(_)
                | E::InsufficientCheckpoints(_) => 1,
            },
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match commands::run(&cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(CliError::Mismatch(report)) => {
            print!("{report}");
            eprintln!("error: output differs from the golden table");
            ExitCode::from(4)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
