//! `padic-hl`: exact tables and sampling checks from the command line.
//!
//! Exit status: 0 on success, 1 on a domain error, 2 on bad usage, 3 when a
//! verification fails.

mod commands;
mod emit;

use clap::{Args, Parser, Subcommand, ValueEnum};
use emit::Format;
use num_rational::BigRational;
use padic_hl::exactnum::parse_rational;
use padic_hl::Signature;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "padic-hl", version, about = "Hall-Littlewood tables and p-adic matrix laws")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Hall-Littlewood P or Q polynomial (possibly skew) in explicit variables.
    Hl(HlArgs),
    /// Structure coefficients c^λ_{μ,ν}(t), and g^λ_{μ,ν}(q) when --lambda is given.
    Coeff(CoeffArgs),
    /// One probability of a singular-number law.
    Prob(ProbArgs),
    /// Exact table of a law up to a part cutoff.
    Dist(DistArgs),
    /// Histogram of sampled singular numbers.
    Simulate(SimArgs),
    /// Sampled histogram against the exact law, or a named grid suite.
    Verify(VerifyArgs),
    /// Brute-force counts over finite residue rings.
    Oracle(OracleArgs),
}

pub(crate) fn sig(s: &str) -> Result<Signature, String> {
    s.parse().map_err(|e: padic_hl::Error| e.to_string())
}

pub(crate) fn rational(s: &str) -> Result<BigRational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// Either an exact `t` or the symbolic parameter.
#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub(crate) struct ParamArgs {
    /// Parameter as an exact fraction, e.g. 1/3.
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    pub t: Option<BigRational>,
    /// Keep t symbolic.
    #[arg(long)]
    pub symbolic: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub(crate) enum PolyKind {
    P,
    Q,
}

#[derive(Args, Debug)]
pub(crate) struct HlArgs {
    #[arg(long, value_parser = sig, allow_hyphen_values = true)]
    pub lambda: Signature,
    /// Inner signature of a skew polynomial.
    #[arg(long, value_parser = sig, allow_hyphen_values = true)]
    pub mu: Option<Signature>,
    #[arg(long, value_enum, default_value = "p")]
    pub kind: PolyKind,
    /// Number of variables of a skew polynomial (default: the length difference, or 1).
    #[arg(long)]
    pub n: Option<usize>,
    #[command(flatten)]
    pub param: ParamArgs,
}

#[derive(Args, Debug)]
pub(crate) struct CoeffArgs {
    /// std, alt or her.
    #[arg(long)]
    pub case: String,
    #[arg(long, value_parser = sig, allow_hyphen_values = true)]
    pub mu: Signature,
    #[arg(long, value_parser = sig, allow_hyphen_values = true)]
    pub nu: Signature,
    /// Restrict to one outcome and add its Hecke polynomial.
    #[arg(long, value_parser = sig, allow_hyphen_values = true)]
    pub lambda: Option<Signature>,
    #[command(flatten)]
    pub param: ParamArgs,
}

/// Selects one law. Which fields are needed depends on the family.
#[derive(Args, Debug, Clone)]
pub(crate) struct LawArgs {
    /// product, corner, haar, corner_invertible, joint_corners, joint_product or invertible.
    #[arg(long)]
    pub family: String,
    /// alt, alt_odd, alt_even or her.
    #[arg(long)]
    pub case: String,
    #[arg(long, value_parser = sig, allow_hyphen_values = true)]
    pub mu: Option<Signature>,
    #[arg(long, value_parser = sig, allow_hyphen_values = true)]
    pub nu: Option<Signature>,
    #[arg(long, value_parser = sig, allow_hyphen_values = true)]
    pub given: Option<Signature>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
}

#[derive(Args, Debug)]
pub(crate) struct ProbArgs {
    #[command(flatten)]
    pub law: LawArgs,
    /// Outcome; for joint laws a chain such as "1;2,0".
    #[arg(long, alias = "lambda", allow_hyphen_values = true)]
    pub target: String,
    #[command(flatten)]
    pub param: ParamArgs,
    /// Also print a certified enclosure of this width from truncated Cauchy
    /// sums (Haar laws only).
    #[arg(long, value_parser = rational)]
    pub tolerance: Option<BigRational>,
}

#[derive(Args, Debug)]
pub(crate) struct DistArgs {
    #[command(flatten)]
    pub law: LawArgs,
    #[arg(long, value_parser = rational)]
    pub t: BigRational,
    /// Largest part tabulated.
    #[arg(long, default_value_t = 6)]
    pub cutoff: i64,
}

#[derive(Args, Debug, Clone)]
pub(crate) struct RingArgs {
    /// Residue characteristic.
    #[arg(long, default_value_t = 3)]
    pub p: u64,
    /// Precision K (work modulo p^K); default cutoff + 4.
    #[arg(long)]
    pub precision: Option<u32>,
    /// Non-residue defining the quadratic extension (default: the smallest).
    #[arg(long)]
    pub nonresidue: Option<u64>,
    /// Number of samples (default 100000; 20000 per run for the reproducibility suite).
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, env = "PADIC_HL_THREADS")]
    pub threads: Option<usize>,
}

#[derive(Args, Debug)]
pub(crate) struct SimArgs {
    #[command(flatten)]
    pub law: LawArgs,
    #[command(flatten)]
    pub ring: RingArgs,
    #[arg(long, default_value_t = 4)]
    pub cutoff: i64,
}

#[derive(Args, Debug)]
pub(crate) struct VerifyArgs {
    /// Run a grid suite instead of a sampling comparison.
    #[arg(long, conflicts_with_all = ["family", "case"])]
    pub suite: Option<String>,
    #[arg(long, required_unless_present = "suite")]
    pub family: Option<String>,
    #[arg(long, required_unless_present = "suite")]
    pub case: Option<String>,
    #[arg(long, value_parser = sig, allow_hyphen_values = true)]
    pub mu: Option<Signature>,
    #[arg(long, value_parser = sig, allow_hyphen_values = true)]
    pub nu: Option<Signature>,
    #[arg(long, value_parser = sig, allow_hyphen_values = true)]
    pub given: Option<Signature>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[command(flatten)]
    pub ring: RingArgs,
    /// Largest part tabulated (default: 4, or the whole support of a product law).
    #[arg(long)]
    pub cutoff: Option<i64>,
    /// Chi-square p-value below which the comparison fails.
    #[arg(long, default_value_t = padic_hl::veristat::P_THRESHOLD)]
    pub p_threshold: f64,
    /// Largest tolerated fraction of precision-censored samples.
    #[arg(long, default_value_t = padic_hl::veristat::DISCARD_CAP)]
    pub discard_cap: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub(crate) enum OracleKind {
    /// Fraction of invertible matrices over the residue ring.
    Invertible,
    /// Rank distribution of the reduction mod p.
    Residue,
    /// Left cosets in K π_μ K (alt, lower-triangular representatives).
    Cosets,
}

#[derive(Args, Debug)]
pub(crate) struct OracleArgs {
    #[arg(long, value_enum)]
    pub family: OracleKind,
    #[arg(long, default_value = "alt")]
    pub case: String,
    /// Matrix size.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_parser = sig, allow_hyphen_values = true)]
    pub mu: Option<Signature>,
    /// Residue field size q.
    #[arg(long)]
    pub p: u64,
}

pub(crate) enum Failure {
    Usage(String),
    Domain(padic_hl::Error),
    Verification(emit::Doc),
}

impl From<padic_hl::Error> for Failure {
    fn from(e: padic_hl::Error) -> Self {
        match e {
            padic_hl::Error::Parse(m) => Failure::Usage(m),
            e => Failure::Domain(e),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match &cli.verb {
        Verb::Hl(a) => commands::hl(a),
        Verb::Coeff(a) => commands::coeff(a),
        Verb::Prob(a) => commands::prob(a),
        Verb::Dist(a) => commands::dist(a),
        Verb::Simulate(a) => commands::simulate(a),
        Verb::Verify(a) => commands::verify(a),
        Verb::Oracle(a) => commands::oracle(a),
    };
    let stdout = std::io::stdout();
    let emit = |doc: &emit::Doc| {
        if let Err(e) = doc.write(cli.format, &mut stdout.lock()) {
            eprintln!("error: {e}");
        }
    };
    match result {
        Ok(doc) => {
            emit(&doc);
            ExitCode::SUCCESS
        }
        Err(Failure::Verification(doc)) => {
            emit(&doc);
            eprintln!("verification failed");
            ExitCode::from(3)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
