//! Command-line front end.
//!
//! Exit codes: 0 success, 1 internal error or failed bound check, 2 bad input
//! (usage, malformed or wrong-length blocks), 3 word is not a codeword, 4 I/O.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufRead, BufWriter, Write};
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_traits::FromPrimitive;

use crate::analysis::{
    asymptotic_gap_constant, ccdm_bounds, optimal_k, optimal_lower_bound, sweep, sweep_record,
};
use crate::codebook::{
    divergence_decomposed, letter_distribution, pletter_gap_bounds, CodebookSpec,
};
use crate::combinatorics::{
    binom, center_weighted_sum, log2_big, partial_binom_sum, partial_sum_bounds, stirling_bounds,
    stirling_bounds_log2, BigCount,
};
use crate::error::Error;
use crate::infotheory::{Probability, TargetSource};
use crate::matcher::{ccdm_design, BitBlock, Matcher};
use crate::report::{format_real, write_sweep_csv};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_BAD_INPUT: i32 = 2;
pub const EXIT_NOT_CODEWORD: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "ffdm",
    version,
    about = "Fixed-length binary distribution matching"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Divergence breakdown of one codebook.
    Analyze(AnalyzeArgs),
    /// Map input blocks read from stdin (one per line) to codewords.
    Match(MatchArgs),
    /// Map codewords read from stdin (one per line) back to input blocks.
    Dematch(MatchArgs),
    /// Optimal vs. constant-composition divergence over a range of n, as CSV.
    Sweep(SweepArgs),
    /// Evaluate one of the closed-form bounds against the quantity it brackets.
    Bounds(BoundsArgs),
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    p: TargetSource,
    /// union:K | cc:W[:SIZE] | greedy:M | optimal
    #[arg(long, default_value = "optimal")]
    codebook: Selector,
    #[arg(long = "B", default_value_t = 2)]
    radix: u32,
    /// Also print a single-row CSV of the breakdown.
    #[arg(long)]
    csv: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Scheme {
    Ccdm,
    Optimal,
}

#[derive(Debug, Args)]
struct MatchArgs {
    #[arg(long, value_enum, default_value = "ccdm")]
    scheme: Scheme,
    #[arg(long)]
    n: u64,
    #[arg(long)]
    p: TargetSource,
    #[arg(long = "B", default_value_t = 2)]
    radix: u32,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    p: TargetSource,
    /// Comma list, `a..b[:step]` (inclusive), or `pow2:a..b`.
    #[arg(long)]
    n: NSpec,
    #[arg(long = "B", default_value_t = 2)]
    radix: u32,
    /// Output path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BoundKind {
    Stirling,
    PartialSum,
    CenterWeight,
    PletterGap,
    Eq17,
    Eq18,
    Ccdm,
}

#[derive(Debug, Args)]
struct BoundsArgs {
    #[arg(long, value_enum)]
    kind: BoundKind,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    k: Option<u64>,
    #[arg(long = "B", default_value_t = 2)]
    radix: u32,
}

/// Codebook selector of `analyze --codebook`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Selector {
    Union(u64),
    ConstantComposition(u64, Option<BigCount>),
    Greedy(BigCount),
    Optimal,
}

impl FromStr for Selector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Parse(format!("invalid codebook selector {s:?}"));
        let num = |t: &str| t.parse::<u64>().map_err(|_| bad());
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["optimal"] => Ok(Selector::Optimal),
            ["union", k] => Ok(Selector::Union(num(k)?)),
            ["cc", w] => Ok(Selector::ConstantComposition(num(w)?, None)),
            ["cc", w, size] => Ok(Selector::ConstantComposition(
                num(w)?,
                Some(size.parse().map_err(|_| bad())?),
            )),
            ["greedy", m] => Ok(Selector::Greedy(m.parse().map_err(|_| bad())?)),
            _ => Err(bad()),
        }
    }
}

/// List of block lengths for `sweep --n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NSpec(pub Vec<u64>);

impl FromStr for NSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid n list {s:?}"));
        let num = |t: &str| t.trim().parse::<u64>().map_err(|_| bad());
        if s.is_empty() {
            return Ok(NSpec(Vec::new()));
        }
        if let Some(range) = s.strip_prefix("pow2:") {
            let (a, b) = range.split_once("..").ok_or_else(bad)?;
            let (a, b) = (num(a)?, num(b)?);
            if b >= 64 {
                return Err(bad());
            }
            return Ok(NSpec((a..=b).map(|e| 1u64 << e).collect()));
        }
        if let Some((a, rest)) = s.split_once("..") {
            let (b, step) = match rest.split_once(':') {
                Some((b, step)) => (num(b)?, num(step)?),
                None => (num(rest)?, 1),
            };
            if step == 0 {
                return Err(bad());
            }
            return Ok(NSpec((num(a)?..=b).step_by(step as usize).collect()));
        }
        s.split(',')
            .map(num)
            .collect::<Result<Vec<_>, _>>()
            .map(NSpec)
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BlockLength { .. } | Error::InvalidSymbol { .. } | Error::Parse(_) => {
                EXIT_BAD_INPUT
            }
            Error::InvalidProbability(_) | Error::OutOfDomain(_) => EXIT_BAD_INPUT,
            Error::WeightExceedsLength { .. } | Error::IndexOutOfRange { .. } => EXIT_BAD_INPUT,
            Error::NotACodeword => EXIT_NOT_CODEWORD,
            Error::LogOfZero | Error::EnumerationLimit { .. } => EXIT_INTERNAL,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_IO,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<i32, Failure>;

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code.
pub fn run<I, T>(
    args: I,
    stdin: &mut dyn BufRead,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_BAD_INPUT
            } else {
                EXIT_OK
            };
            let target: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let result = match cli.command {
        Command::Analyze(a) => analyze(&a, stdout),
        Command::Match(a) => match_lines(&a, stdin, stdout, true),
        Command::Dematch(a) => match_lines(&a, stdin, stdout, false),
        Command::Sweep(a) => sweep_cmd(&a, stdout),
        Command::Bounds(a) => bounds(&a, stdout),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn analyze(a: &AnalyzeArgs, out: &mut dyn Write) -> CmdResult {
    let n = a.n;
    let src = &a.p;
    let mut k_hat = None;
    let spec = match &a.codebook {
        Selector::Optimal => {
            let best = optimal_k(n, src)?;
            k_hat = Some(best.k_hat);
            CodebookSpec::union_of_type_sets(n, best.k_hat)?
        }
        Selector::Union(k) => CodebookSpec::union_of_type_sets(n, *k)?,
        Selector::ConstantComposition(w, None) => CodebookSpec::full_type_set(n, *w)?,
        Selector::ConstantComposition(w, Some(size)) => {
            CodebookSpec::constant_composition(n, *w, size.clone())?
        }
        Selector::Greedy(m) => CodebookSpec::greedy_prefix(n, m.clone())?,
    };
    let b = divergence_decomposed(&spec, src);
    writeln!(out, "n={n}")?;
    writeln!(out, "p={}", src.p())?;
    if src.mirrored() {
        writeln!(out, "mirrored=true")?;
    }
    writeln!(out, "codebook={}", describe(&spec))?;
    if let Some(k) = k_hat {
        writeln!(out, "k_hat={k}")?;
    }
    writeln!(out, "size={}", spec.size())?;
    writeln!(out, "log2_size={}", format_real(b.log2_size))?;
    writeln!(out, "p_letter={}", format_real(b.p_letter.value()))?;
    writeln!(out, "total={}", format_real(b.total))?;
    writeln!(out, "codebook_term={}", format_real(b.codebook_term))?;
    writeln!(out, "letter_term={}", format_real(b.letter_term))?;
    writeln!(
        out,
        "gap={}",
        format_real(b.total - 0.5 * (n as f64).log2())
    )?;
    if let CodebookSpec::UnionOfTypeSets { k, .. } = spec {
        if 2 * k < n {
            let gap = pletter_gap_bounds(n, k)?;
            writeln!(
                out,
                "pletter_gap={}",
                format_real(k as f64 / n as f64 - b.p_letter.value())
            )?;
            writeln!(out, "pletter_gap_upper={}", format_real(gap.upper))?;
            let lb = optimal_lower_bound(n, k, src)?;
            writeln!(out, "eq17_lower={}", format_real(lb.bound_bits))?;
        }
        writeln!(
            out,
            "asymptotic_constant={}",
            format_real(asymptotic_gap_constant(src))
        )?;
    }
    if let CodebookSpec::ConstantComposition { weight, .. } = spec {
        if let Ok(design) = ccdm_design(n, src, a.radix) {
            if design.weight == weight && design.spec == spec {
                let bounds = ccdm_bounds(n, src, a.radix)?;
                writeln!(
                    out,
                    "ccdm_lower={}",
                    format_real(bounds.lower + b.letter_term)
                )?;
                writeln!(
                    out,
                    "ccdm_upper={}",
                    format_real(bounds.upper + b.letter_term)
                )?;
            }
        }
    }
    if a.csv {
        writeln!(
            out,
            "n,codebook,log2_size,p_letter,total,codebook_term,letter_term"
        )?;
        writeln!(
            out,
            "{n},{},{},{},{},{},{}",
            describe(&spec),
            format_real(b.log2_size),
            format_real(b.p_letter.value()),
            format_real(b.total),
            format_real(b.codebook_term),
            format_real(b.letter_term)
        )?;
    }
    Ok(EXIT_OK)
}

fn describe(spec: &CodebookSpec) -> String {
    match spec {
        CodebookSpec::UnionOfTypeSets { k, .. } => format!("union:{k}"),
        CodebookSpec::ConstantComposition { weight, size, .. } => format!("cc:{weight}:{size}"),
        CodebookSpec::GreedyPrefix { size, .. } => format!("greedy:{size}"),
    }
}

fn build_matcher(a: &MatchArgs) -> Result<Matcher, Error> {
    match a.scheme {
        Scheme::Ccdm => Matcher::ccdm(a.n, &a.p, a.radix),
        Scheme::Optimal => Matcher::optimal(a.n, &a.p, a.radix),
    }
}

fn parse_digits(line: &str, radix: u32) -> Result<Vec<u32>, Error> {
    line.chars()
        .map(|c| {
            c.to_digit(radix)
                .ok_or(Error::InvalidSymbol { symbol: c, radix })
        })
        .collect()
}

fn format_digits(digits: &[u32]) -> String {
    digits
        .iter()
        .map(|&d| char::from_digit(d, 36).unwrap())
        .collect()
}

fn match_lines(
    a: &MatchArgs,
    input: &mut dyn BufRead,
    out: &mut dyn Write,
    forward: bool,
) -> CmdResult {
    let matcher = build_matcher(a)?;
    for line in input.lines() {
        let line = line?;
        let line = line.trim_end_matches('\r');
        if forward {
            let digits = parse_digits(line, matcher.radix())?;
            let word = matcher.match_digits(&digits)?;
            writeln!(out, "{word}")?;
        } else {
            let word: BitBlock = line.parse()?;
            let digits = matcher.dematch_digits(&word)?;
            writeln!(out, "{}", format_digits(&digits))?;
        }
    }
    out.flush()?;
    Ok(EXIT_OK)
}

fn sweep_cmd(a: &SweepArgs, stdout: &mut dyn Write) -> CmdResult {
    let records = sweep(&a.p, &a.n.0, a.radix);
    match &a.out {
        Some(path) => {
            let mut file = BufWriter::new(File::create(path)?);
            write_sweep_csv(&mut file, &records)?;
        }
        None => write_sweep_csv(stdout, &records)?,
    }
    Ok(EXIT_OK)
}

fn require<T>(v: Option<T>, flag: &str, kind: BoundKind) -> Result<T, Error> {
    v.ok_or_else(|| Error::Parse(format!("--{flag} is required for --kind {kind:?}")))
}

fn exact_probability(
    p: Option<&String>,
    kind: BoundKind,
) -> Result<num_rational::Ratio<u64>, Error> {
    let p: Probability = require(p, "p", kind)?.parse()?;
    p.as_ratio()
        .ok_or_else(|| Error::Parse(format!("--p {p} must be an exact fraction or decimal")))
}

fn verdict(out: &mut dyn Write, pass: bool) -> CmdResult {
    writeln!(out, "result={}", if pass { "PASS" } else { "FAIL" })?;
    Ok(if pass { EXIT_OK } else { EXIT_INTERNAL })
}

/// `lower <= exact <= upper` with `f64` bounds compared exactly against the
/// integer when both bounds are finite.
fn brackets_integer(lower: f64, upper: f64, exact: &BigUint) -> bool {
    let lo_ok = match BigUint::from_f64(lower.max(0.0).ceil()) {
        Some(lo) => &lo <= exact,
        None => false,
    };
    let hi_ok = match BigUint::from_f64(upper.floor()) {
        Some(hi) => exact <= &hi,
        None => false,
    };
    lo_ok && hi_ok
}

fn bounds(a: &BoundsArgs, out: &mut dyn Write) -> CmdResult {
    let kind = a.kind;
    writeln!(out, "kind={}", kind.to_possible_value().unwrap().get_name())?;
    match kind {
        BoundKind::Stirling | BoundKind::PartialSum => {
            let n = require(a.n, "n", kind)?;
            let p = exact_probability(a.p.as_ref(), kind)?;
            let k = (n as u128 * *p.numer() as u128 / *p.denom() as u128) as u64;
            let (b, exact) = if kind == BoundKind::Stirling {
                (stirling_bounds(n, p)?, binom(n, k))
            } else {
                (partial_sum_bounds(n, p)?, partial_binom_sum(n, k)?)
            };
            let pass = if b.lower.is_finite() && b.upper.is_finite() {
                brackets_integer(b.lower, b.upper, exact.as_biguint())
            } else if kind == BoundKind::Stirling {
                let lb = stirling_bounds_log2(n, p)?;
                lb.contains(log2_big(&exact)?)
            } else {
                false
            };
            writeln!(out, "lower={}", format_real(b.lower))?;
            writeln!(out, "exact={exact}")?;
            writeln!(out, "upper={}", format_real(b.upper))?;
            verdict(out, pass)
        }
        BoundKind::CenterWeight => {
            let n = require(a.n, "n", kind)?;
            let k = require(a.k, "k", kind)?;
            let sum = center_weighted_sum(n, k)?;
            let closed = BigCount::from(binom(n, k + 1).into_biguint() * (k + 1));
            writeln!(out, "doubled_sum={sum}")?;
            writeln!(out, "closed_form={closed}")?;
            verdict(out, sum == closed)
        }
        BoundKind::PletterGap => {
            let n = require(a.n, "n", kind)?;
            let k = require(a.k, "k", kind)?;
            let b = pletter_gap_bounds(n, k)?;
            let spec = CodebookSpec::union_of_type_sets(n, k)?;
            let gap = k as f64 / n as f64 - letter_distribution(&spec).value();
            writeln!(out, "lower={}", format_real(b.lower))?;
            writeln!(out, "exact={}", format_real(gap))?;
            writeln!(out, "upper={}", format_real(b.upper))?;
            verdict(out, b.contains(gap))
        }
        BoundKind::Eq17 => {
            let n = require(a.n, "n", kind)?;
            let src: TargetSource = require(a.p.as_ref(), "p", kind)?.parse()?;
            let k = match a.k {
                Some(k) => k,
                None => optimal_k(n, &src)?.k_hat,
            };
            let report = optimal_lower_bound(n, k, &src)?;
            let spec = CodebookSpec::union_of_type_sets(n, k)?;
            let d = divergence_decomposed(&spec, &src).total;
            writeln!(out, "k={k}")?;
            writeln!(out, "epsilon_n={}", format_real(report.epsilon_n))?;
            writeln!(out, "lower={}", format_real(report.bound_bits))?;
            writeln!(out, "exact={}", format_real(d))?;
            verdict(out, report.bound_bits <= d)
        }
        BoundKind::Eq18 => {
            let src: TargetSource = require(a.p.as_ref(), "p", kind)?.parse()?;
            let c = asymptotic_gap_constant(&src);
            writeln!(out, "value={}", format_real(c))?;
            if let Some(n) = a.n {
                let r = sweep_record(n, &src, a.radix)?;
                writeln!(out, "gap={}", format_real(r.gap))?;
            }
            Ok(EXIT_OK)
        }
        BoundKind::Ccdm => {
            let n = require(a.n, "n", kind)?;
            let src: TargetSource = require(a.p.as_ref(), "p", kind)?.parse()?;
            let b = ccdm_bounds(n, &src, a.radix)?;
            let design = ccdm_design(n, &src, a.radix)?;
            let term = divergence_decomposed(&design.spec, &src).codebook_term;
            writeln!(out, "weight={}", design.weight)?;
            writeln!(out, "input_len={}", design.input_len)?;
            writeln!(out, "lower={}", format_real(b.lower))?;
            writeln!(out, "exact={}", format_real(term))?;
            writeln!(out, "upper={}", format_real(b.upper))?;
            verdict(out, b.contains(term))
        }
    }
}
