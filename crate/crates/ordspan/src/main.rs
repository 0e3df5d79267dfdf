use std::collections::HashMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;

use ordspan::numeric::{EvalCaps, RadicalFreeVariant};
use ordspan::report::{self, OutputFormat, Render};
use ordspan::span::{ordered_span, DigitString, Enumerator, SpanConfig, SpanError};
use ordspan::tuple::tuple_span_with;
use ordspan::{is_friedman_any_order, is_nice_friedman, scan_density};

#[derive(Parser)]
#[command(
    name = "ordspan",
    about = "Exact ordered-span arithmetic, radical-free tables, and nice-Friedman search",
    version
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct GlobalArgs {
    /// Numeral base, 2..=36
    #[arg(long, global = true)]
    base: Option<u8>,
    /// Widest value numerator/denominator allowed, in bits
    #[arg(long, global = true)]
    max_bits: Option<u32>,
    /// Largest exponent magnitude allowed
    #[arg(long, global = true)]
    max_exp: Option<u32>,
    /// Radical-free predicate: not-perfect-power, not-perfect-square, none
    #[arg(long, global = true)]
    radical_free_variant: Option<String>,
    /// Treat atoms with a leading zero digit as valid
    #[arg(long, global = true)]
    allow_leading_zero: bool,
    /// Output format: json, csv, table
    #[arg(long, global = true)]
    format: Option<String>,
    /// Write output to a file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for scans (default: all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the ordered span of a digit string
    Span {
        /// Digit string, e.g. "127" or "11"
        digits: String,
    },
    /// Radical-free table for a repeated digit, with expected-value columns
    Table {
        /// Digit to repeat (default: base - 1, but 1 in base 2)
        #[arg(long)]
        digit: Option<u8>,
        /// Number of rows (repetition counts 1..=N)
        #[arg(long, default_value_t = 5)]
        max_n: usize,
    },
    /// Enumerate the tuple span (block partitions into radical-free values)
    Tuples { digits: String },
    /// Maximum prefix code among tuples of a digit string
    PrefixCode { digits: String },
    /// Growth polynomial, sign at the base, and root enclosure
    Growth {
        /// Comma-separated counts c_1,..,c_m overriding the built-in ones
        #[arg(long, value_delimiter = ',')]
        counts: Option<Vec<u64>>,
        /// Also recompute counts from the engines up to this repetition count
        #[arg(long)]
        recompute: Option<usize>,
        /// Digit to repeat when recomputing (default: base - 1, 1 in base 2)
        #[arg(long)]
        digit: Option<u8>,
    },
    /// Catalan numbers and expression-string count bounds per digit count
    Bound {
        #[arg(long, default_value_t = 10)]
        max_l: u64,
    },
    /// Decide nice-Friedman membership of one target and print a witness
    Verify {
        target: String,
        /// Allow digit reordering (general Friedman test)
        #[arg(long)]
        any_order: bool,
    },
    /// Scan [1, limit] for nice Friedman numbers
    Scan { limit: u64 },
}

struct Settings {
    base: u8,
    caps: EvalCaps,
    config: SpanConfig,
    format: OutputFormat,
    out: Option<PathBuf>,
    jobs: Option<usize>,
}

#[derive(Debug)]
struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> CliError {
        CliError {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<SpanError> for CliError {
    fn from(e: SpanError) -> CliError {
        let code = match e {
            SpanError::TooLong { .. } | SpanError::ScanTooLarge { .. } => 3,
            _ => 2,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> CliError {
        CliError {
            code: 2,
            message: e.to_string(),
        }
    }
}

fn read_config_file() -> Result<HashMap<String, String>, CliError> {
    let mut map = HashMap::new();
    let Some(path) = std::env::var_os("ORDSPAN_CONFIG") else {
        return Ok(map);
    };
    let text = std::fs::read_to_string(&path).map_err(|e| {
        CliError::usage(format!("config file {}: {e}", PathBuf::from(&path).display()))
    })?;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::usage(format!(
                "config line {}: expected key=value, got {line:?}",
                lineno + 1
            )));
        };
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn pick<T: FromStr>(
    flag: Option<T>,
    file: &HashMap<String, String>,
    key: &str,
    default: T,
) -> Result<T, CliError> {
    if let Some(v) = flag {
        return Ok(v);
    }
    match file.get(key) {
        Some(raw) => raw
            .parse()
            .map_err(|_| CliError::usage(format!("config {key}: cannot parse {raw:?}"))),
        None => Ok(default),
    }
}

fn resolve(global: &GlobalArgs) -> Result<Settings, CliError> {
    let file = read_config_file()?;
    let base = pick(global.base, &file, "base", 10)?;
    if !(2..=36).contains(&base) {
        return Err(CliError::usage(format!("base {base} out of range 2..=36")));
    }
    let caps = EvalCaps {
        max_value_bits: pick(global.max_bits, &file, "max_bits", 256)?,
        max_exponent_magnitude: pick(global.max_exp, &file, "max_exp", 64)?,
    };
    let variant_text = pick(
        global.radical_free_variant.clone(),
        &file,
        "radical_free_variant",
        RadicalFreeVariant::default().as_str().to_string(),
    )?;
    let variant = RadicalFreeVariant::parse(&variant_text)
        .ok_or_else(|| CliError::usage(format!("unknown radical-free variant {variant_text:?}")))?;
    let allow_leading_zero = if global.allow_leading_zero {
        true
    } else {
        pick(None, &file, "allow_leading_zero", false)?
    };
    let config = SpanConfig {
        allow_leading_zero,
        radical_free_variant: variant,
        ..SpanConfig::default()
    };
    let format_text = pick(
        global.format.clone(),
        &file,
        "format",
        "table".to_string(),
    )?;
    let format = OutputFormat::parse(&format_text)
        .ok_or_else(|| CliError::usage(format!("unknown format {format_text:?}")))?;
    let jobs = match (global.jobs, file.get("jobs")) {
        (Some(j), _) => Some(j),
        (None, Some(raw)) => Some(
            raw.parse()
                .map_err(|_| CliError::usage(format!("config jobs: cannot parse {raw:?}")))?,
        ),
        (None, None) => None,
    };
    Ok(Settings {
        base,
        caps,
        config,
        format,
        out: global.out.clone(),
        jobs,
    })
}

fn default_digit(base: u8) -> u8 {
    if base == 2 {
        1
    } else {
        base - 1
    }
}

fn emit<R: Render>(report: &R, s: &Settings) -> Result<(), CliError> {
    report::emit(report, s.format, s.out.as_deref())?;
    Ok(())
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let s = resolve(&cli.global)?;
    if let Some(jobs) = s.jobs {
        if jobs == 0 {
            return Err(CliError::usage("--jobs must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .ok();
    }
    match cli.command {
        Command::Span { digits } => {
            let ds = DigitString::from_text(&digits, s.base)?;
            let span = ordered_span(&ds, &s.caps, &s.config)?;
            emit(&report::span_report(&span), &s)?;
            Ok(0)
        }
        Command::Table { digit, max_n } => {
            let digit = digit.unwrap_or_else(|| default_digit(s.base));
            let table = report::run_table(digit, s.base, max_n, &s.caps, &s.config)?;
            let golden_mismatch = !table.golden_match;
            emit(&table, &s)?;
            Ok(if golden_mismatch { 4 } else { 0 })
        }
        Command::Tuples { digits } => {
            let ds = DigitString::from_text(&digits, s.base)?;
            if ds.len() > s.config.max_len {
                return Err(SpanError::TooLong {
                    len: ds.len(),
                    max: s.config.max_len,
                }
                .into());
            }
            let mut en = Enumerator::new(s.base, s.caps, s.config);
            let set = tuple_span_with(&mut en, &ds);
            emit(&report::tuple_report(&set), &s)?;
            Ok(0)
        }
        Command::PrefixCode { digits } => {
            let ds = DigitString::from_text(&digits, s.base)?;
            if ds.len() > s.config.max_len {
                return Err(SpanError::TooLong {
                    len: ds.len(),
                    max: s.config.max_len,
                }
                .into());
            }
            let mut en = Enumerator::new(s.base, s.caps, s.config);
            let set = tuple_span_with(&mut en, &ds);
            let pc = ordspan::tuple::max_prefix_code_size(set.tuples.keys());
            emit(&report::prefix_code_summary(&ds, &pc), &s)?;
            Ok(0)
        }
        Command::Growth {
            counts,
            recompute,
            digit,
        } => {
            let recomputed = match recompute {
                Some(max_n) => {
                    let digit = digit.unwrap_or_else(|| default_digit(s.base));
                    let mut analyzer = ordspan::tuple::RepeatedDigitAnalyzer::new(
                        digit, s.base, s.caps, s.config,
                    )?;
                    let mut cs = Vec::with_capacity(max_n);
                    for n in 1..=max_n {
                        cs.push(analyzer.new_radical_free(n)?.len() as u64);
                    }
                    Some(cs)
                }
                None => None,
            };
            let g = report::run_growth(s.base, recomputed, counts)
                .map_err(|e| CliError::usage(e.to_string()))?;
            if g.blocks.is_empty() {
                return Err(CliError::usage(format!(
                    "no built-in counts for base {}; pass --counts or --recompute",
                    s.base
                )));
            }
            emit(&g, &s)?;
            Ok(0)
        }
        Command::Bound { max_l } => {
            if max_l < 1 {
                return Err(CliError::usage("--max-l must be at least 1"));
            }
            emit(&report::bound_report(max_l), &s)?;
            Ok(0)
        }
        Command::Verify { target, any_order } => {
            let n = BigInt::from_str(&target)
                .map_err(|_| CliError::usage(format!("target {target:?} is not an integer")))?;
            let result = if any_order {
                is_friedman_any_order(&n, s.base, &s.caps, &s.config)?
            } else {
                is_nice_friedman(&n, s.base, &s.caps, &s.config)?
            };
            let mode = if any_order { "any-order" } else { "nice" };
            emit(&report::verify_report(&result, mode), &s)?;
            Ok(0)
        }
        Command::Scan { limit } => {
            let d = scan_density(s.base, limit, &s.caps, &s.config)?;
            emit(&report::scan_report(&d), &s)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
