//! Command-line surface for the covseq library. Sequences travel as one
//! digit-per-symbol line on stdin/stdout or through `--input`/`--output`
//! paths; counts and bounds come out as a single JSON object.

use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use covseq::counting::{
    avoid_count, covering_count, covering_lower_bound, covering_upper_bound, rate_bounds,
    CountResult,
};
use covseq::debruijn::{coverage, gen_debruijn, tuple_from_index};
use covseq::error::Error;
use covseq::{avoid, covering, SymbolSeq};

#[derive(Parser)]
#[command(name = "covseq", version, about = "Window-coverage constrained coding toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct IoArgs {
    /// Input file (defaults to stdin).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Output file (defaults to stdout).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Encode an (n-1)-bit word into an n-bit sequence containing every
    /// ell-tuple as a window.
    Encode {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        ell: usize,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Invert `encode`.
    Decode {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        ell: usize,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Compress a sequence that avoids the given tuple (one symbol saved
    /// per full block).
    Compress {
        /// The avoided tuple, as digits.
        #[arg(long)]
        v: String,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Invert `compress`.
    Decompress {
        #[arg(long)]
        v: String,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Print the canonical de Bruijn sequence of the given order.
    GenDebruijn {
        #[arg(long)]
        ell: usize,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Check whether the input contains every ell-tuple as a window.
    /// Exits 1 and lists missing tuples if not.
    CheckCover {
        #[arg(long)]
        ell: usize,
        #[arg(long, default_value_t = 2)]
        q: u8,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Exact cardinalities.
    Count {
        #[command(subcommand)]
        family: CountFamily,
    },
    /// Exact lower/upper bounds on the covering-sequence count, with the
    /// exact value when the instance is small enough.
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        ell: usize,
        #[arg(long, default_value_t = 2)]
        q: u8,
    },
    /// Asymptotic-rate bounds for surplus ratio alpha.
    Rate {
        #[arg(long)]
        alpha: f64,
    },
    /// Draw one uniform sample among the tuple-avoiding sequences.
    SampleAvoiding {
        #[arg(long)]
        v: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        q: u8,
        #[command(flatten)]
        io: IoArgs,
    },
}

#[derive(Subcommand)]
enum CountFamily {
    /// Number of length-n sequences containing every ell-tuple.
    Covering {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        ell: usize,
        #[arg(long, default_value_t = 2)]
        q: u8,
    },
    /// Number of length-n sequences avoiding the tuple v.
    Avoiding {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        v: String,
        #[arg(long, default_value_t = 2)]
        q: u8,
    },
}

fn main() -> ExitCode {
    // Exit codes: 0 success, 1 validation/malformed input, 2 internal
    // invariant violation. Usage errors from the parser count as validation.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let failed = err.use_stderr();
            let _ = err.print();
            return if failed {
                ExitCode::FAILURE
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("covseq: {err}");
            match err {
                Error::InvariantViolation(_) => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}

fn run(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Encode { n, ell, io } => {
            let w = read_sequence(&io, 2)?;
            if n == 0 || w.len() != n - 1 {
                return Err(Error::Validation(format!(
                    "encode expects an input of length n - 1 = {}, got {}",
                    n.saturating_sub(1),
                    w.len()
                )));
            }
            let x = covering::encode(&w, ell)?;
            write_sequence(&io, &x)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Decode { n, ell, io } => {
            let x = read_sequence(&io, 2)?;
            if x.len() != n {
                return Err(Error::Validation(format!(
                    "decode expects an input of length n = {n}, got {}",
                    x.len()
                )));
            }
            let w = covering::decode(&x, ell)?;
            write_sequence(&io, &w)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Compress { v, io } => {
            let tuple = SymbolSeq::parse(&v, 2)?;
            let ctx = avoid::build_context(&tuple)?;
            let x = read_sequence(&io, 2)?;
            let y = avoid::compress_stream(&ctx, &x)?;
            write_sequence(&io, &y)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Decompress { v, io } => {
            let tuple = SymbolSeq::parse(&v, 2)?;
            let ctx = avoid::build_context(&tuple)?;
            let y = read_sequence(&io, 2)?;
            let x = avoid::decompress_stream(&ctx, &y)?;
            write_sequence(&io, &x)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::GenDebruijn { ell, io } => {
            let s = gen_debruijn(ell)?;
            write_sequence(&io, &s)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::CheckCover { ell, q, io } => {
            let x = read_sequence(&io, q)?;
            let map = coverage(&x, ell, q)?;
            if map.is_covering() {
                println!("covering: all {} {ell}-tuples present", map.total_tuples());
                Ok(ExitCode::SUCCESS)
            } else {
                const SHOW: usize = 16;
                let missing: Vec<String> = map
                    .missing_indices(SHOW)
                    .into_iter()
                    .map(|idx| tuple_from_index(idx, ell, q).map(|t| t.to_string()))
                    .collect::<Result<_, _>>()?;
                let extra = map.missing_count().saturating_sub(SHOW);
                print!(
                    "not covering: {} of {} {ell}-tuples missing: {}",
                    map.missing_count(),
                    map.total_tuples(),
                    missing.join(" ")
                );
                if extra > 0 {
                    print!(" (+{extra} more)");
                }
                println!();
                Ok(ExitCode::FAILURE)
            }
        }
        Command::Count { family } => {
            let report = match family {
                CountFamily::Covering { n, ell, q } => {
                    let exact = covering_count(n, ell, q)?;
                    count_report(n, ell, q, &exact)
                }
                CountFamily::Avoiding { n, v, q } => {
                    let tuple = SymbolSeq::parse(&v, q)?;
                    let exact = avoid_count(n, &tuple)?;
                    count_report(n, tuple.len(), q, &exact)
                }
            };
            println!("{report}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Bounds { n, ell, q } => {
            if q != 2 {
                return Err(Error::Validation(
                    "the covering-count upper bound is binary-only; use --q 2".into(),
                ));
            }
            let lower = covering_lower_bound(n, ell, q)?;
            let upper = covering_upper_bound(n, ell)?;
            let exact = covering_count(n, ell, q).ok();
            let mut report = json!({
                "n": n,
                "ell": ell,
                "q": q,
                "lower": lower.to_string(),
                "upper": upper.to_string(),
                "logDomain": false,
            });
            if let Some(exact) = exact {
                report["exact"] = json!(exact.to_string());
            }
            println!("{report}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Rate { alpha } => {
            let bounds = rate_bounds(alpha)?;
            println!(
                "{}",
                json!({
                    "alpha": bounds.alpha,
                    "lower": bounds.lower,
                    "upper": bounds.upper,
                    "logDomain": false,
                })
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::SampleAvoiding { v, n, seed, q, io } => {
            let tuple = SymbolSeq::parse(&v, q)?;
            let sample = avoid::sample_avoiding(&tuple, n, seed)?;
            write_sequence(&io, &sample)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn count_report(n: usize, ell: usize, q: u8, exact: &CountResult) -> serde_json::Value {
    json!({
        "n": n,
        "ell": ell,
        "q": q,
        "exact": exact.to_string(),
        "lower": exact.to_string(),
        "upper": exact.to_string(),
        "logDomain": false,
    })
}

fn read_sequence(io: &IoArgs, q: u8) -> Result<SymbolSeq, Error> {
    let text = match &io.input {
        Some(path) => fs::read_to_string(path)
            .map_err(|e| Error::Validation(format!("cannot read {}: {e}", path.display())))?,
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Error::Validation(format!("cannot read stdin: {e}")))?;
            buf
        }
    };
    let line = text.lines().next().unwrap_or("");
    SymbolSeq::parse(line, q)
}

/// Output files are only created after the result is fully computed, so a
/// failed run never leaves a partial file behind.
fn write_sequence(io: &IoArgs, s: &SymbolSeq) -> Result<(), Error> {
    match &io.output {
        Some(path) => fs::write(path, format!("{s}\n"))
            .map_err(|e| Error::Validation(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{s}");
            Ok(())
        }
    }
}
