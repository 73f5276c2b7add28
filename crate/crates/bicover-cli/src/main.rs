use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;

use bicover::certificate::{self, VerifyRequest};
use bicover::{PrimeSet, TorusMap};

/// Exit codes: 0 when every check passes, 1 when a check fails, 2 on
/// malformed input.
const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "bicover", version)]
#[command(
    about = "Exact certificates for surfaces covered in two non-equivalent ways by the same map"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full verification pipeline for one instance and one torus map
    Verify(VerifyArgs),
    /// List all admissible splittings of a pair (n, m)
    Enumerate(EnumerateArgs),
    /// Certify a k-splitting family over one pair together with a family of maps
    Family(FamilyArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// First order of the deck group Z/n x Z/m (n >= 2)
    #[arg(long)]
    n: u64,
    /// Second order of the deck group (m >= 2)
    #[arg(long)]
    m: u64,
    /// Comma-separated primes of the set A (may be empty)
    #[arg(long = "A", default_value = "")]
    a: String,
    /// Comma-separated primes of the set B (may be empty)
    #[arg(long = "B", default_value = "")]
    b: String,
    /// Row-major 2x2 integer matrix, e.g. 2,1,1,1
    #[arg(long)]
    matrix: String,
    /// Trace-table bound for power-independence data
    #[arg(long = "K", default_value_t = 10)]
    k: u64,
    /// Emit the certificate as JSON instead of text
    #[arg(long)]
    json: bool,
    /// Write the output to FILE instead of stdout
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    m: u64,
    #[arg(long)]
    json: bool,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FamilyArgs {
    /// Comma-separated distinct primes defining the family
    #[arg(long)]
    primes: String,
    /// Semicolon-separated list of row-major 2x2 matrices, e.g. 2,1,1,1;3,1,2,1
    #[arg(long)]
    matrices: String,
    /// Trace-table bound for the pairwise independence certificates
    #[arg(long = "K", default_value_t = 10)]
    k: u64,
    #[arg(long)]
    json: bool,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Also write the trace tables as CSV to FILE
    #[arg(long, value_name = "FILE")]
    trace_csv: Option<PathBuf>,
}

struct UsageError(String);

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

fn emit_usage_error(msg: &str) -> ExitCode {
    let obj = serde_json::json!({
        "error": { "kind": "malformed-input", "message": msg }
    });
    eprintln!("{obj}");
    ExitCode::from(EXIT_USAGE)
}

fn emit_internal_error(msg: &str) -> ExitCode {
    let obj = serde_json::json!({
        "error": { "kind": "internal", "message": msg }
    });
    eprintln!("{obj}");
    ExitCode::from(EXIT_FAIL)
}

fn parse_u64_list(s: &str, what: &str) -> Result<Vec<u64>, UsageError> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<u64>()
                .map_err(|_| usage(format!("{what}: `{tok}` is not a nonnegative integer")))
        })
        .collect()
}

fn parse_prime_set(s: &str, what: &str) -> Result<PrimeSet, UsageError> {
    let values = parse_u64_list(s, what)?;
    PrimeSet::new(values).map_err(|e| usage(format!("{what}: {e}")))
}

fn parse_matrix(s: &str) -> Result<[BigInt; 4], UsageError> {
    let entries: Vec<BigInt> = s
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse::<BigInt>()
                .map_err(|_| usage(format!("matrix entry `{tok}` is not an integer")))
        })
        .collect::<Result<_, _>>()?;
    entries
        .try_into()
        .map_err(|_| usage("matrix must have exactly 4 row-major entries"))
}

fn require_at_least_two(n: u64, m: u64) -> Result<(), UsageError> {
    if n < 2 || m < 2 {
        Err(usage(format!(
            "n and m must both be at least 2 (got {n}, {m})"
        )))
    } else {
        Ok(())
    }
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<(), String> {
    match out {
        Some(path) => fs::write(path, content).map_err(|e| format!("cannot write {path:?}: {e}")),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn run_verify(args: &VerifyArgs) -> Result<ExitCode, UsageError> {
    require_at_least_two(args.n, args.m)?;
    let req = VerifyRequest {
        n: args.n,
        m: args.m,
        a: parse_prime_set(&args.a, "A")?,
        b: parse_prime_set(&args.b, "B")?,
        matrix: parse_matrix(&args.matrix)?,
        trace_bound: args.k,
    };
    let cert = certificate::verify(&req);
    let content = if args.json {
        cert.to_json()
    } else {
        cert.render_text()
    };
    if let Err(e) = write_output(&args.out, &content) {
        return Ok(emit_internal_error(&e));
    }
    Ok(ExitCode::from(cert.exit_code() as u8))
}

fn run_enumerate(args: &EnumerateArgs) -> Result<ExitCode, UsageError> {
    require_at_least_two(args.n, args.m)?;
    let listing = match certificate::enumerate_listing(args.n, args.m) {
        Ok(listing) => listing,
        Err(e) => return Ok(emit_internal_error(&e.to_string())),
    };
    let content = if args.json {
        listing.to_json()
    } else {
        listing.render_text()
    };
    if let Err(e) = write_output(&args.out, &content) {
        return Ok(emit_internal_error(&e));
    }
    Ok(ExitCode::SUCCESS)
}

fn run_family(args: &FamilyArgs) -> Result<ExitCode, UsageError> {
    let primes = parse_prime_set(&args.primes, "primes")?;
    if primes.is_empty() {
        return Err(usage("primes must be a nonempty list of distinct primes"));
    }
    let mut maps = Vec::new();
    for (i, part) in args.matrices.split(';').enumerate() {
        let entries = parse_matrix(part)?;
        let matrix = bicover::IntMatrix::from_fn(2, 2, |r, c| entries[2 * r + c].clone());
        let map = TorusMap::new(matrix).map_err(|e| usage(format!("matrix {}: {e}", i + 1)))?;
        if !map.is_anosov() {
            return Err(usage(format!(
                "matrix {} is not Anosov (|trace| <= 2)",
                i + 1
            )));
        }
        maps.push(map);
    }

    let cert = match certificate::family(&primes, &maps, args.k) {
        Ok(cert) => cert,
        Err(e) => return Ok(emit_internal_error(&e.to_string())),
    };
    if let Some(path) = &args.trace_csv {
        if let Err(e) = fs::write(path, cert.trace_csv()) {
            return Ok(emit_internal_error(&format!("cannot write {path:?}: {e}")));
        }
    }
    let content = if args.json {
        cert.to_json()
    } else {
        cert.render_text()
    };
    if let Err(e) = write_output(&args.out, &content) {
        return Ok(emit_internal_error(&e));
    }
    Ok(ExitCode::from(cert.exit_code() as u8))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            // help and version go to stdout with success, as usual
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            return emit_usage_error(&e.to_string());
        }
    };
    let result = match &cli.command {
        Command::Verify(args) => run_verify(args),
        Command::Enumerate(args) => run_enumerate(args),
        Command::Family(args) => run_family(args),
    };
    match result {
        Ok(code) => code,
        Err(UsageError(msg)) => emit_usage_error(&msg),
    }
}
