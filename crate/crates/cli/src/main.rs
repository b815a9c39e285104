mod commands;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ssav::Error;

/// Simple supersingular abelian varieties over F_q, q = p^n with n odd.
#[derive(Debug, Parser)]
#[command(name = "ssav", version)]
struct Cli {
    /// Output format of the data stream.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads for parallel loops (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Md,
}

#[derive(Debug, Args)]
pub struct FieldArgs {
    #[arg(long)]
    p: u64,
    /// Odd exponent.
    #[arg(long)]
    n: u32,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List every simple supersingular isogeny class of dimension g.
    Enumerate {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        g: u32,
    },
    /// Resolve a Weil polynomial into h, e, g and local data.
    Dim {
        #[command(flatten)]
        field: FieldArgs,
        /// Ascending coefficients, e.g. 2,0,1 for X^2 + 2.
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
    },
    /// Minimal polynomial and class of sqrt(q) * zeta_L^k.
    Minpoly {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long = "order", value_parser = clap::value_parser!(u64).range(1..))]
        order: u64,
        #[arg(long = "exp", allow_hyphen_values = true)]
        exp: i64,
    },
    /// Compare the enumeration with the closed-form family tables.
    VerifyPaper {
        #[arg(long, value_delimiter = ',', required = true)]
        g: Vec<u32>,
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        n: Vec<u32>,
    },
    /// Residue test mod 3 and 5 for integer roots of f(z, q).
    Modtest {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
    },
    /// Count points on y^2 + y = f(x) over F_(2^n) and recover P.
    CountCurve {
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[arg(long)]
        n: u32,
        /// f in x and a (the generator alpha).
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        /// Field modulus as bits, highest degree first (100101 is t^5 + t^2 + 1).
        #[arg(long, value_parser = parse_bits)]
        modulus: Option<u64>,
        /// alpha as a bit vector in the polynomial basis (default t).
        #[arg(long, value_parser = parse_bits)]
        alpha: Option<u64>,
        /// Number of extensions to count (default: the genus).
        #[arg(long)]
        depth: Option<u32>,
    },
}

fn parse_bits(s: &str) -> Result<u64, String> {
    u64::from_str_radix(s, 2).map_err(|e| format!("expected a binary string: {e}"))
}

/// Exit codes: 0 success, 1 negative answer, 2 rejected input, 64 usage, 65 refusal.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Syntax { .. } => 64,
        Error::Refused(_) => 65,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 64 } else { 0 });
        }
    };
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("ssav: cannot configure {t} threads: {e}");
            return ExitCode::from(64);
        }
    }
    let mut stdout = std::io::stdout().lock();
    match commands::run(cli.command) {
        Ok(outcome) if outcome.exit == 0 => {
            let _ = stdout.write_all(output::render(&outcome.output, cli.format).as_bytes());
            ExitCode::SUCCESS
        }
        Ok(outcome) => {
            // A negative answer is not data: the report goes to the diagnostic
            // stream, and JSON callers get it wrapped in the error object.
            let rendered = output::render(&outcome.output, cli.format);
            eprint!("{rendered}");
            if cli.format == Format::Json {
                let _ = writeln!(stdout, "{}", output::negative_json(&outcome));
            }
            ExitCode::from(outcome.exit)
        }
        Err(e) => {
            let code = exit_code(&e);
            eprintln!("ssav: {e}");
            if cli.format == Format::Json {
                let _ = writeln!(stdout, "{}", output::error_json(&e, code));
            }
            ExitCode::from(code)
        }
    }
}
