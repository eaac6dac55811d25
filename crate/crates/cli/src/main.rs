use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mixtrace_core::{Error, DEFAULT_PRIME};

mod commands;
mod output;

/// Mixed-trace exponent sets, Jacobian certificates and discriminant
/// exponent bounds.
#[derive(Debug, Parser)]
#[command(name = "mixtrace", version)]
struct Cli {
    /// Worker threads for scans and corpus reports (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a degree-d exponent set for r >= 3 and certify it.
    ConstructA(ConstructArgs),
    /// Certify the pair set A_n (r = 2).
    Certify(CertifyArgs),
    /// Re-check a certificate file.
    Verify(VerifyArgs),
    /// Print the exponent table row for one n.
    Exponents(ExponentsArgs),
    /// Maximize overall exponent / (ln n)^2 over a range of n.
    Scan(ScanArgs),
    /// Mixed-trace fingerprint of one field.
    Fingerprint(FingerprintArgs),
    /// Fingerprint injectivity over a corpus of fields.
    CorpusReport(CorpusArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Strict,
    Equality,
    Both,
}

#[derive(Debug, Args)]
struct SeedArgs {
    /// Modulus for certificates.
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    prime: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Resamples after the first attempt.
    #[arg(long, default_value_t = 3)]
    max_retries: u32,
}

#[derive(Debug, Args)]
struct ConstructArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    r: usize,
    #[arg(long)]
    d: u32,
    #[command(flatten)]
    seed: SeedArgs,
    /// Accept C(d+r-1, r-1) = rn.
    #[arg(long)]
    equality: bool,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Debug, Args)]
struct CertifyArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    r: usize,
    #[command(flatten)]
    seed: SeedArgs,
    /// Evaluate the determinant exactly over the integers (n <= 8).
    #[arg(long)]
    exact: bool,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Certificate JSON file.
    certificate: std::path::PathBuf,
}

#[derive(Debug, Args)]
struct ExponentsArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    equality: bool,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[arg(long, default_value_t = 6)]
    n_min: u64,
    #[arg(long, default_value_t = mixtrace_core::bounds::SCAN_UPPER_DEFAULT)]
    n_max: u64,
    #[arg(long, value_enum, default_value_t = ModeArg::Strict)]
    mode: ModeArg,
    /// Write the per-n CSV table here (strict mode table when --mode both).
    #[arg(long)]
    table: Option<std::path::PathBuf>,
    /// Write the JSON summary here instead of stdout.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Debug, Args)]
struct FingerprintArgs {
    /// Coefficients, leading first, e.g. "1 -1 -2 1".
    #[arg(long, allow_hyphen_values = true)]
    poly: String,
    #[arg(long, default_value_t = 2)]
    r: usize,
    /// Degree of the exponent set for r >= 3.
    #[arg(long)]
    d: Option<u32>,
    /// Coefficient bound for the generator search.
    #[arg(long, default_value_t = mixtrace_core::field_lab::DEFAULT_COEFF_BOUND)]
    coeff_bound: i64,
    #[command(flatten)]
    seed: SeedArgs,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Debug, Args)]
struct CorpusArgs {
    /// Polynomial list, one per line, leading coefficient first.
    #[arg(long, conflicts_with = "cubic_height")]
    corpus: Option<std::path::PathBuf>,
    /// Use the built-in totally real cubic corpus of this height.
    #[arg(long)]
    cubic_height: Option<i64>,
    #[arg(long, default_value_t = 2)]
    r: usize,
    #[arg(long)]
    d: Option<u32>,
    /// Largest prime tried for splitting-type certificates.
    #[arg(long, default_value_t = 200)]
    prime_bound: u64,
    #[arg(long, default_value_t = mixtrace_core::field_lab::DEFAULT_COEFF_BOUND)]
    coeff_bound: i64,
    #[command(flatten)]
    seed: SeedArgs,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

/// Failures and their exit codes.
#[derive(Debug)]
pub enum Failure {
    /// Bad arguments or input files.
    Usage(String),
    /// Certification or verification did not succeed.
    Certification(String),
    /// The requested parameters admit no construction.
    Infeasible(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Certification(_) => 2,
            Failure::Infeasible(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Certification(m) | Failure::Infeasible(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Infeasible(_) => Failure::Infeasible(msg),
            Error::CertificationFailed { .. }
            | Error::RankDeficient { .. }
            | Error::CertificateMismatch(_)
            | Error::SearchExhausted(_) => Failure::Certification(msg),
            _ => Failure::Usage(msg),
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
    if let Some(w) = cli.workers {
        if w == 0 {
            eprintln!("error: --workers must be at least 1");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let result = match cli.command {
        Command::ConstructA(a) => commands::construct_a(a),
        Command::Certify(a) => commands::certify(a),
        Command::Verify(a) => commands::verify(a),
        Command::Exponents(a) => commands::exponents(a),
        Command::Scan(a) => commands::scan(a),
        Command::Fingerprint(a) => commands::fingerprint(a),
        Command::CorpusReport(a) => commands::corpus_report(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.message());
            ExitCode::from(f.code())
        }
    }
}
