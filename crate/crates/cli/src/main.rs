mod commands;
mod output;
mod settings;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Rank codecs, padding transfer, phase-transition curves and balance audits
/// over finite alphabets.
#[derive(Parser, Debug)]
#[command(name = "phaselab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Re-encode words between alphabets, keeping their rank.
    Transcode(TranscodeArgs),
    /// Tabulate a language next to its transcoded copy.
    Conjugate(ConjugateArgs),
    /// Accepting fraction per parameter slice, as CSV, plus transition verdicts.
    Curve(CurveArgs),
    /// Balance audits (NAEU, adequacy, χ bounds, sparsity) as JSON.
    Audit(AuditArgs),
    /// Simulate the cohort verification protocol against a noisy device.
    Verify(VerifyArgs),
    /// Run the built-in structural checks; exits 1 if any fails.
    LemmaSuite(SuiteArgs),
    /// Counts of the errorless heuristic's answers per length.
    Heuristic(HeuristicArgs),
}

#[derive(Args, Debug, Default)]
struct Common {
    /// `key=value` file supplying defaults for the flags below.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file (written atomically); stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Default)]
struct Corpus {
    /// Language token, e.g. `first-symbol@k=3` or `not-omega-parity`.
    #[arg(long)]
    lang: Option<String>,
    /// Alphabet size for tokens without `@k=`.
    #[arg(long)]
    k: Option<u32>,
    /// Largest rank enumerated.
    #[arg(long, allow_hyphen_values = true)]
    max_rank: Option<String>,
    /// Enumerate every word of length at most this.
    #[arg(long, conflicts_with = "max_rank")]
    max_len: Option<u32>,
}

#[derive(Args, Debug)]
struct TranscodeArgs {
    /// Source alphabet size.
    #[arg(long)]
    k: Option<u32>,
    /// Target alphabet size (default k+1).
    #[arg(long)]
    to: Option<u32>,
    /// Input file with one word per line (`-` is the empty word); stdin when omitted.
    #[arg(long)]
    input: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct ConjugateArgs {
    #[command(flatten)]
    corpus: Corpus,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Default)]
struct Tolerances {
    /// Largest allowed step against the expected direction.
    #[arg(long, allow_hyphen_values = true)]
    tol_mono: Option<String>,
    /// Distance of the edge fractions from 0 and 1.
    #[arg(long)]
    tol_limit: Option<String>,
    /// Minimum R² of the log-mass fits.
    #[arg(long)]
    tol_r2: Option<f64>,
    /// Window width δ.
    #[arg(long)]
    tol_delta: Option<String>,
    /// Minimum distance of a window from the threshold.
    #[arg(long)]
    tol_cutoff: Option<String>,
}

#[derive(Args, Debug)]
struct CurveArgs {
    #[command(flatten)]
    corpus: Corpus,
    /// Parameter: signed-length, majority-balance or length.
    #[arg(long)]
    param: Option<String>,
    /// Count the errorless heuristic's answers on the language's target instead of membership.
    #[arg(long)]
    heuristic: bool,
    #[command(flatten)]
    tol: Tolerances,
    /// Also write the full report as JSON here.
    #[arg(long)]
    json: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct AuditArgs {
    /// Language token.
    #[arg(long)]
    lang: Option<String>,
    /// Alphabet size for tokens without `@k=`.
    #[arg(long)]
    k: Option<u32>,
    /// Balance polynomial, e.g. `n+8` (default).
    #[arg(long)]
    poly: Option<String>,
    /// Sparsity bound, e.g. `n^3` (default).
    #[arg(long)]
    poly_s: Option<String>,
    /// Largest index n audited (default 6).
    #[arg(long)]
    max_n: Option<u32>,
    /// Allowed deviation of split fractions (default 1/10).
    #[arg(long)]
    tol_split: Option<String>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    corpus: Corpus,
    #[arg(long)]
    param: Option<String>,
    /// Target word.
    #[arg(long)]
    target: Option<String>,
    #[arg(long)]
    cohort_size: Option<usize>,
    /// same-length or rank-neighborhood.
    #[arg(long)]
    cohort_policy: Option<String>,
    /// Probability that the device flips an answer, e.g. `1/10`.
    #[arg(long)]
    flip_probability: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct SuiteArgs {
    /// Write the results as JSON here in addition to the matrix.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct HeuristicArgs {
    #[arg(long)]
    lang: Option<String>,
    #[arg(long)]
    k: Option<u32>,
    /// Largest length (default 10).
    #[arg(long)]
    max_len: Option<u32>,
    /// identity, oracle or csb (default).
    #[arg(long)]
    phi: Option<String>,
    #[command(flatten)]
    common: Common,
}

/// An error carrying the process exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }

    pub fn check(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }
}

impl From<phaselab::Error> for Failure {
    fn from(e: phaselab::Error) -> Self {
        use phaselab::Error as E;
        let code = match &e {
            E::CapExceeded { .. } => 3,
            E::InvalidAlphabet(_)
            | E::InvalidWord { .. }
            | E::AlphabetMismatch { .. }
            | E::Parse(_)
            | E::UnknownLanguage(_)
            | E::UnknownParameter(_) => 2,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Transcode(a) => commands::transcode(a),
        Command::Conjugate(a) => commands::conjugate(a),
        Command::Curve(a) => commands::curve(a),
        Command::Audit(a) => commands::audit(a),
        Command::Verify(a) => commands::verify(a),
        Command::LemmaSuite(a) => commands::lemma_suite(a),
        Command::Heuristic(a) => commands::heuristic(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
