//! Command-line surface: argument definitions, dispatch and exit codes.
//!
//! Exit codes: 0 success, 1 malformed arguments or unusable input files,
//! 2 cryptographic errors, 3 failed correctness checks. Errors print as
//! one-line JSON on stderr.

pub mod bench;
pub mod commands;
pub mod error;
pub mod files;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::CliError;

#[derive(Parser)]
#[command(
    name = "cipherbridge",
    version,
    about = "Convert ciphertexts between encryption schemes and measure it"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Generate scheme keys or bridge key material
    Keygen(KeygenArgs),
    /// Encrypt one message under a public key file
    Enc(EncArgs),
    /// Decrypt a ciphertext file
    Dec(DecArgs),
    /// Convert a ciphertext across a bridge
    Bridge(BridgeArgs),
    /// Homomorphically compare two encrypted bit vectors
    Compare(CompareArgs),
    /// Run an IND-CPA experiment and report the advantage
    Game(GameArgs),
    /// Benchmark the comparison circuit or fit a recorded CSV
    Bench(BenchArgs),
}

#[derive(Args)]
pub struct KeygenArgs {
    /// Scheme to generate keys for: gm, syy, csgn or mock
    #[arg(long, conflicts_with = "bridge")]
    pub scheme: Option<String>,

    /// Bridge to generate key material for: gm-syy, identity-gm, csgn-mock-1..4
    #[arg(long)]
    pub bridge: Option<String>,

    /// Modulus size in bits (gm, syy and their bridges)
    #[arg(long, default_value_t = 1024)]
    pub bits: u64,

    /// Vector length (syy and gm-syy)
    #[arg(long, default_value_t = 50)]
    pub ell: usize,

    /// Ciphertext dimension (csgn)
    #[arg(long, default_value_t = 256)]
    pub n: usize,

    /// Zeros per fresh ciphertext (csgn)
    #[arg(long, default_value_t = 16)]
    pub d: usize,

    /// Secret subset size (csgn)
    #[arg(long, default_value_t = 32)]
    pub s: usize,

    /// Plaintext ring for mock keys: f2, or fp:p for a prime p
    #[arg(long, default_value = "f2")]
    pub ring: String,

    /// Multiplicative depth capacity for mock keys; unbounded when omitted
    #[arg(long)]
    pub capacity: Option<u32>,

    /// Master seed; together with the arguments it determines every output
    #[arg(long)]
    pub seed: u64,

    /// Output path prefix; suffixes .pk.json/.sk.json/.key.json/.bridge.json
    #[arg(long)]
    pub out: PathBuf,

    /// Allow writing artifacts backed by the transparent (insecure) backend
    #[arg(long)]
    pub insecure: bool,
}

#[derive(Args)]
pub struct EncArgs {
    /// Public key file (or the symmetric key file)
    #[arg(long)]
    pub key: PathBuf,

    /// The message: a bit for gm/syy/csgn, an integer for mock
    #[arg(long)]
    pub message: String,

    #[arg(long)]
    pub seed: u64,

    #[arg(long)]
    pub out: PathBuf,

    /// Allow writing mock ciphertexts
    #[arg(long)]
    pub insecure: bool,
}

#[derive(Args)]
pub struct DecArgs {
    /// Secret key file (or the symmetric key file)
    #[arg(long)]
    pub key: PathBuf,

    /// Ciphertext file
    #[arg(long = "in")]
    pub input: PathBuf,

    /// Write the result here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct BridgeArgs {
    /// Bridge key material produced by keygen --bridge
    #[arg(long)]
    pub keys: PathBuf,

    /// Source ciphertext file
    #[arg(long = "in")]
    pub input: PathBuf,

    #[arg(long)]
    pub out: PathBuf,

    #[arg(long)]
    pub seed: u64,

    /// Decrypt both sides and fail (exit 3) if the plaintexts differ
    #[arg(long)]
    pub check: bool,

    /// Allow writing mock ciphertexts
    #[arg(long)]
    pub insecure: bool,
}

#[derive(Args)]
pub struct CompareArgs {
    /// gm-syy bridge key material
    #[arg(long)]
    pub keys: PathBuf,

    /// First bit vector, hex packed
    #[arg(long)]
    pub x: String,

    /// Second bit vector, hex packed
    #[arg(long)]
    pub y: String,

    /// Number of bits in each vector
    #[arg(long)]
    pub n: usize,

    #[arg(long)]
    pub seed: u64,

    /// Also write the resulting ciphertext here
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Fail (exit 3) unless the verdict matches
    #[arg(long)]
    pub expect: Option<u8>,
}

#[derive(Args)]
pub struct GameArgs {
    /// Scheme to attack: gm, mock or csgn
    #[arg(long, conflicts_with = "bridge")]
    pub scheme: Option<String>,

    /// Bridge to attack through its graph scheme: gm-syy
    #[arg(long)]
    pub bridge: Option<String>,

    /// Adversary: random, parity, factoring, transparent, recover, first-parity
    #[arg(long, default_value = "random")]
    pub adversary: String,

    /// Modulus size; fresh keys are drawn every trial, keep this small
    #[arg(long, default_value_t = 64)]
    pub bits: u64,

    #[arg(long, default_value_t = 8)]
    pub ell: usize,

    #[arg(long, default_value_t = 64)]
    pub n: usize,

    #[arg(long, default_value_t = 8)]
    pub d: usize,

    #[arg(long, default_value_t = 16)]
    pub s: usize,

    /// Plaintext ring for mock games: f2, or fp:p for a prime p
    #[arg(long, default_value = "f2")]
    pub ring: String,

    /// Trials per experiment arm
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,

    #[arg(long)]
    pub seed: u64,

    /// Worker threads; the outcome does not depend on this
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,

    /// Reuse one key pair for all trials (faster, not the standard game)
    #[arg(long)]
    pub fixed_key: bool,

    /// Write the report here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct BenchArgs {
    /// Bridge to measure
    #[arg(long, default_value = "gm-syy")]
    pub bridge: String,

    /// Input widths to measure, comma separated
    #[arg(long, value_delimiter = ',', default_value = "4,8,16,32")]
    pub n: Vec<usize>,

    #[arg(long, default_value_t = 256)]
    pub bits: u64,

    #[arg(long, default_value_t = 50)]
    pub ell: usize,

    /// Repetitions per width (at least 10)
    #[arg(long, default_value_t = 30)]
    pub reps: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Write the CSV here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Fit a previously recorded CSV instead of measuring
    #[arg(long)]
    pub fit: Option<PathBuf>,
}

/// Parses and runs; returns the process exit code. Errors go to stderr as
/// one-line JSON.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let err = CliError::Args(e.to_string());
            eprintln!("{}", err.to_json());
            return err.exit_code();
        }
    };
    match commands::dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.exit_code()
        }
    }
}
