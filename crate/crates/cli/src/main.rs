use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

/// Exact tools for Fano complete intersections of index one.
#[derive(Debug, Parser)]
#[command(name = "fano", version)]
pub struct Cli {
    /// Report format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Probabilistic,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certificate for one degree tuple.
    Classify {
        /// Comma-separated degrees, e.g. 2,5,5,5,7.
        #[arg(long)]
        degrees: String,
    },
    /// Degree tuples in one ambient projective space matching a filter.
    Enumerate {
        /// Sum of the degrees.
        #[arg(long)]
        ambient: u64,
        /// Number of equations.
        #[arg(long)]
        k: Option<usize>,
        /// Filter expression: all, ke, df, none, t6:ii, t6-not-t4, !t3, a,b for "and".
        #[arg(long, default_value = "all")]
        filter: String,
        #[arg(long)]
        max_degree: Option<u32>,
    },
    /// The families in P^24 gained by case (ii) of the weaker dimension bound.
    Remark1,
    /// Exact sweep of the codimension inequalities.
    Audit(AuditArgs),
    /// Regularity of a complete intersection at the origin.
    Regcheck(RegcheckArgs),
    /// Sampled regularity of random complete intersections.
    Randomci(RandomciArgs),
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    #[arg(long, default_value_t = 30)]
    pub k_max: usize,
    #[arg(long, default_value_t = 200)]
    pub m_max: u64,
    /// Tuple-level checks run for k up to this value.
    #[arg(long, default_value_t = 5)]
    pub tail_k_max: usize,
    /// Tuple-level checks run for M up to this value.
    #[arg(long, default_value_t = 60)]
    pub tail_m_max: u64,
    #[arg(long)]
    pub max_degree: Option<u32>,
    /// Work units before the sweep is truncated.
    #[arg(long)]
    pub budget: Option<u64>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    /// Codimension kernel.
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    pub mode: Mode,
    /// Restrict parts of degree >= 2 to the linear cut before testing.
    #[arg(long)]
    pub reduced: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Slicing trials per step in probabilistic mode.
    #[arg(long)]
    pub trials_per_slice: Option<u32>,
    /// Lift the variable and generator caps of the exact kernel.
    #[arg(long)]
    pub unlimited: bool,
}

#[derive(Debug, Args)]
pub struct RegcheckArgs {
    /// Instance JSON; "-" reads standard input.
    #[arg(long)]
    pub input: PathBuf,
    /// Number of random linear forms; defaults to the form in the input, else 8.
    #[arg(long)]
    pub samples: Option<usize>,
    #[command(flatten)]
    pub oracle: OracleArgs,
}

#[derive(Debug, Args)]
pub struct RandomciArgs {
    #[arg(long)]
    pub degrees: String,
    /// Prime field, gf:<p>.
    #[arg(long)]
    pub field: String,
    /// Number of random instances; instance t uses seed + t.
    #[arg(long)]
    pub trials: u64,
    /// Random linear forms per instance.
    #[arg(long, default_value_t = fano_ci::regularity::DEFAULT_SAMPLES)]
    pub samples: usize,
    /// Test the first coordinate not vanishing on the tangent space instead of random forms.
    #[arg(long, conflicts_with = "samples")]
    pub first_coordinate: bool,
    #[command(flatten)]
    pub oracle: OracleArgs,
}

/// A failure with its process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<fano_ci::Error> for Failure {
    fn from(e: fano_ci::Error) -> Self {
        let code = match e {
            fano_ci::Error::Budget(_) => 3,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure { code: 2, message: e.to_string() }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure { code: 2, message: e.to_string() }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure { code: 2, message: e.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = commands::run(&cli, &mut out);
    let flushed = out.flush();
    match (result, flushed) {
        (Ok(code), Ok(())) => ExitCode::from(code),
        (Err(f), _) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
        (_, Err(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        (_, Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
