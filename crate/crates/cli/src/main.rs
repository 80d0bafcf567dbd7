use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use quadsemi_cli::commands::{self, Limit, SweepOptions};
use quadsemi_cli::{render, CliError, Output};

#[derive(Parser)]
#[command(
    name = "quadsemi",
    version,
    about = "Totally positive integers of real quadratic fields"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Continued fraction of sigma, the units and parity facts.
    #[command(allow_negative_numbers = true)]
    Cf { d: i64 },
    /// Canonical form, UD verdict and norm bounds of a + b omega.
    #[command(allow_negative_numbers = true)]
    Classify { d: i64, a: BigInt, b: BigInt },
    /// Lists the indecomposables beta_j.
    Indecomposables(IndecomposablesArgs),
    /// Number of uniquely decomposable elements up to totally positive units.
    #[command(allow_negative_numbers = true)]
    CountUd {
        d: i64,
        /// Also count by exhaustive decomposition search and compare.
        #[arg(long)]
        verify_brute: bool,
    },
    /// Checks the norm identities and bounds on a parameter grid.
    #[command(allow_negative_numbers = true)]
    NormAudit {
        d: i64,
        #[arg(long, default_value_t = 10)]
        max_ef: u64,
        #[arg(long, default_value_t = 9)]
        max_i: i64,
    },
    /// Recovers D from a scrambled copy of the semigroup.
    #[command(allow_negative_numbers = true)]
    Reconstruct {
        d: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Runs every check over a range of D, one JSON line per field.
    Sweep(SweepArgs),
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct IndecomposablesArgs {
    d: i64,
    #[command(flatten)]
    limit: LimitArgs,
    /// Include the conjugates beta_{-j}.
    #[arg(long)]
    with_conjugates: bool,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct LimitArgs {
    /// The first N indecomposables beta_0, ..., beta_{N-1}.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    count: Option<u64>,
    /// All indecomposables with trace at most T.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    max_trace: Option<u64>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    from: i64,
    #[arg(long)]
    to: i64,
    /// Worker threads; defaults to one per core.
    #[arg(long, env = "QUADSEMI_JOBS")]
    jobs: Option<usize>,
    /// Write the JSON lines here instead of stdout.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    /// Seed of the scrambled oracle used for reconstruction.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    max_ef: u64,
    #[arg(long, default_value_t = 9)]
    max_i: i64,
    /// Leave timings out, for byte-identical reruns.
    #[arg(long)]
    no_timings: bool,
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Cf { d } => commands::cf(*d),
        Command::Classify { d, a, b } => commands::classify(*d, a, b),
        Command::Indecomposables(args) => {
            let limit = match (args.limit.count, args.limit.max_trace) {
                (Some(n), None) => Limit::Count(n),
                (None, Some(t)) => Limit::MaxTrace(t),
                _ => unreachable!("clap enforces exactly one limit"),
            };
            commands::indecomposables(args.d, limit, args.with_conjugates)
        }
        Command::CountUd { d, verify_brute } => commands::count_ud(*d, *verify_brute),
        Command::NormAudit { d, max_ef, max_i } => commands::norm_audit(*d, *max_ef, *max_i),
        Command::Reconstruct { d, seed } => commands::reconstruct_cmd(*d, *seed),
        Command::Sweep(a) => commands::sweep(&SweepOptions {
            from: a.from,
            to: a.to,
            jobs: a.jobs,
            seed: a.seed,
            max_ef: a.max_ef,
            max_i: a.max_i,
            timings: !a.no_timings,
        }),
    }
}

fn write_output(out: &Output, format: Format, sink: &mut dyn Write) -> io::Result<()> {
    for line in &out.lines {
        match format {
            Format::Json => writeln!(sink, "{line}")?,
            Format::Text => write!(sink, "{}", render::to_text(line))?,
        }
    }
    sink.flush()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match run(&cli) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.code as u8);
        }
    };
    let target = match &cli.command {
        Command::Sweep(SweepArgs {
            out: Some(path), ..
        }) => Some(path),
        _ => None,
    };
    let written = match target {
        Some(path) => {
            File::create(path).and_then(|f| write_output(&out, cli.format, &mut BufWriter::new(f)))
        }
        None => write_output(&out, cli.format, &mut io::stdout().lock()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(commands::EXIT_USAGE as u8);
    }
    ExitCode::from(out.code as u8)
}
