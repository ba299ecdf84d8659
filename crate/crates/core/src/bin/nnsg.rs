use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nonneg_semigroups::cli::{self, CommonOptions, CounterexampleArgs, ScaleArgs, TropicalArgs};
use nonneg_semigroups::report::Report;

/// Walk closures, scaling certificates and structure checks for nonnegative matrix semigroups.
#[derive(Parser)]
#[command(name = "nnsg", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Tolerance override (wins over the file's config).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Closure enumeration cap.
    #[arg(long, global = true)]
    cap: Option<usize>,
    /// Treat an incomplete closure as a failure to certify.
    #[arg(long, global = true)]
    strict: bool,
    /// Omit the timestamp so identical runs give identical bytes.
    #[arg(long, global = true)]
    reproducible: bool,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Max-plus walk supremum, divergence, potential and bump of one matrix.
    Tropical {
        file: PathBuf,
        /// Matrix to use as the weight matrix (default: the first one).
        #[arg(long)]
        matrix: Option<String>,
        /// 1-based basepoint for the potential.
        #[arg(long)]
        basepoint: Option<usize>,
        /// Bound K for the bump construction.
        #[arg(long)]
        bump: Option<f64>,
        /// Fail when no potential exists, even without --basepoint.
        #[arg(long)]
        potential: bool,
    },
    /// Closure, sup function and diagonal domination certificate of the generated semigroup.
    Scale {
        file: PathBuf,
        /// Entry bound M; produces a certificate with entries in [1/M, M].
        #[arg(long = "M")]
        m: Option<f64>,
        #[arg(long, default_value_t = 1)]
        u: usize,
        #[arg(long, default_value_t = 1)]
        v: usize,
    },
    /// Diagonal rescaling to a 0/1 semigroup.
    Binary { file: PathBuf },
    /// Projection and partial-isometry checks on the given set.
    Operator { file: PathBuf },
    /// Truncated projection family with finitely many traces but infinitely many diagonal values.
    Counterexample {
        #[arg(long = "N", default_value_t = nonneg_semigroups::counterexample::DEFAULT_LEN)]
        n: usize,
        #[arg(long, default_value_t = nonneg_semigroups::counterexample::DEFAULT_M_MAX)]
        m_max: u32,
    },
}

fn with_file(
    name: &'static str,
    path: &Path,
    opts: &CommonOptions,
    run: impl FnOnce(&str) -> Report,
) -> Report {
    match std::fs::read_to_string(path) {
        Ok(text) => run(&text),
        Err(e) => cli::unreadable(name, path, &e, opts),
    }
}

fn main() -> ExitCode {
    let args = Cli::parse();
    let opts = CommonOptions {
        tol: args.common.tol,
        cap: args.common.cap,
        strict: args.common.strict,
        reproducible: args.common.reproducible,
    };
    let report = match &args.command {
        Command::Tropical {
            file,
            matrix,
            basepoint,
            bump,
            potential,
        } => {
            let t = TropicalArgs {
                matrix: matrix.clone(),
                basepoint: *basepoint,
                bump: *bump,
                potential: *potential,
            };
            with_file("tropical", file, &opts, |text| {
                cli::cmd_tropical(text, &t, &opts)
            })
        }
        Command::Scale { file, m, u, v } => {
            let s = ScaleArgs {
                m: *m,
                u: *u,
                v: *v,
            };
            with_file("scale", file, &opts, |text| cli::cmd_scale(text, &s, &opts))
        }
        Command::Binary { file } => {
            with_file("binary", file, &opts, |text| cli::cmd_binary(text, &opts))
        }
        Command::Operator { file } => with_file("operator", file, &opts, |text| {
            cli::cmd_operator(text, &opts)
        }),
        Command::Counterexample { n, m_max } => cli::cmd_counterexample(
            &CounterexampleArgs {
                len: *n,
                m_max: *m_max,
            },
            &opts,
        ),
    };
    if let Err(e) = cli::emit(&report, args.common.output.as_deref()) {
        eprintln!("nnsg: cannot write report: {e}");
        return ExitCode::from(3);
    }
    if let Some(msg) = &report.error {
        eprintln!("nnsg: {msg}");
    }
    ExitCode::from(report.exit_code() as u8)
}
