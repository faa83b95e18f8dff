use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use toric_wci::{commands, resolve_budget, verify, CliError, Options, Output, BUDGET_ENV};

/// Exact checks for complete intersections in simplicial toric varieties.
///
/// Exit codes: 0 success, 1 verification failure, 2 input error,
/// 3 resource budget exceeded.
#[derive(Parser)]
#[command(name = "toric-wci", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Print machine-readable JSON instead of tables.
    #[arg(long, global = true)]
    json: bool,

    /// Only run verify-paper anchors whose id contains NAME.
    #[arg(long, global = true, value_name = "NAME")]
    filter: Option<String>,

    /// Lattice-enumeration budget (overrides TORIC_WCI_BUDGET).
    #[arg(long, global = true, value_name = "N")]
    budget: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Class group, grading, the group D and the irrelevant locus of a fan.
    Cl { file: String },
    /// Generalized weighted projective space classification of a fan.
    Classify { file: String },
    /// Well-formedness and Fano index of a complete intersection spec.
    Wf { file: String },
    /// Betti numbers of a fan, or Lefschetz predictions for a spec.
    Betti { file: String },
    /// Hypothesis report for a complete intersection spec.
    Verdict { file: String },
    /// Check the bundled corpus against golden values.
    VerifyPaper {
        /// Golden file to use instead of the bundled one.
        golden: Option<String>,
    },
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    let env = std::env::var(BUDGET_ENV).ok();
    let opts = Options {
        json: cli.json,
        filter: cli.filter.clone(),
        budget: resolve_budget(cli.budget, env.as_deref())?,
    };
    match &cli.command {
        Command::Cl { file } => commands::cmd_cl(file, &opts),
        Command::Classify { file } => commands::cmd_classify(file, &opts),
        Command::Wf { file } => commands::cmd_wf(file, &opts),
        Command::Betti { file } => commands::cmd_betti(file, &opts),
        Command::Verdict { file } => commands::cmd_verdict(file, &opts),
        Command::VerifyPaper { golden } => verify::cmd_verify_paper(golden.as_deref(), &opts),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let _ = std::io::stdout().write_all(out.text.as_bytes());
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
