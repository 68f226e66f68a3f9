//! `adams-bar`: command-line front end for exact bar constructions.
//!
//! Exit status is 0 when every checked property holds, 1 when the report's
//! verdict is `fail`, and 2 for unreadable or malformed input.

mod commands;
mod json;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::Value;

use commands::{CliResult, Outcome, Window};

#[derive(Parser, Debug)]
#[command(name = "adams-bar", version, about = "Exact bar constructions and minimal models of Adams-graded cdgas")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Largest Adams weight considered.
    #[arg(long, global = true, default_value_t = 4)]
    wt_max: usize,
    /// Largest cohomological degree considered.
    #[arg(long, global = true, default_value_t = 5)]
    deg_max: i64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check bidegrees, d² = 0 and the table axioms.
    Validate { file: PathBuf },
    /// Cohomology dimensions and representatives per bidegree.
    Cohomology { file: PathBuf },
    /// The Hopf algebra H⁰ of the reduced bar construction.
    BarH0 { file: PathBuf },
    /// The coLie coalgebra of indecomposables of H⁰.
    Colie { file: PathBuf },
    /// The (relative) n-minimal model.
    MinimalModel {
        file: PathBuf,
        #[arg(long)]
        base: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
    /// Compare the minimal model indecomposables with the bar indecomposables.
    Quillen { file: PathBuf },
    /// Kernel of the map to the base Hopf algebra and the product formula.
    Kernel {
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        total: PathBuf,
    },
    /// Compare the two co-actions on the kernel generators.
    CoactionCheck {
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        total: PathBuf,
    },
    /// H⁰ of the finite cosimplicial approximations and their stabilization.
    DeltaApprox {
        file: PathBuf,
        #[arg(long)]
        n: usize,
        /// Use the fiber over this base instead of the algebra itself.
        #[arg(long)]
        base: Option<PathBuf>,
    },
    /// Bar data of the projective line minus k points.
    Pi1Demo {
        #[arg(long)]
        punctures: usize,
    },
    /// Validate a cell module and report its cohomology and weights.
    Module {
        file: PathBuf,
        #[arg(long)]
        over: PathBuf,
    },
}

fn run(cli: &Cli) -> CliResult<Outcome> {
    let w = Window { deg_max: cli.deg_max, wt_max: cli.wt_max };
    match &cli.command {
        Command::Validate { file } => commands::validate(file, w),
        Command::Cohomology { file } => commands::cohomology(file, w),
        Command::BarH0 { file } => commands::bar_h0(file, w),
        Command::Colie { file } => commands::colie(file, w),
        Command::MinimalModel { file, base, n } => commands::minimal_model_cmd(file, base.as_deref(), *n, w),
        Command::Quillen { file } => commands::quillen(file, w),
        Command::Kernel { base, total } => commands::relative_report("kernel", base, total, w),
        Command::CoactionCheck { base, total } => commands::relative_report("coaction-check", base, total, w),
        Command::DeltaApprox { file, n, base } => commands::delta_approx(file, base.as_deref(), *n, w),
        Command::Pi1Demo { punctures } => commands::pi1_demo(*punctures, w),
        Command::Module { file, over } => commands::module(file, over, w),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("adams-bar: {e}");
            return ExitCode::from(2);
        }
    };
    let text = json::render(&Value::Object(outcome.report));
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("adams-bar: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if outcome.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
