//! `cvflow`: flow analysis, circuit extraction and qudit verification for
//! weighted open graphs.
//!
//! Machine output is JSON on stdout (or `--out`), a one-line summary goes
//! to stderr. Exit codes: 0 success, 2 negative verdict, 1 error.

mod commands;
mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cvflow::qudit_sim::BranchPolicy;

use crate::input::FieldKind;

#[derive(Parser, Debug)]
#[command(
    name = "cvflow",
    version,
    about = "Flow finding and circuit extraction for weighted open graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Find a flow and report layers and correction vectors.
    Flow(GraphArgs),
    /// Extract a circuit from a graph with a flow.
    Extract {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        angles: AngleArgs,
    },
    /// Run the measurement pattern of a ℤ_d graph on a basis input.
    Simulate {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        angles: AngleArgs,
        #[command(flatten)]
        branches: BranchArgs,
        /// Input digits, comma separated, one per input in label order.
        #[arg(long, value_delimiter = ',')]
        input: Vec<u64>,
    },
    /// Compare the pattern with its extracted circuit branch by branch.
    Verify {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        angles: AngleArgs,
        #[command(flatten)]
        branches: BranchArgs,
        /// Fidelity tolerance.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Seed for the random inputs.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest number of computational basis inputs.
        #[arg(long, default_value_t = 8)]
        max_basis: usize,
        /// Number of random inputs.
        #[arg(long, default_value_t = 2)]
        random_inputs: usize,
        /// Perturb the correction vector of this vertex before running.
        #[arg(long, hide = true)]
        corrupt: Option<String>,
    },
    /// Run a built-in example end to end.
    Demo {
        #[arg(value_enum)]
        name: DemoName,
        /// Chain length for the adder.
        #[arg(long = "n", default_value_t = 3)]
        n: usize,
        /// Qudit dimension.
        #[arg(long, default_value_t = 5)]
        d: u64,
        /// Adder summands, comma separated; defaults to 1, 2, …, N.
        #[arg(long, value_delimiter = ',')]
        inputs: Vec<u64>,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args, Debug)]
struct GraphArgs {
    /// Graph document (JSON).
    #[arg(long)]
    graph: PathBuf,
    /// Override the field declared in the document.
    #[arg(long, value_enum)]
    field: Option<FieldKind>,
    /// Zero threshold for real weights.
    #[arg(long)]
    eps: Option<f64>,
    /// Prime modulus for ℤ_d weights.
    #[arg(long)]
    d: Option<u64>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args, Debug)]
struct OutArgs {
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug)]
struct AngleArgs {
    /// JSON object from vertex label to a measurement triple `[a, b, c]`;
    /// missing vertices get zeros.
    #[arg(long)]
    angles: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BranchArgs {
    /// `exhaustive` or `sample:N:SEED`.
    #[arg(long, default_value = "exhaustive", value_parser = input::parse_policy)]
    branches: BranchPolicy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Ascii,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
enum DemoName {
    Adder,
    GflowNotCvflow,
    CvflowNotGflow,
}

/// What a command produced, before it is written out.
pub struct Output {
    pub body: String,
    pub summary: String,
    pub negative: bool,
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors, which is reserved for negative
    // verdicts here.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match commands::run(cli.command) {
        Ok((out, target)) => {
            if let Err(e) = write(&out.body, target.as_deref()) {
                eprintln!("error: {e:#}");
                return ExitCode::from(1);
            }
            eprintln!("{}", out.summary);
            ExitCode::from(if out.negative { 2 } else { 0 })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn write(body: &str, target: Option<&std::path::Path>) -> anyhow::Result<()> {
    use anyhow::Context;
    match target {
        Some(p) => std::fs::write(p, body).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}
