//! `qpart` — partition functions of quiver mutation sequences.
//!
//! Reads a single JSON job (from `--input` or stdin), runs one command and
//! prints the report to stdout; diagnostics go to stderr. Exit codes:
//! 0 success/pass, 1 verification failure, 2 input error.

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use qpart_cli::job;

use job::{Format, JobError, Overrides};

#[derive(Parser)]
#[command(
    name = "qpart",
    about = "Exact partition functions of quiver mutation sequences and \
             quantum dilogarithm identity checks"
)]
struct Cli {
    /// JSON job file; reads stdin when omitted
    #[arg(long)]
    input: Option<PathBuf>,

    /// Command: mutate, cmatrix, classify, zfun, coeff, verify-thm1,
    /// verify-thm2, identity, stanley (overrides the job's "command")
    #[arg(long)]
    command: Option<String>,

    /// Truncation degree D (overrides the job's "degree"; default 4)
    #[arg(long)]
    degree: Option<u32>,

    /// Output format: json or text
    #[arg(long)]
    format: Option<String>,

    /// Initial s-variables as a comma list, e.g. --r=-2,1
    #[arg(long, allow_hyphen_values = true)]
    r: Option<String>,

    /// Degree vector as a comma list, e.g. --beta=1,1,2
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
}

fn parse_int_list(text: &str, flag: &str) -> Result<Vec<i64>, JobError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|part| {
            part.trim().parse::<i64>().map_err(|_| {
                JobError::Validation(format!("{flag}: invalid integer {part:?}"))
            })
        })
        .collect()
}

fn run(cli: Cli) -> Result<job::Outcome, JobError> {
    let input = match &cli.input {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| JobError::Validation(format!("cannot read {}: {e}", path.display())))?,
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| JobError::Validation(format!("cannot read stdin: {e}")))?;
            buf
        }
    };
    let overrides = Overrides {
        command: cli.command,
        degree: cli.degree,
        r: cli.r.as_deref().map(|s| parse_int_list(s, "--r")).transpose()?,
        beta: cli.beta.as_deref().map(|s| parse_int_list(s, "--beta")).transpose()?,
        format: cli.format.as_deref().map(Format::parse).transpose()?,
    };
    let spec = job::parse_job(&input, &overrides)?;
    job::dispatch(&spec)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(job::EXIT_INPUT as u8)
        }
    }
}
