//! Command-line front end: the input format, commands and output.

pub mod build;
pub mod commands;
pub mod doc;
pub mod error;
pub mod render;

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::Parser;

pub use commands::{execute, Command, MemberOf, Options, Outcome};
pub use error::{CliError, Result};
pub use render::Format;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum FormatArg {
    Text,
    Dot,
}

/// Saturation algorithms for pushdown systems and games.
///
/// Exit status: 0 success (or `member` answered yes), 1 `member` answered
/// no, 2 parse or validation failure, 3 oracle disagreement.
#[derive(Debug, Parser)]
#[command(name = "pdsat", version)]
pub struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Input document; standard input when absent.
    #[arg(long = "in", value_name = "FILE")]
    input: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
    /// Configuration for `member`, top of stack first: "p : A B _".
    #[arg(long)]
    config: Option<String>,
    /// Source control state for `deriv`.
    #[arg(long)]
    from: Option<String>,
    /// Target control state for `deriv`.
    #[arg(long)]
    to: Option<String>,
    /// Cross-check against the bounded explicit-state oracle of height H.
    #[arg(long, value_name = "H")]
    oracle_check: Option<usize>,
    /// What `member` tests against.
    #[arg(long, value_enum, default_value = "prestar")]
    of: MemberOf,
}

impl Cli {
    fn options(&self) -> Options {
        Options {
            format: match self.format {
                FormatArg::Text => Format::Text,
                FormatArg::Dot => Format::Dot,
            },
            config: self.config.clone(),
            from: self.from.clone(),
            to: self.to.clone(),
            oracle_check: self.oracle_check,
            of: self.of,
        }
    }
}

fn read_input(cli: &Cli) -> Result<String> {
    let mut text = String::new();
    match &cli.input {
        Some(path) => {
            text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?
        }
        None => {
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|source| CliError::Io {
                    path: "<stdin>".into(),
                    source,
                })?;
        }
    }
    Ok(text)
}

fn write_output(cli: &Cli, text: &str) -> Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}

/// Runs the parsed command line and returns the exit status.
pub fn run(cli: &Cli) -> i32 {
    let result = read_input(cli).and_then(|text| execute(cli.command, &cli.options(), &text));
    match result {
        Ok(outcome) => {
            for line in &outcome.stderr {
                eprintln!("{line}");
            }
            if let Err(e) = write_output(cli, &outcome.stdout) {
                eprintln!("error: {e}");
                return e.exit_code();
            }
            outcome.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
