//! Command-line front end: `simulate`, `analyze` and `verify`.
//!
//! Exit codes: 0 on success, 1 on bad usage or input (and on a failed
//! verification suite), 2 when a simulation ends on a blow-up signal.

pub mod commands;
pub mod manifest;
pub mod svg;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use commands::Status;
pub use manifest::{Outputs, RunManifest, OUTPUT_ROOT_ENV};

#[derive(Debug, Parser)]
#[command(name = "curvediff", version, about = "Curve diffusion flow simulator and checker")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the flow described by a manifest file.
    Simulate { manifest: PathBuf },
    /// Report metrics, hypotheses, crossings and certificates of a curve CSV.
    Analyze {
        curve: PathBuf,
        /// Report path; defaults to `<stem>.report.json` beside the input or
        /// under the output root.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named verification suite.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn output_root() -> Option<PathBuf> {
    std::env::var_os(OUTPUT_ROOT_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
}

/// Parses `args` and runs the command, returning the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { Status::Usage as i32 } else { Status::Ok as i32 };
        }
    };
    let root = output_root();
    let result = match &cli.command {
        Command::Simulate { manifest } => {
            RunManifest::read(manifest).and_then(|m| commands::simulate(&m, root.as_deref()))
        }
        Command::Analyze { curve, out } => commands::analyze(curve, out.as_deref(), root.as_deref()),
        Command::Verify { suite, seed } => commands::verify(suite, *seed),
    };
    match result {
        Ok(status) => status as i32,
        Err(e) => {
            eprintln!("error: {e}");
            Status::Usage as i32
        }
    }
}
