//! Command-line front end over the `fzeta` library.

pub mod catalog;
pub mod commands;
pub mod config;
pub mod csvio;
pub mod error;

use std::fs::File;
use std::io::Write;

use catalog::Catalog;
use commands::Rendered;
use config::{Command, Format, RunConfig};
use error::{CliError, CliResult};

fn execute(cfg: &RunConfig) -> CliResult<Rendered> {
    let cat = match &cfg.catalog {
        Some(p) => Catalog::with_user_file(p)?,
        None => Catalog::builtin(),
    };
    match cfg.command {
        Command::List => commands::list(&cat),
        Command::Zeta => commands::zeta(&cat, cfg),
        Command::Dims => commands::dims(&cat, cfg),
        Command::Tube => commands::tube(&cat, cfg),
        Command::Validate => commands::validate_entry(&cat, cfg),
        Command::Report => commands::report(&cat, cfg),
        Command::Invert => commands::invert(&cat, cfg),
    }
}

/// Run one command, writing to --out when given and to `out` otherwise.
///
/// A failed validation still writes its table before returning the error.
pub fn run(cfg: &RunConfig, out: &mut dyn Write) -> CliResult<()> {
    let r = execute(cfg)?;
    let bytes = match cfg.format {
        Format::Text => r.text.into_bytes(),
        Format::Csv => r.csv,
        Format::Json => {
            let mut b = serde_json::to_vec_pretty(&r.json)?;
            b.push(b'\n');
            b
        }
    };
    match &cfg.output_path {
        Some(p) => File::create(p)?.write_all(&bytes)?,
        None => out.write_all(&bytes)?,
    }
    out.flush()?;
    match r.failure {
        Some(msg) => Err(CliError::Validation(msg)),
        None => Ok(()),
    }
}
