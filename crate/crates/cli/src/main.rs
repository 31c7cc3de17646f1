//! `summability`: command-line front end for the calculator and the
//! experiments.
//!
//! Exit status: 0 on success, 1 for malformed flags or configuration, 2 when
//! a formula's hypotheses fail, 3 when a size budget is exceeded and 4 for
//! unreadable or inconsistent data.

mod args;
mod commands;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use summability::io::{ConfigFile, CotypeTable};
use summability::Error;

use args::{Cli, Command};
use commands::Context;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parameter(_) | Error::Config(_) => 1,
        e if e.is_hypothesis_failure() => 2,
        Error::Size { .. } => 3,
        _ => 4,
    }
}

fn run(cli: Cli, invocation: Vec<String>) -> Result<output::Output, Error> {
    let table = match &cli.cotype_table {
        Some(path) => CotypeTable::load(path)?,
        None => CotypeTable::builtin(),
    };
    let config = cli.config.as_deref().map(ConfigFile::load).transpose()?;
    let ctx = Context {
        format: cli.format,
        seed: cli.seed,
        config,
        table,
        invocation,
    };
    match &cli.command {
        Command::Bounds(a) => commands::bounds(&ctx, a),
        Command::Construct(a) => commands::construct(&ctx, a),
        Command::Norm(a) => commands::norm(&ctx, a),
        Command::Estimate(a) => commands::estimate(&ctx, a),
        Command::Verify(a) => commands::verify(&ctx, a),
        Command::Presets => commands::presets(&ctx),
        Command::Report(a) => commands::report(&ctx, a),
    }
}

fn main() -> ExitCode {
    let invocation: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&invocation) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli, invocation) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.stdout.as_bytes());
            let _ = stdout.flush();
            for w in out.warnings {
                eprintln!("{w}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::Size { budget, .. } = &e {
                eprintln!(
                    "the budget is {budget}; raise it with {}",
                    summability::numerics::form::BUDGET_ENV
                );
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
