//! `pathlet`: train codebooks, featurize documents and identify writers.

mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;
use pathlet_core::Error;

use args::{Cli, Command};

/// Process exit status by error category.
fn exit_code(err: &anyhow::Error) -> u8 {
    match err.chain().find_map(|e| e.downcast_ref::<Error>()) {
        Some(Error::Config(_) | Error::InvalidLevel(_)) => 2,
        Some(Error::Io { .. } | Error::Image { .. } | Error::Manifest(_) | Error::Csv(_) | Error::Format { .. }) => 3,
        Some(Error::DimensionMismatch { .. } | Error::FingerprintMismatch(_) | Error::LevelMismatch { .. }) => 4,
        _ if err.chain().any(|e| e.is::<std::io::Error>()) => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(cli.log_level()))
        .format_timestamp(None)
        .init();
    let result = match &cli.command {
        Command::GenerateSynthetic(a) => commands::generate_synthetic(&cli, a),
        Command::Train(a) => commands::train(&cli, a),
        Command::Featurize(a) => commands::featurize(&cli, a),
        Command::Evaluate(a) => commands::evaluate(&cli, a),
        Command::Identify(a) => commands::identify(&cli, a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
