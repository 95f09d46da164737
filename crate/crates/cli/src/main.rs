mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::json;

use args::{Cli, Format};

pub struct Settings {
    pub precision_bits: usize,
    pub seed: u64,
}

#[derive(Debug)]
pub enum CliError {
    Core(overlapkit::Error),
    Io { path: String, message: String },
    Usage(String),
}

macro_rules! core_error {
    ($($t:ty),*) => {
        $(impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Core(e.into())
            }
        })*
    };
}

core_error!(
    overlapkit::exactnum::ExactError,
    overlapkit::intpoly::PolyError,
    overlapkit::ifs::IfsError,
    overlapkit::graphdir::GraphError,
    overlapkit::obstruction::ObstructionError,
    overlapkit::numlab::NumlabError,
    overlapkit::Error
);

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => e.class().exit_code(),
            CliError::Io { .. } | CliError::Usage(_) => 1,
        }
    }

    fn to_json(&self) -> serde_json::Value {
        let (kind, class, message) = match self {
            CliError::Core(e) => (e.kind(), format!("{:?}", e.class()), e.to_string()),
            CliError::Io { path, message } => (
                "Io".to_string(),
                "InvalidInput".to_string(),
                format!("{path}: {message}"),
            ),
            CliError::Usage(message) => (
                "Usage".to_string(),
                "InvalidInput".to_string(),
                message.clone(),
            ),
        };
        json!({"error": kind, "class": class, "exit_code": self.exit_code(), "message": message})
    }
}

const MIN_PRECISION_BITS: usize = 53;

fn execute(cli: &Cli) -> Result<i32, CliError> {
    if cli.precision_bits < MIN_PRECISION_BITS {
        return Err(overlapkit::exactnum::ExactError::PrecisionTooLow(cli.precision_bits).into());
    }
    let settings = Settings {
        precision_bits: cli.precision_bits,
        seed: cli.seed,
    };
    let outcome = commands::run(&cli.command, &settings)?;
    let rendered = match cli.format {
        Format::Json => output::json(&outcome.report),
        Format::Text => output::text(&outcome.report),
    };
    match &cli.output {
        Some(path) => output::write_atomic(path, &rendered)?,
        None => print!("{rendered}"),
    }
    Ok(outcome.exit_code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::Usage(e.render().to_string().trim().to_string());
            eprintln!("{}", err.to_json());
            return ExitCode::from(err.exit_code() as u8);
        }
    };
    match execute(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("{}", err.to_json());
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
