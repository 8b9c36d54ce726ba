use std::process::ExitCode;

use clap::Parser;
use wavespin_cli::{run, Cli, CliError};

fn threads() -> Result<Option<usize>, CliError> {
    match std::env::var("WAVESPIN_THREADS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n >= 1)
            .map(Some)
            .ok_or_else(|| CliError::Validation(format!("WAVESPIN_THREADS must be a positive integer, got '{v}'"))),
        Err(_) => Ok(None),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = threads().and_then(|n| {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = n {
            builder = builder.num_threads(n);
        }
        let pool = builder.build().map_err(|e| CliError::Validation(e.to_string()))?;
        pool.install(|| run(&cli))
    });
    match result {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("wavespin: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
