use std::process::ExitCode;

use ancillary_cli::{run, write_outputs, Cli, EXIT_INPUT};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(outcome) => outcome,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            return ExitCode::from(failure.exit_code as u8);
        }
    };
    print!("{}", outcome.report.render());
    if let Some(dir) = &cli.out {
        if let Err(e) = write_outputs(dir, &outcome.report) {
            eprintln!("error: writing {}: {e}", dir.display());
            return ExitCode::from(EXIT_INPUT as u8);
        }
    }
    ExitCode::from(outcome.exit_code as u8)
}
