use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use sobconst_cli::{run, Cli, Status};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli);
    let failed_write = match (&cli.output, outcome.status) {
        (_, Status::Usage) => {
            eprint!("{}", outcome.output);
            false
        }
        (Some(path), _) => std::fs::write(path, &outcome.output).is_err(),
        (None, _) => std::io::stdout().write_all(outcome.output.as_bytes()).is_err(),
    };
    if failed_write {
        eprintln!("error: could not write output");
        return ExitCode::from(Status::CheckFailed as u8);
    }
    ExitCode::from(outcome.status as u8)
}
