use std::process::ExitCode;

use clap::Parser;
use cluster_posterior_cli::args::{Cli, Command};
use cluster_posterior_cli::{commands, exit, CliError};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                exit::USAGE
            } else {
                exit::SUCCESS
            });
        }
    };
    let result = match &cli.command {
        Command::Run(args) => commands::run(args).map(|_| ()),
        Command::Generate(args) => commands::generate(args),
        Command::Verify(args) => commands::verify(args).and_then(|v| {
            print!("{}", v.render());
            if v.passed() {
                Ok(())
            } else {
                Err(CliError::mismatch("verification failed"))
            }
        }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
