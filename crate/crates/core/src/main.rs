use std::process::ExitCode;

use clap::Parser;
use quasi_sharp::cli::{self, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli::run(&cli).and_then(|report| {
        let body = cli::emit(&report, cli.output())?;
        if cli.output().out.is_none() {
            print!("{body}");
        }
        eprint!("{}", report.summary());
        Ok(report.pass)
    }) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(cli::exit_code(&e))
        }
    }
}
