use std::process::ExitCode;

use clap::Parser;

use cliffspec_cli::commands::{run, Cli};
use cliffspec_cli::io::write_atomic;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|out| {
        write_atomic(cli.output.as_deref(), &out.contents)?;
        Ok(out.passed)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code())
        }
    }
}
