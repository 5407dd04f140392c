use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pseudoinv::RunConfig;

#[derive(Parser)]
#[command(name = "pseudoinv", version, about = "Invariant-based dynamics of non-Hermitian SU(1,1)/SU(2) Hamiltonians")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a scenario, verify it and write the report and curves.
    Run(RunConfig),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // usage errors are configuration errors
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let Command::Run(config) = cli.command;
    match pseudoinv::run(&config) {
        Ok(outcome) => {
            for r in outcome.residuals.iter().filter(|r| !r.within(config.tol)) {
                eprintln!("residual {} = {:e} exceeds tol {:e}", r.name, r.value, config.tol);
            }
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
