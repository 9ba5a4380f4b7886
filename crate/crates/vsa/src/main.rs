use clap::Parser;
use vsa::cli::{exit_code, run_command, Cli};

fn main() {
    let cli = Cli::parse();
    let result = run_command(&cli.command);
    if let Err(err) = &result {
        eprintln!("error: {err}");
    }
    std::process::exit(exit_code(&result));
}
