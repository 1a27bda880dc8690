use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = bangla_ipa::cli::Cli::parse();
    ExitCode::from(bangla_ipa::cli::run(cli) as u8)
}
