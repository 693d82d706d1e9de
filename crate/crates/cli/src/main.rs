use std::process::ExitCode;

use cilab_cli::{run, verdict_exit_code, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((report, text)) => {
            if let Some(path) = &cli.output {
                if let Err(e) = std::fs::write(path, &text) {
                    eprintln!("cilab: {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else {
                print!("{text}");
            }
            ExitCode::from(verdict_exit_code(report.verdict) as u8)
        }
        Err(e) => {
            eprintln!("cilab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
