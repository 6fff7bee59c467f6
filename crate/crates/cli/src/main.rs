use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use rpgroup_cli::{load, run, Cli, CliError, Options, OutputFormat};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = Options {
        seed: cli.seed,
        cap: cli.cap,
    };
    let report = load(&cli).and_then(|ws| run(&ws, &cli.command, &opts));
    match report {
        Ok(r) => {
            let out = match cli.output {
                OutputFormat::Text => r.to_text(),
                OutputFormat::Json => format!("{}\n", r.to_json()),
            };
            let _ = std::io::stdout().lock().write_all(out.as_bytes());
            if r.objects.contains_key("unsupported") {
                ExitCode::from(2)
            } else if r.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                CliError::Engine(rpgroup::Error::Resource(_)) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}
