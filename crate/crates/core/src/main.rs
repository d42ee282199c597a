use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qcnoise::{parse_config, Error};

/// Two-qubit dynamics under classical static noise.
#[derive(Parser)]
#[command(name = "qcnoise", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute the run described by a configuration file.
    Run {
        config: PathBuf,
        /// Write outputs here instead of the configured `[output] dir`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate a configuration file and print it with all defaults filled in.
    Check { config: PathBuf },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(command: Command) -> qcnoise::Result<()> {
    match command {
        Command::Run { config, out } => {
            let mut cfg = load(&config)?;
            if let Some(dir) = out {
                cfg.output_dir = dir;
            }
            let summary = qcnoise::run(&cfg)?;
            for f in summary.files {
                println!("{}", f.display());
            }
        }
        Command::Check { config } => print!("{}", load(&config)?.dump()),
    }
    Ok(())
}

fn load(path: &PathBuf) -> qcnoise::Result<qcnoise::RunConfig> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.clone(),
        source,
    })?;
    parse_config(&text)
}
