use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use streamlearn::cli::{self, CliError};

#[derive(Parser)]
#[command(
    name = "streamlearn",
    version,
    about = "Run stream learning experiments"
)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a JSON config file.
    Run {
        config: PathBuf,
        /// Write 0 in the wall_time_s column so traces compare byte for byte.
        #[arg(long)]
        no_timing: bool,
    },
    /// Write instances of a generator to a CSV file.
    Generate {
        name: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Generator parameter as key=value; repeatable.
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
    },
    /// List registered generators, learners, detectors and evaluators.
    List,
}

fn execute(command: Command) -> anyhow::Result<()> {
    match command {
        Command::Run { config, no_timing } => {
            let summary = cli::run_file(&config, no_timing)?;
            println!("{}", summary.line());
        }
        Command::Generate {
            name,
            n,
            seed,
            out,
            params,
        } => {
            let written = cli::generate(&name, n, seed, &params, &out)
                .with_context(|| format!("generate {name}"))?;
            println!("wrote {written} instances to {}", out.display());
        }
        Command::List => {
            for line in cli::list() {
                println!("{line}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(args.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e.downcast_ref::<CliError>().map_or(3, CliError::exit_code);
            ExitCode::from(code)
        }
    }
}
